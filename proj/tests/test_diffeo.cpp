#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "psflab/diffeo.hpp"
#include "psflab/quadrature.hpp"
#include "psflab/weak.hpp"

using namespace psflab::diffeo;
using psflab::engine::Side;
using psflab::lattice::TruncationBudget;
using psflab::schwartz::gaussian;
using psflab::schwartz::shift_modulate;
using std::complex;

namespace {

constexpr double kPi = 3.14159265358979323846;

Diffeo1D identity_map() {
  return Diffeo1D::make([](double x) { return x; }, [](double) { return 1.0; },
                        1.0, 1.0, "identity");
}

Diffeo1D double_map() {
  return Diffeo1D::make([](double x) { return 2.0 * x; }, [](double) { return 2.0; },
                        2.0, 2.0, "double");
}

Diffeo1D sin_map() {
  return Diffeo1D::make([](double x) { return x + 0.1 * std::sin(x); },
                        [](double x) { return 1.0 + 0.1 * std::cos(x); }, 0.9, 1.1,
                        "sin");
}

Diffeo1D sin2_map() {
  return Diffeo1D::make([](double x) { return 2.0 * x + 0.2 * std::sin(x); },
                        [](double x) { return 2.0 + 0.2 * std::cos(x); }, 1.8, 2.2,
                        "sin2");
}

std::vector<double> vec(std::initializer_list<double> v) { return v; }

}  // namespace

TEST_CASE("constructing a 1-D warp validates slopes and monotonicity") {
  CHECK_THROWS_AS(Diffeo1D::make(nullptr, [](double) { return 1.0; }, 1.0, 1.0, "x"),
                  std::invalid_argument);
  CHECK_THROWS_AS(Diffeo1D::make([](double x) { return x; }, nullptr, 1.0, 1.0, "x"),
                  std::invalid_argument);
  CHECK_THROWS_AS(Diffeo1D::make([](double x) { return x; },
                                 [](double) { return 1.0; }, 0.0, 1.0, "x"),
                  std::invalid_argument);
  CHECK_THROWS_AS(Diffeo1D::make([](double x) { return x; },
                                 [](double) { return 1.0; }, 1.0, 0.5, "x"),
                  std::invalid_argument);
  // claimed slope interval does not contain the actual slope
  CHECK_THROWS_AS(Diffeo1D::make([](double x) { return 2.0 * x; },
                                 [](double) { return 2.0; }, 0.5, 1.5, "lie"),
                  std::invalid_argument);
  // decreasing map whose claimed derivative passes the slope screen
  CHECK_THROWS_AS(Diffeo1D::make([](double x) { return -x; },
                                 [](double) { return 1.0; }, 0.9, 1.1, "flip"),
                  std::invalid_argument);
  // derivative inconsistent with the map itself
  CHECK_THROWS_AS(Diffeo1D::make([](double x) { return x; },
                                 [](double) { return 1.05; }, 0.9, 1.2, "drift"),
                  std::invalid_argument);

  const auto d = sin_map();
  CHECK(d.name() == "sin");
  CHECK(d.at_zero() == 0.0);
  CHECK(d.slope_min() == 0.9);
  CHECK(d.slope_max() == 1.1);
  CHECK(d(kPi) == doctest::Approx(kPi).epsilon(1e-15));
}

TEST_CASE("inversion: exact maps, bisection oracle, residual contract") {
  CHECK(std::abs(invert_diffeo(identity_map(), 3.0) - 3.0) <= 1e-12);
  CHECK(std::abs(invert_diffeo(double_map(), 3.0) - 1.5) <= 1e-12);

  const auto d = sin_map();
  // independent bisection to near machine precision
  double lo = -10.0, hi = 10.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (d(mid) < 1.0 ? lo : hi) = mid;
  }
  CHECK(std::abs(invert_diffeo(d, 1.0) - 0.5 * (lo + hi)) <= 1e-12);

  for (double y : {-20.0, -7.3, -1.0, 0.0, 0.5, 3.7, 12.0, 33.0}) {
    const double x = invert_diffeo(d, y);
    CHECK(std::abs(d(x) - y) <= 1e-13 * std::max(1.0, std::abs(y)));
  }
}

TEST_CASE("point-mass pushforward: closed forms and mollifier limit") {
  const auto f = shift_modulate(gaussian(1.0, 1), vec({0.3}), vec({0.0}));
  CHECK(std::abs(dirac_pushforward(identity_map(), 0.7, f) - f.value(0.7)) <= 1e-14);
  CHECK(std::abs(dirac_pushforward(double_map(), 1.0, f) - 0.5 * f.value(0.5)) <= 1e-14);

  const auto m = AffineMap::make(2, vec({2.0, 0.0, 0.0, 3.0}), vec({0.0, 0.0}), "diag23");
  const auto g2 = gaussian(1.0, 2);
  const auto got = dirac_pushforward(m, vec({2.0, 3.0}), g2);
  CHECK(std::abs(got - g2.value(vec({1.0, 1.0})) / 6.0) <= 1e-15);
  CHECK_THROWS_AS(dirac_pushforward(m, vec({0.0, 0.0}), gaussian(1.0, 1)),
                  std::invalid_argument);

  // smoothing the point mass: integral against a shrinking gaussian converges
  // to the pushforward value, and the error drops at least linearly in width
  const auto d = sin_map();
  const double z = 1.0;
  const auto exact = dirac_pushforward(d, z, f);
  const double xz = invert_diffeo(d, z);
  const auto moll_err = [&](double w) {
    const psflab::quad::Integrand gi = [&](double x) {
      const double u = d(x) - z;
      const double dw = std::exp(-0.5 * u * u / (w * w)) / (w * std::sqrt(2.0 * kPi));
      return dw * f.value(x);
    };
    const double reach = 12.0 * w / d.slope_min();
    const auto res = psflab::quad::integrate_panels(gi, xz - reach, xz + reach,
                                                    0.5 * w, 1e-13);
    REQUIRE(res.converged);
    return std::abs(res.value - exact);
  };
  const double e1 = moll_err(0.2);
  const double e2 = moll_err(0.1);
  const double e3 = moll_err(0.05);
  CHECK(e3 <= 1e-2);
  CHECK(e2 <= 0.75 * e1 + 1e-12);
  CHECK(e3 <= 0.75 * e2 + 1e-12);
}

TEST_CASE("affine maps: construction, inverses, singular value brackets") {
  CHECK_THROWS_AS(AffineMap::make(2, vec({1.0, 2.0, 2.0, 4.0}), vec({0.0, 0.0}), "sing"),
                  std::invalid_argument);
  CHECK_THROWS_AS(AffineMap::make(2, vec({1.0, 0.0, 0.0}), vec({0.0, 0.0}), "short"),
                  std::invalid_argument);
  CHECK_THROWS_AS(AffineMap::make(2, vec({1.0, 0.0, 0.0, 1.0}), vec({0.0}), "b"),
                  std::invalid_argument);
  CHECK_THROWS_AS(AffineMap::make(4, std::vector<double>(16, 1.0),
                                  std::vector<double>(4, 0.0), "big"),
                  std::invalid_argument);

  const auto m = AffineMap::make(2, vec({1.0, 2.0, 3.0, 4.0}), vec({0.5, -0.25}), "m");
  CHECK(m.det() == doctest::Approx(-2.0).epsilon(1e-15));
  std::vector<double> out(2), back(2);
  m.apply(vec({0.3, -0.7}), out);
  CHECK(out[0] == doctest::Approx(0.3 - 1.4 + 0.5).epsilon(1e-15));
  CHECK(out[1] == doctest::Approx(0.9 - 2.8 - 0.25).epsilon(1e-15));
  m.apply_inverse(out, back);
  CHECK(std::abs(back[0] - 0.3) <= 1e-14);
  CHECK(std::abs(back[1] + 0.7) <= 1e-14);
  m.apply_transpose(vec({1.0, 1.0}), out);
  CHECK(out[0] == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(out[1] == doctest::Approx(6.0).epsilon(1e-15));

  // sigma brackets: diag(2, 1/2) has known singular values
  const auto dg = AffineMap::make(2, vec({2.0, 0.0, 0.0, 0.5}), vec({0.0, 0.0}), "dg");
  CHECK(dg.sigma_min_lb() <= 0.5);
  CHECK(dg.sigma_min_lb() > 0.4);
  CHECK(dg.sigma_max_ub() >= 2.0);
  CHECK(dg.sigma_max_ub() < 2.2);

  const double c30 = std::cos(kPi / 6.0), s30 = std::sin(kPi / 6.0);
  const auto rot = AffineMap::make(2, vec({c30, -s30, s30, c30}), vec({0.0, 0.0}), "rot");
  CHECK(rot.sigma_min_lb() <= 1.0);
  CHECK(rot.sigma_max_ub() >= 1.0);
  CHECK(rot.sigma_max_ub() <= std::sqrt(2.0) + 1e-15);

  // 1-D: the brackets collapse onto the single singular value
  const auto one = AffineMap::make(1, vec({2.0}), vec({0.0}), "x2");
  CHECK(one.sigma_min_lb() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(one.sigma_max_ub() == doctest::Approx(2.0).epsilon(1e-15));

  // 3-D cofactor inverse round trip
  const auto m3 = AffineMap::make(3, vec({2.0, 1.0, 0.0, 0.0, 3.0, 1.0, 1.0, 0.0, 4.0}),
                                  vec({0.1, -0.2, 0.3}), "m3");
  CHECK(m3.det() == doctest::Approx(25.0).epsilon(1e-14));
  std::vector<double> o3(3), b3(3);
  m3.apply(vec({0.7, -1.1, 0.4}), o3);
  m3.apply_inverse(o3, b3);
  CHECK(std::abs(b3[0] - 0.7) <= 1e-13);
  CHECK(std::abs(b3[1] + 1.1) <= 1e-13);
  CHECK(std::abs(b3[2] - 0.4) <= 1e-13);
}

TEST_CASE("bounded multipliers") {
  const auto g1 = Multiplier::one();
  CHECK(g1.value(2.7) == complex<double>(1.0, 0.0));
  CHECK(g1.sup_bound == 1.0);

  const auto gb = Multiplier::gaussian_bump(1.0, 0.5, 0.3, 1.0);
  CHECK(gb.sup_bound == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(gb.value(0.3).real() == doctest::Approx(1.5).epsilon(1e-15));
  for (double x = -6.0; x <= 6.0; x += 0.37)
    CHECK(std::abs(gb.value(x)) <= gb.sup_bound + 1e-15);
  CHECK_THROWS_AS(Multiplier::gaussian_bump(1.0, 0.5, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("warped spatial side: identity and exactly solvable warps") {
  const auto f = gaussian(1.0, 1);
  const auto one = Multiplier::one();
  TruncationBudget tight;
  tight.target_abs_tol = 1e-16;

  const auto rid = warped_comb_rhs(identity_map(), one, f, tight);
  const auto plain = psflab::weak::pair_dirac_comb(f, tight);
  CHECK(std::abs(rid.value - plain.value) <= 1e-12);

  // psi(x) = 2x: the sum telescopes to (1/2) sum f(k/2)
  const auto r2 = warped_comb_rhs(double_map(), one, f, tight);
  long double brute = 0.0L;
  for (int k = -60; k <= 60; ++k)
    brute += 0.5 * std::exp(-0.125 * static_cast<double>(k) * k);
  CHECK(std::abs(r2.value.real() - static_cast<double>(brute)) <= 1e-12);

  // generic warp against a direct summation through the tested inverter
  const auto d = sin_map();
  const auto g = Multiplier::gaussian_bump(1.0, 0.5, 0.3, 1.0);
  const auto rs = warped_comb_rhs(d, g, f, tight);
  complex<double> direct{0.0, 0.0};
  for (int k = -40; k <= 40; ++k) {
    const double x = invert_diffeo(d, static_cast<double>(k));
    direct += g.value(x) / d.derivative(x) * f.value(x);
  }
  CHECK(std::abs(rs.value - direct) <= 1e-12);

  // certified tail covers the truncation error against a longer sum
  const auto rshort = warped_comb_rhs(d, g, f);  // default budget
  CHECK(std::abs(rshort.value - direct) <= rshort.tail_estimate + 1e-15);
}

TEST_CASE("warped frequency side matches the untruncated comb pairing") {
  const auto f = gaussian(1.0, 1);
  const auto lhs = warped_comb_lhs(identity_map(), Multiplier::one(), f);
  const auto series = psflab::weak::pair_exp_comb(f, 16);
  CHECK(std::abs(lhs.value - series.value) <= 1e-10);
  CHECK(lhs.tail_estimate >= 0.0);

  CHECK_THROWS_AS(warped_comb_lhs(identity_map(), Multiplier::one(), f, -1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(warped_comb_lhs(identity_map(), Multiplier::one(), f, 1e-2, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(warped_comb_lhs(identity_map(), Multiplier::one(), gaussian(1.0, 2)),
                  std::invalid_argument);
}

TEST_CASE("warped identity verdicts across maps, multipliers, and widths") {
  const auto maps = {sin_map(), sin2_map(), identity_map()};
  const auto mults = {Multiplier::one(), Multiplier::gaussian_bump(1.0, 0.5, 0.3, 1.0)};
  for (const auto& d : maps)
    for (const auto& g : mults)
      for (double a : {0.5, 1.0, 2.0}) {
        const auto ev = warped_comb_check(d, g, gaussian(a, 1), 1e-6);
        CHECK(ev.passed);
        CHECK(ev.discrepancy <= 1e-6);
        CHECK(ev.chosen_side == Side::spatial);
      }

  // the tolerance gate really gates
  const auto strict = warped_comb_check(sin_map(), Multiplier::gaussian_bump(1.0, 0.5, 0.3, 1.0),
                                        gaussian(1.0, 1), 1e-16);
  CHECK_FALSE(strict.passed);
  CHECK_THROWS_AS(warped_comb_check(sin_map(), Multiplier::one(), gaussian(1.0, 1), 0.0),
                  std::invalid_argument);
}

TEST_CASE("affine warped combs: identity, scaling, rotation") {
  const auto f1 = gaussian(1.0, 1);
  const auto id = AffineMap::make(1, vec({1.0}), vec({0.0}), "identity");
  const auto e1 = affine_comb_check(id, f1);
  CHECK(e1.passed);
  CHECK(e1.discrepancy <= e1.lhs_tail + e1.rhs_tail + e1.slack);

  const auto f2 = gaussian(1.0, 2);
  const auto d2 = AffineMap::make(2, vec({2.0, 0.0, 0.0, 2.0}), vec({0.0, 0.0}), "diag2");
  const auto e2 = affine_comb_check(d2, f2);
  CHECK(e2.passed);
  // spatial side has the closed brute-force form (1/4) sum f(k/2)
  long double brute1 = 0.0L;
  for (int k = -60; k <= 60; ++k)
    brute1 += std::exp(-0.125 * static_cast<double>(k) * k);
  CHECK(std::abs(e2.rhs_value.real() - 0.25 * static_cast<double>(brute1 * brute1)) <= 1e-12);

  const double c30 = std::cos(kPi / 6.0), s30 = std::sin(kPi / 6.0);
  const auto rot = AffineMap::make(2, vec({c30, -s30, s30, c30}), vec({0.0, 0.0}), "rot30");
  const auto e3 = affine_comb_check(rot, f2);
  CHECK(e3.passed);
  CHECK(e3.discrepancy <= 1e-10);

  // offset goes through both series coherently
  const auto rotb = AffineMap::make(2, vec({c30, -s30, s30, c30}), vec({0.3, 0.7}), "rot30b");
  const auto e4 = affine_comb_check(rotb, f2);
  CHECK(e4.passed);

  // side bookkeeping is consistent with the shell counts
  for (const auto* ev : {&e1, &e2, &e3, &e4}) {
    if (ev->chosen_side == Side::frequency)
      CHECK(ev->shells_lhs <= ev->shells_rhs);
    else
      CHECK(ev->shells_rhs < ev->shells_lhs);
  }

  CHECK_THROWS_AS(affine_comb_check(d2, f1), std::invalid_argument);
  TruncationBudget starved;
  starved.max_shell = 0;
  const auto ex = affine_comb_check(id, f1, starved);
  CHECK(ex.budget_exhausted);
  CHECK_FALSE(ex.passed);
}
