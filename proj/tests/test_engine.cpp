#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "psflab/engine.hpp"
#include "psflab/kernel_pairs.hpp"
#include "psflab/lattice.hpp"
#include "psflab/schwartz.hpp"

using namespace psflab::engine;
using psflab::lattice::TruncationBudget;
using psflab::pairs::bessel_pair;
using psflab::pairs::heat_pair;
using psflab::pairs::poisson_pair;
using psflab::pairs::symbol_pair;
using std::complex;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

TruncationBudget tight(double tol = 1e-12, int max_shell = 400) {
  TruncationBudget b;
  b.target_abs_tol = tol;
  b.max_shell = max_shell;
  return b;
}

}  // namespace

TEST_CASE("period reduction lands in [-P/2, P/2) including seams") {
  CHECK(reduce_to_period(0.0, 1.0) == 0.0);
  CHECK(reduce_to_period(7.5, 1.0) == -0.5);
  CHECK(reduce_to_period(-0.5, 1.0) == -0.5);
  CHECK(reduce_to_period(0.5, 1.0) == -0.5);
  CHECK(reduce_to_period(0.49999999, 1.0) == doctest::Approx(0.49999999));
  CHECK(reduce_to_period(3.0 * kPi, kTwoPi) == doctest::Approx(-kPi));
  for (double x : {-1e9 + 0.37, -3.1, 0.0, 2.75, 1e9 + 0.12}) {
    const double r = reduce_to_period(x, kTwoPi);
    CHECK(r >= -kPi);
    CHECK(r < kPi);
  }
}

TEST_CASE("slack formula") {
  const double eps = std::numeric_limits<double>::epsilon();
  CHECK(engine_slack(2.0, 3.0) == 1e3 * eps * 3.0);
  CHECK(engine_slack(0.1, 0.2) == 1e3 * eps);  // floor at 1
}

TEST_CASE("heat identity at the self-dual scale is exact to double precision") {
  // at t = 1/pi both sides reduce to the same series sum_k e^{-pi k^2},
  // so the discrepancy is pure rounding
  const auto ev = evaluate_identity(*heat_pair(1.0 / kPi, 1),
                                    std::vector<double>{0.0}, tight());
  CHECK(ev.passed);
  CHECK(ev.discrepancy <= 1e-14);
}

TEST_CASE("theta transform at t=1 reproduces the frozen series value") {
  const auto ev = theta_transform_check(1.0, 1, tight());
  CHECK(ev.passed);
  // sum_k e^{-k^2}, frozen from a 50-digit oracle
  CHECK(std::abs(ev.lhs_value.real() - 1.7726372048266521530) <= 1e-14);
  CHECK(std::abs(ev.lhs_value.imag()) <= 1e-16);
  // and the right side is sqrt(pi) times the dual series
  complex<double> dual{0.0, 0.0};
  for (int k = -6; k <= 6; ++k) dual += std::exp(-kPi * kPi * k * k);
  CHECK(std::abs(ev.rhs_value - std::sqrt(kPi) * dual) <= 1e-14);
}

TEST_CASE("theta transform across dimensions and scales") {
  for (int n : {1, 2, 3})
    for (double t : {0.1, 1.0, kPi, 10.0}) {
      const auto ev = theta_transform_check(t, n, tight());
      INFO("n=", n, " t=", t);
      CHECK(ev.passed);
      CHECK(ev.discrepancy <= ev.lhs_tail + ev.rhs_tail + ev.slack);
      if (t == kPi) CHECK(ev.discrepancy <= 1e-14);
    }
}

TEST_CASE("poisson identity at t=1: both sides hit the closed form") {
  const auto ev = evaluate_identity(*poisson_pair(1.0, 1),
                                    std::vector<double>{0.0}, tight());
  const double closed = (1.0 + std::exp(-kTwoPi)) / (1.0 - std::exp(-kTwoPi));
  CHECK(ev.passed);
  CHECK(std::abs(ev.lhs_value.real() - closed) <= 1e-13);
  CHECK(std::abs(ev.lhs_value - ev.rhs_value) <= ev.lhs_tail + ev.rhs_tail + ev.slack);

  // the spatial side is exactly the partial sum of (1/pi) sum (1+k^2)^{-1}
  long double brute = 1.0L;
  for (int k = 1; k <= ev.shells_rhs; ++k) brute += 2.0L / (1.0L + k * k);
  brute /= kPi;
  CHECK(std::abs(ev.rhs_value.real() - static_cast<double>(brute)) <= 1e-13);
}

TEST_CASE("narrow heat kernels prefer the spatial series") {
  const auto ev = evaluate_identity(*heat_pair(0.01, 1),
                                    std::vector<double>{0.5}, tight());
  CHECK(ev.passed);
  CHECK(ev.chosen_side == Side::spatial);
  CHECK(ev.discrepancy <= 2.0 * (ev.lhs_tail + ev.rhs_tail) + ev.slack);
}

TEST_CASE("preferred_side picks the faster representation and predicts shells") {
  const auto wide = preferred_side(*heat_pair(10.0, 1), 1e-12, 400);
  CHECK(wide.side == Side::frequency);
  const auto narrow = preferred_side(*heat_pair(0.01, 1), 1e-12, 400);
  CHECK(narrow.side == Side::spatial);
  const auto poi = preferred_side(*poisson_pair(1.0, 1), 1e-12, 400);
  CHECK(poi.side == Side::frequency);

  // prediction matches the measured shell count of the chosen side within 1
  for (double t : {0.05, 0.5, 1.0, 4.0}) {
    const auto p = heat_pair(t, 1);
    const auto choice = preferred_side(*p, 1e-12, 400);
    const auto ev = evaluate_identity(*p, std::vector<double>{0.0}, tight());
    const int actual =
        choice.side == Side::frequency ? ev.shells_lhs : ev.shells_rhs;
    CHECK(std::abs(choice.shells - actual) <= 1);
  }
}

TEST_CASE("closed form of the reciprocal-quadratic series") {
  const auto ev = corollary_3_5_check(10000);
  CHECK(ev.passed);
  // rhs equals pi coth(pi) + 1
  const double coth = std::cosh(kPi) / std::sinh(kPi);
  CHECK(std::abs(ev.rhs_value.real() - (kPi * coth + 1.0)) <= 1e-13);
  // the partial sum approaches from below and the tail brackets it
  CHECK(ev.lhs_value.real() <= ev.rhs_value.real());
  CHECK(ev.rhs_value.real() <= ev.lhs_value.real() + ev.lhs_tail);
}

TEST_CASE("classical summation formula for gaussians") {
  const auto f = psflab::schwartz::gaussian(1.0, 1);
  const auto ev = classical_psf(f, std::vector<double>{0.0}, tight());
  CHECK(ev.passed);
  // lhs: sum e^{-(2 pi k)^2/2}; rhs: (2 pi)^{-1/2} sum e^{-k^2/2}
  long double lhs = 0.0L, rhs = 0.0L;
  for (int k = -40; k <= 40; ++k) {
    lhs += std::exp(-2.0 * kPi * kPi * static_cast<double>(k) * k);
    rhs += std::exp(-0.5 * static_cast<double>(k) * k);
  }
  rhs /= std::sqrt(kTwoPi);
  // brute sums use a different accumulation order, so allow a few dozen ulps
  CHECK(std::abs(ev.lhs_value.real() - static_cast<double>(lhs)) <= 1e-13);
  CHECK(std::abs(ev.rhs_value.real() - static_cast<double>(rhs)) <= 1e-13);

  for (const double x : {kPi, 0.37}) {
    const auto shifted = psflab::schwartz::shift_modulate(
        psflab::schwartz::gaussian(0.8, 1), std::vector<double>{0.3},
        std::vector<double>{0.0});
    const auto e2 = classical_psf(shifted, std::vector<double>{x}, tight());
    CHECK(e2.passed);
    CHECK(e2.discrepancy <= 1e-12);
  }
}

TEST_CASE("periodicity: shifting x by a lattice vector changes nothing") {
  const auto p = heat_pair(0.7, 1);
  const auto a = evaluate_identity(*p, std::vector<double>{0.31}, tight());
  const auto b = evaluate_identity(*p, std::vector<double>{1.31}, tight());
  CHECK(std::abs(a.lhs_value - b.lhs_value) <= 1e-12);
  CHECK(std::abs(a.rhs_value - b.rhs_value) <= 1e-12);

  const auto sym = symbol_pair(psflab::schwartz::gaussian(2.0, 1));
  const auto sa = evaluate_identity(*sym, std::vector<double>{0.9}, tight());
  const auto sb = evaluate_identity(*sym, std::vector<double>{0.9 + kTwoPi}, tight());
  CHECK(std::abs(sa.lhs_value - sb.lhs_value) <= 1e-12);
  CHECK(std::abs(sa.rhs_value - sb.rhs_value) <= 1e-12);
}

TEST_CASE("refinement is monotone within slack") {
  const auto p = heat_pair(1.0, 1);
  double prev = std::numeric_limits<double>::infinity();
  double prev_tails = std::numeric_limits<double>::infinity();
  for (int cap = 1; cap <= 8; ++cap) {
    const auto ev = evaluate_identity(*p, std::vector<double>{0.25},
                                      tight(1e-15, cap));
    const double width = ev.discrepancy + ev.lhs_tail + ev.rhs_tail;
    CHECK(width <= prev + ev.slack);
    CHECK(ev.lhs_tail + ev.rhs_tail <= prev_tails);
    prev = width;
    prev_tails = ev.lhs_tail + ev.rhs_tail;
  }
}

TEST_CASE("battery of certified brackets over a parameter grid") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int configs = 0;
  for (int n : {1, 2})
    for (double t : {0.1, 1.0, 10.0}) {
      for (int rep = 0; rep < 2; ++rep) {
        std::vector<double> x(static_cast<std::size_t>(n));
        for (auto& c : x) c = u(rng);
        const auto eh = evaluate_identity(*heat_pair(t, n), x, tight());
        CHECK(eh.passed);
        const auto ep = evaluate_identity(*poisson_pair(t, n), x, tight(1e-10));
        CHECK(ep.passed);
        configs += 2;
      }
    }
  CHECK(configs == 24);
}

TEST_CASE("weak-only pairs and bad input are refused") {
  CHECK_THROWS_AS(
      evaluate_identity(*bessel_pair(-0.5, 1), std::vector<double>{0.1}, tight()),
      std::domain_error);
  CHECK_THROWS_AS(evaluate_identity(*heat_pair(1.0, 2),
                                    std::vector<double>{0.1}, tight()),
                  std::invalid_argument);  // dimension mismatch
  TruncationBudget bad;
  bad.target_abs_tol = -1.0;
  CHECK_THROWS_AS(evaluate_identity(*heat_pair(1.0, 1),
                                    std::vector<double>{0.1}, bad),
                  std::invalid_argument);
}

TEST_CASE("budget exhaustion is reported, not papered over") {
  const auto ev = evaluate_identity(*heat_pair(1.0, 1), std::vector<double>{0.0},
                                    tight(1e-12, 0));
  CHECK(ev.budget_exhausted);
  CHECK_FALSE(ev.passed);
}
