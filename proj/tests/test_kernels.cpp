#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include <cmath>
#include <complex>
#include <cstdlib>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "psflab/kernels.hpp"

using namespace psflab::kernels;

int main(int argc, char** argv) {
  // pin the env-selection path before the dispatcher caches its auto choice;
  // individual tests then exercise force_backend precedence on top of it
  setenv("PSFLAB_KERNELS", "scalar", 1);
  return doctest::Context(argc, argv).run();
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// few-ulp agreement, with specials matched by kind and the denormal fringe
// collapsed (the backends may round the last denormal bit differently)
bool close_ulp(double got, double ref, double ulps = 4.0) {
  if (std::isnan(ref)) return std::isnan(got);
  if (std::isinf(ref)) return got == ref;
  if (std::abs(ref) < 1e-315 && std::abs(got) < 1e-315) return true;
  const double scale = std::max(std::abs(ref), std::numeric_limits<double>::min());
  return std::abs(got - ref) <= ulps * std::numeric_limits<double>::epsilon() * scale;
}

std::vector<double> edge_inputs() {
  std::vector<double> x{0.0,   1.0,    -1.0,   12.5,  -30.25, 700.0, 709.7,
                        710.5, -744.0, -745.5, -800.0, kInf,  -kInf, kNaN};
  std::mt19937_64 rng(987654321);
  std::uniform_real_distribution<double> u(-60.0, 12.0);
  for (int i = 0; i < 300; ++i) x.push_back(u(rng));
  return x;
}

long double ref_exp_sum(const std::vector<double>& x) {
  long double s = 0.0L;
  for (double v : x) s += std::exp(static_cast<long double>(v));
  return s;
}

}  // namespace

TEST_CASE("env selection is honoured and force_backend overrides it") {
  clear_forced_backend();
  CHECK(active_backend() == Backend::scalar);  // PSFLAB_KERNELS=scalar from main

  if (cpu_has_avx2()) {
    force_backend(Backend::avx2);
    CHECK(active_backend() == Backend::avx2);
    clear_forced_backend();
    CHECK(active_backend() == Backend::scalar);
  } else {
    CHECK_THROWS_AS(force_backend(Backend::avx2), std::runtime_error);
  }
  CHECK(std::string(backend_name(Backend::scalar)) == "scalar");
  CHECK(std::string(backend_name(Backend::avx2)) == "avx2");
}

TEST_CASE("scalar exp_map matches std::exp on edges and random points") {
  clear_forced_backend();
  force_backend(Backend::scalar);
  const auto x = edge_inputs();
  std::vector<double> out(x.size());
  exp_map(x, out);
  for (std::size_t i = 0; i < x.size(); ++i) {
    INFO("x = ", x[i]);
    CHECK(close_ulp(out[i], std::exp(x[i])));
  }
  clear_forced_backend();
}

TEST_CASE("exp_map size handling") {
  force_backend(Backend::scalar);
  std::vector<double> x{0.5, 1.5, 2.5};
  std::vector<double> bad(2);
  CHECK_THROWS_AS(exp_map(x, bad), std::invalid_argument);
  exp_map({}, {});  // empty is a no-op

  // in-place aliasing is allowed
  std::vector<double> y{0.0, 1.0};
  exp_map(y, y);
  CHECK(y[0] == 1.0);
  CHECK(close_ulp(y[1], std::exp(1.0)));
  clear_forced_backend();
}

TEST_CASE("reductions match a long-double reference on the scalar backend") {
  force_backend(Backend::scalar);
  std::mt19937_64 rng(1357);
  std::uniform_real_distribution<double> u(-40.0, 8.0);
  for (std::size_t n : {std::size_t{0}, std::size_t{1}, std::size_t{3},
                        std::size_t{4}, std::size_t{5}, std::size_t{17},
                        std::size_t{1000}}) {
    std::vector<double> x(n), w(n);
    for (auto& v : x) v = u(rng);
    for (auto& v : w) v = u(rng) / 8.0;

    const double s = exp_sum(x);
    CHECK(close_ulp(s, static_cast<double>(ref_exp_sum(x)), 8.0));

    long double dref = 0.0L;
    for (std::size_t i = 0; i < n; ++i)
      dref += static_cast<long double>(w[i]) * std::exp(static_cast<long double>(x[i]));
    CHECK(close_ulp(exp_dot(w, x), static_cast<double>(dref), 16.0));
  }
  clear_forced_backend();
}

TEST_CASE("cplx_dot matches a long-double reference and handles tails") {
  force_backend(Backend::scalar);
  std::mt19937_64 rng(2468);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t n : {std::size_t{0}, std::size_t{1}, std::size_t{2},
                        std::size_t{3}, std::size_t{7}, std::size_t{512}}) {
    std::vector<std::complex<double>> a(n), b(n);
    for (auto& v : a) v = {u(rng), u(rng)};
    for (auto& v : b) v = {u(rng), u(rng)};
    long double rr = 0.0L, ri = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
      const std::complex<long double> p =
          std::complex<long double>(a[i]) * std::complex<long double>(b[i]);
      rr += p.real();
      ri += p.imag();
    }
    const auto got = cplx_dot(a, b);
    CHECK(close_ulp(got.real(), static_cast<double>(rr), 32.0));
    CHECK(close_ulp(got.imag(), static_cast<double>(ri), 32.0));
  }
  clear_forced_backend();
}

TEST_CASE("fixed backend is run-to-run deterministic") {
  force_backend(Backend::scalar);
  std::mt19937_64 rng(111);
  std::uniform_real_distribution<double> u(-30.0, 5.0);
  std::vector<double> x(257);
  for (auto& v : x) v = u(rng);
  const double s1 = exp_sum(x);
  const double s2 = exp_sum(x);
  CHECK(s1 == s2);
  clear_forced_backend();

  if (cpu_has_avx2()) {
    force_backend(Backend::avx2);
    const double a1 = exp_sum(x);
    const double a2 = exp_sum(x);
    CHECK(a1 == a2);
    clear_forced_backend();
  }
}

TEST_CASE("avx2 backend agrees with the scalar reference" *
          doctest::skip(!cpu_has_avx2())) {
  const auto x = edge_inputs();

  force_backend(Backend::scalar);
  std::vector<double> ref(x.size());
  exp_map(x, ref);
  const double sum_ref = exp_sum(std::vector<double>(x.begin(), x.begin() + 11));

  force_backend(Backend::avx2);
  std::vector<double> got(x.size());
  exp_map(x, got);
  const double sum_got = exp_sum(std::vector<double>(x.begin(), x.begin() + 11));

  for (std::size_t i = 0; i < x.size(); ++i) {
    INFO("x = ", x[i]);
    CHECK(close_ulp(got[i], ref[i]));
  }
  CHECK(close_ulp(sum_got, sum_ref, 16.0));

  // reductions across backends on a bulk load (positive terms, no cancellation)
  std::mt19937_64 rng(3141);
  std::uniform_real_distribution<double> u(-25.0, 5.0);
  std::vector<double> bulk(1023), w(1023);
  for (auto& v : bulk) v = u(rng);
  for (auto& v : w) v = u(rng) / 16.0;
  std::vector<std::complex<double>> ca(511), cb(511);
  for (auto& v : ca) v = {u(rng) / 8.0, u(rng) / 8.0};
  for (auto& v : cb) v = {u(rng) / 8.0, u(rng) / 8.0};

  force_backend(Backend::scalar);
  const double s_sum = exp_sum(bulk);
  const double s_dot = exp_dot(w, bulk);
  const auto s_cd = cplx_dot(ca, cb);
  force_backend(Backend::avx2);
  const double a_sum = exp_sum(bulk);
  const double a_dot = exp_dot(w, bulk);
  const auto a_cd = cplx_dot(ca, cb);
  clear_forced_backend();

  // compare reductions against the mass actually summed, not the (possibly
  // cancelled) result
  double dot_mass = 0.0;
  for (std::size_t i = 0; i < bulk.size(); ++i)
    dot_mass += std::abs(w[i]) * std::exp(bulk[i]);
  CHECK(close_ulp(a_sum, s_sum, 64.0));
  CHECK(std::abs(a_dot - s_dot) <= 1e-13 * (1.0 + dot_mass));
  CHECK(std::abs(a_cd - s_cd) <= 1e-12 * (1.0 + std::abs(s_cd)));
}
