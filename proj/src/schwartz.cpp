#include "psflab/schwartz.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace psflab::schwartz {

namespace {

void check_dim(const char* who, int want, std::size_t got) {
  if (static_cast<std::size_t>(want) != got)
    throw std::invalid_argument(std::string(who) + ": dimension mismatch");
}

bool all_zero(std::span<const double> v) {
  for (double x : v)
    if (x != 0.0) return false;
  return true;
}

}  // namespace

TestFunction::TestFunction(int dim, double a, std::vector<double> h,
                           std::vector<double> m, std::complex<double> amp)
    : dim_(dim), a_(a), h_(std::move(h)), m_(std::move(m)), amp_(amp) {}

std::complex<double> TestFunction::value(std::span<const double> x) const {
  check_dim("value", dim_, x.size());
  double q = 0.0, phase = 0.0;
  for (int i = 0; i < dim_; ++i) {
    const double d = x[static_cast<std::size_t>(i)] - h_[static_cast<std::size_t>(i)];
    q += d * d;
    phase += m_[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
  }
  return amp_ * std::exp(-q / (2.0 * a_)) *
         std::complex<double>(std::cos(phase), std::sin(phase));
}

std::complex<double> TestFunction::fourier(std::span<const double> xi) const {
  check_dim("fourier", dim_, xi.size());
  double q = 0.0, phase = 0.0;
  for (int i = 0; i < dim_; ++i) {
    const double d = xi[static_cast<std::size_t>(i)] - m_[static_cast<std::size_t>(i)];
    q += d * d;
    phase -= h_[static_cast<std::size_t>(i)] * d;
  }
  return amp_ * std::pow(a_, 0.5 * dim_) * std::exp(-0.5 * a_ * q) *
         std::complex<double>(std::cos(phase), std::sin(phase));
}

std::complex<double> TestFunction::value(double x) const {
  return value(std::span<const double>(&x, 1));
}

std::complex<double> TestFunction::fourier(double xi) const {
  return fourier(std::span<const double>(&xi, 1));
}

DecayClass TestFunction::decay_class() const {
  if (!all_zero(m_)) return DecayClass::modulated_gaussian;
  if (!all_zero(h_)) return DecayClass::shifted_gaussian;
  return DecayClass::gaussian;
}

TestFunction gaussian(double a, int n) {
  if (!(a > 0.0)) throw std::invalid_argument("gaussian: width must be > 0");
  if (n < 1) throw std::invalid_argument("gaussian: dim must be >= 1");
  return TestFunction(n, a, std::vector<double>(static_cast<std::size_t>(n), 0.0),
                      std::vector<double>(static_cast<std::size_t>(n), 0.0), 1.0);
}

TestFunction shift_modulate(const TestFunction& f, std::span<const double> h,
                            std::span<const double> m) {
  check_dim("shift_modulate", f.dim_, h.size());
  check_dim("shift_modulate", f.dim_, m.size());
  std::vector<double> nh = f.h_, nm = f.m_;
  double cross = 0.0;  // e^{i m_old.x} picks up -m_old.h on the new shift
  for (int i = 0; i < f.dim_; ++i) {
    const auto u = static_cast<std::size_t>(i);
    cross -= f.m_[u] * h[u];
    nh[u] += h[u];
    nm[u] += m[u];
  }
  const std::complex<double> amp =
      f.amp_ * std::complex<double>(std::cos(cross), std::sin(cross));
  return TestFunction(f.dim_, f.a_, std::move(nh), std::move(nm), amp);
}

TestFunction product(const TestFunction& f, const TestFunction& g) {
  if (f.dim_ != g.dim_) throw std::invalid_argument("product: dimension mismatch");
  const double a = f.a_ * g.a_ / (f.a_ + g.a_);
  std::vector<double> h(static_cast<std::size_t>(f.dim_));
  std::vector<double> m(static_cast<std::size_t>(f.dim_));
  double cross = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    h[i] = a * (f.h_[i] / f.a_ + g.h_[i] / g.a_);
    m[i] = f.m_[i] + g.m_[i];
    const double d = f.h_[i] - g.h_[i];
    cross += d * d;
  }
  const std::complex<double> amp =
      f.amp_ * g.amp_ * std::exp(-cross / (2.0 * (f.a_ + g.a_)));
  return TestFunction(f.dim_, a, std::move(h), std::move(m), amp);
}

TestFunction fourier_transform(const TestFunction& f) {
  std::vector<double> h = f.m_;
  std::vector<double> m(static_cast<std::size_t>(f.dim_));
  double phase = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    m[i] = -f.h_[i];
    phase += f.h_[i] * f.m_[i];
  }
  const std::complex<double> amp = f.amp_ * std::pow(f.a_, 0.5 * f.dim_) *
                                   std::complex<double>(std::cos(phase), std::sin(phase));
  return TestFunction(f.dim_, 1.0 / f.a_, std::move(h), std::move(m), amp);
}

TestFunction scale_amplitude(const TestFunction& f, std::complex<double> c) {
  return TestFunction(f.dim_, f.a_, f.h_, f.m_, f.amp_ * c);
}

double smooth_step(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double g = std::exp(-1.0 / u);
  const double gc = std::exp(-1.0 / (1.0 - u));
  return g / (g + gc);
}

double window_profile(double r) {
  if (r <= 1.0) return 1.0;
  if (r >= 1.5) return 0.0;
  return 1.0 - smooth_step(2.0 * (r - 1.0));
}

double dyadic_window_radial(int j, double r) {
  if (j < 0) throw std::invalid_argument("dyadic_window: level must be >= 0");
  if (r < 0.0) throw std::invalid_argument("dyadic_window: radius must be >= 0");
  const double s = std::ldexp(r, -j);  // r / 2^j
  if (j == 0) return window_profile(s);
  return window_profile(s) - window_profile(2.0 * s);
}

double dyadic_window(int j, std::span<const double> x) {
  double q = 0.0;
  for (double v : x) q += v * v;
  return dyadic_window_radial(j, std::sqrt(q));
}

double window_partial_sum(int j_max, std::span<const double> x) {
  if (j_max < 0) throw std::invalid_argument("window_partial_sum: level must be >= 0");
  double q = 0.0;
  for (double v : x) q += v * v;
  return window_profile(std::ldexp(std::sqrt(q), -j_max));
}

}  // namespace psflab::schwartz
