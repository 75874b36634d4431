#include "psflab/kernel_pairs.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "psflab/kernels.hpp"
#include "psflab/quadrature.hpp"

namespace psflab::pairs {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double sup_norm(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

double norm2sq_offset(std::span<const double> x, std::span<const std::int32_t> k,
                      double period) {
  double q = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - period * k[i];
    q += d * d;
  }
  return q;
}

double ksq(std::span<const std::int32_t> k) {
  double q = 0.0;
  for (auto v : k) q += static_cast<double>(v) * static_cast<double>(v);
  return q;
}

bool is_origin(std::span<const double> x) {
  for (double v : x)
    if (v != 0.0) return false;
  return true;
}

}  // namespace

const char* side_name(Side s) {
  return s == Side::frequency ? "frequency" : "spatial";
}

DualKernelPair::DualKernelPair(int dim, double period, bool pointwise,
                               std::string label,
                               std::vector<std::pair<std::string, double>> params)
    : dim_(dim), period_(period), pointwise_(pointwise), label_(std::move(label)),
      params_(std::move(params)) {
  if (dim < 1 || dim > 8) throw std::invalid_argument("pair: dim must be in [1, 8]");
  if (!(period > 0.0)) throw std::invalid_argument("pair: period must be > 0");
}

void DualKernelPair::freq_wavevector(std::span<const std::int32_t> k,
                                     std::span<double> v) const {
  for (std::size_t i = 0; i < k.size(); ++i) v[i] = kTwoPi * k[i];
}

std::complex<double> DualKernelPair::spatial_term(std::span<const double> x,
                                                  std::span<const std::int32_t> k) const {
  std::array<double, 8> y{};
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] - period_ * k[i];
  return spatial_kernel(std::span<const double>(y.data(), x.size()));
}

std::complex<double> DualKernelPair::freq_shell_sum(const lattice::Shell& s,
                                                    std::span<const double> x) const {
  lattice::Accumulator acc;
  std::array<double, 8> v{};
  const auto d = static_cast<std::size_t>(dim_);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto k = s[i];
    freq_wavevector(k, std::span<double>(v.data(), d));
    double phase = 0.0;
    for (std::size_t j = 0; j < d; ++j) phase += v[j] * x[j];
    acc.add(freq_coeff(k) * std::complex<double>(std::cos(phase), std::sin(phase)));
  }
  return acc.result().value;
}

std::complex<double> DualKernelPair::spatial_shell_sum(const lattice::Shell& s,
                                                       std::span<const double> x) const {
  lattice::Accumulator acc;
  for (std::size_t i = 0; i < s.size(); ++i) acc.add(spatial_term(x, s[i]));
  return acc.result().value;
}

// ---------------------------------------------------------------------------

namespace {

// sum_k e^{-t pi^2 |k|^2} e^{2 pi i k.x} = (t pi)^{-n/2} sum_k e^{-|x-k|^2/t}
class HeatPair final : public DualKernelPair {
public:
  HeatPair(double t, int n)
      : DualKernelPair(n, 1.0, true, "heat", {{"t", t}, {"dim", static_cast<double>(n)}}),
        t_(t), freq_rate_(t * kPi * kPi), inv_t_(1.0 / t),
        pref_(std::pow(t * kPi, -0.5 * n)) {}

  std::complex<double> freq_coeff(std::span<const std::int32_t> k) const override {
    return std::exp(-freq_rate_ * ksq(k));
  }

  std::complex<double> spatial_kernel(std::span<const double> y) const override {
    double q = 0.0;
    for (double v : y) q += v * v;
    return pref_ * std::exp(-q * inv_t_);
  }

  double freq_tail(int shell) const override {
    return lattice::gaussian_tail_bound(freq_rate_, shell, dim());
  }

  double spatial_tail(int shell, std::span<const double> x) const override {
    return pref_ * lattice::gaussian_tail_bound(inv_t_, shell, dim(), sup_norm(x));
  }

  std::complex<double> freq_shell_sum(const lattice::Shell& s,
                                      std::span<const double> x) const override {
    std::vector<double> q(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) q[i] = -freq_rate_ * ksq(s[i]);
    if (is_origin(x)) return kernels::exp_sum(q);
    std::vector<double> mag(s.size());
    kernels::exp_map(q, mag);
    lattice::Accumulator acc;
    const auto d = static_cast<std::size_t>(dim());
    for (std::size_t i = 0; i < s.size(); ++i) {
      const auto k = s[i];
      double phase = 0.0;
      for (std::size_t j = 0; j < d; ++j) phase += kTwoPi * k[j] * x[j];
      acc.add(mag[i] * std::complex<double>(std::cos(phase), std::sin(phase)));
    }
    return acc.result().value;
  }

  std::complex<double> spatial_shell_sum(const lattice::Shell& s,
                                         std::span<const double> x) const override {
    std::vector<double> q(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
      q[i] = -inv_t_ * norm2sq_offset(x, s[i], 1.0);
    return pref_ * kernels::exp_sum(q);
  }

private:
  double t_, freq_rate_, inv_t_, pref_;
};

// sum_k e^{-2 pi t |k|} e^{2 pi i k.x} = c_n t sum_k (|x-k|^2 + t^2)^{-(n+1)/2}
class PoissonPair final : public DualKernelPair {
public:
  PoissonPair(double t, int n)
      : DualKernelPair(n, 1.0, true, "poisson",
                       {{"t", t}, {"dim", static_cast<double>(n)}}),
        t_(t), rate_(kTwoPi * t), pref_(normalize_cn(n) * t) {}

  std::complex<double> freq_coeff(std::span<const std::int32_t> k) const override {
    return std::exp(-rate_ * std::sqrt(ksq(k)));
  }

  std::complex<double> spatial_kernel(std::span<const double> y) const override {
    double q = t_ * t_;
    for (double v : y) q += v * v;
    switch (dim()) {
      case 1: return pref_ / q;
      case 2: return pref_ / (q * std::sqrt(q));
      case 3: return pref_ / (q * q);
      default: return pref_ * std::pow(q, -0.5 * (dim() + 1));
    }
  }

  double freq_tail(int shell) const override {
    return lattice::exp_tail_bound(rate_, shell, dim());
  }

  double spatial_tail(int shell, std::span<const double> x) const override {
    return pref_ * lattice::power_tail_bound(dim() + 1, t_, shell, dim(), sup_norm(x));
  }

  std::complex<double> freq_shell_sum(const lattice::Shell& s,
                                      std::span<const double> x) const override {
    std::vector<double> q(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) q[i] = -rate_ * std::sqrt(ksq(s[i]));
    if (is_origin(x)) return kernels::exp_sum(q);
    std::vector<double> mag(s.size());
    kernels::exp_map(q, mag);
    lattice::Accumulator acc;
    const auto d = static_cast<std::size_t>(dim());
    for (std::size_t i = 0; i < s.size(); ++i) {
      const auto k = s[i];
      double phase = 0.0;
      for (std::size_t j = 0; j < d; ++j) phase += kTwoPi * k[j] * x[j];
      acc.add(mag[i] * std::complex<double>(std::cos(phase), std::sin(phase)));
    }
    return acc.result().value;
  }

private:
  double t_, rate_, pref_;
};

// sum_k (1+|2 pi k|^2)^{alpha/2} e^{2 pi i k.x} = (2 pi)^{-n/2} sum_k what(|x-k|)
class BesselPair final : public DualKernelPair {
public:
  BesselPair(double alpha, int n)
      : DualKernelPair(n, 1.0, alpha < -n, "bessel",
                       {{"alpha", alpha}, {"dim", static_cast<double>(n)}}),
        alpha_(alpha), spat_pref_(std::pow(kTwoPi, -0.5 * n)) {
    if (!(alpha < 0.0)) throw std::invalid_argument("bessel_pair: need alpha < 0");
    if (pointwise()) envelope_ = bessel_hat_envelope(alpha, n);
  }

  std::complex<double> freq_coeff(std::span<const std::int32_t> k) const override {
    return std::pow(1.0 + 4.0 * kPi * kPi * ksq(k), 0.5 * alpha_);
  }

  std::complex<double> spatial_kernel(std::span<const double> y) const override {
    double q = 0.0;
    for (double v : y) q += v * v;
    return spat_pref_ * bessel_hat(alpha_, dim(), std::sqrt(q));
  }

  double freq_tail(int shell) const override {
    if (!pointwise()) return kInf;
    return std::pow(kTwoPi, alpha_) *
           lattice::power_tail_bound(-alpha_, 1.0 / kTwoPi, shell, dim());
  }

  double spatial_tail(int shell, std::span<const double> x) const override {
    if (!pointwise()) return kInf;
    return spat_pref_ * envelope_ *
           lattice::exp_tail_bound(0.5, shell, dim(), sup_norm(x));
  }

private:
  double alpha_, spat_pref_, envelope_ = kInf;
};

// sum_k tau(k) e^{-i k.x} = (2 pi)^{n/2} sum_k F[tau](x - 2 pi k)
class SymbolPair final : public DualKernelPair {
public:
  explicit SymbolPair(const schwartz::TestFunction& tau)
      : DualKernelPair(tau.dim(), kTwoPi, true, "symbol", symbol_params(tau)),
        tau_(tau), pref_(std::pow(kTwoPi, 0.5 * tau.dim())) {}

  std::complex<double> freq_coeff(std::span<const std::int32_t> k) const override {
    std::array<double, 8> xk{};
    for (std::size_t i = 0; i < k.size(); ++i) xk[i] = static_cast<double>(k[i]);
    return tau_.value(std::span<const double>(xk.data(), k.size()));
  }

  void freq_wavevector(std::span<const std::int32_t> k,
                       std::span<double> v) const override {
    for (std::size_t i = 0; i < k.size(); ++i) v[i] = -static_cast<double>(k[i]);
  }

  std::complex<double> spatial_kernel(std::span<const double> y) const override {
    return pref_ * tau_.fourier(y);
  }

  double freq_tail(int shell) const override {
    return std::abs(tau_.amplitude()) *
           lattice::gaussian_tail_bound(0.5 / tau_.width(), shell, dim(),
                                        sup_norm(tau_.shift()));
  }

  double freq_coeff_sup() const override { return std::abs(tau_.amplitude()); }

  double spatial_tail(int shell, std::span<const double> x) const override {
    std::array<double, 8> c{};
    for (std::size_t i = 0; i < x.size(); ++i)
      c[i] = (x[i] - tau_.modulation()[i]) / kTwoPi;
    const double margin = sup_norm(std::span<const double>(c.data(), x.size()));
    const double amp =
        std::abs(tau_.amplitude()) * std::pow(tau_.width(), 0.5 * dim()) * pref_;
    return amp * lattice::gaussian_tail_bound(2.0 * kPi * kPi * tau_.width(), shell,
                                              dim(), margin);
  }

private:
  static std::vector<std::pair<std::string, double>> symbol_params(
      const schwartz::TestFunction& tau) {
    std::vector<std::pair<std::string, double>> p{
        {"width", tau.width()}, {"dim", static_cast<double>(tau.dim())}};
    for (int i = 0; i < tau.dim(); ++i) {
      p.emplace_back("shift" + std::to_string(i), tau.shift()[static_cast<std::size_t>(i)]);
      p.emplace_back("mod" + std::to_string(i), tau.modulation()[static_cast<std::size_t>(i)]);
    }
    return p;
  }

  schwartz::TestFunction tau_;
  double pref_;
};

}  // namespace

std::unique_ptr<DualKernelPair> heat_pair(double t, int n) {
  if (!(t > 0.0)) throw std::invalid_argument("heat_pair: need t > 0");
  return std::make_unique<HeatPair>(t, n);
}

std::unique_ptr<DualKernelPair> poisson_pair(double t, int n) {
  if (!(t > 0.0)) throw std::invalid_argument("poisson_pair: need t > 0");
  return std::make_unique<PoissonPair>(t, n);
}

std::unique_ptr<DualKernelPair> bessel_pair(double alpha, int n) {
  return std::make_unique<BesselPair>(alpha, n);
}

std::unique_ptr<DualKernelPair> symbol_pair(const schwartz::TestFunction& tau) {
  return std::make_unique<SymbolPair>(tau);
}

double normalize_cn(int n) {
  if (n < 1) throw std::invalid_argument("normalize_cn: need n >= 1");
  return std::tgamma(0.5 * (n + 1)) * std::pow(kPi, -0.5 * (n + 1));
}

// ---------------------------------------------------------------------------
// bessel_hat: I(r) = Int_0^inf t^{nu-1} e^{-t - r^2/(4t)} dt, nu = (-alpha-n)/2,
// value = 2^{-n/2} I(r) / Gamma(-alpha/2).
//
// In u = log t the integrand becomes e^{phi(u)}, phi(u) = nu u - e^u - (r^2/4) e^{-u},
// smooth and unimodal with peak at t* = (nu + sqrt(nu^2 + r^2))/2. We march
// outward from u* until phi drops 750 below the peak, normalize by e^{phi(u*)}
// to dodge under/overflow, and integrate the two half-ranges by doubling
// Gauss-Legendre panels to 1e-12 relative.

namespace {

double log_integrand(double u, double nu, double quarter_r2) {
  return nu * u - std::exp(u) - quarter_r2 * std::exp(-u);
}

}  // namespace

double bessel_hat(double alpha, int n, double r) {
  if (!(alpha < 0.0)) throw std::domain_error("bessel_hat: need alpha < 0");
  if (n < 1) throw std::invalid_argument("bessel_hat: need n >= 1");
  if (!(r >= 0.0)) throw std::invalid_argument("bessel_hat: need r >= 0");
  const double nu = 0.5 * (-alpha - n);
  const double pref = std::pow(2.0, -0.5 * n) / std::tgamma(-0.5 * alpha);

  if (r == 0.0) {
    if (!(nu > 0.0))
      throw std::domain_error("bessel_hat: profile diverges at 0 for alpha >= -n");
    return pref * std::tgamma(nu);
  }

  const double quarter_r2 = 0.25 * r * r;
  const double tstar = 0.5 * (nu + std::sqrt(nu * nu + r * r));
  const double ustar = std::log(tstar);
  const double phi_star = log_integrand(ustar, nu, quarter_r2);

  auto drop = [&](double u) { return log_integrand(u, nu, quarter_r2) - phi_star; };
  double lo = ustar, hi = ustar;
  for (int i = 0; i < 5000 && drop(lo) > -750.0; ++i) lo -= 0.5;
  for (int i = 0; i < 5000 && drop(hi) > -750.0; ++i) hi += 0.5;

  const auto f = [&](double u) { return std::exp(drop(u)); };
  const auto left = quad::integrate_doubling(f, lo, ustar, 1e-12);
  const auto right = quad::integrate_doubling(f, ustar, hi, 1e-12);
  if (!left.converged || !right.converged)
    throw std::runtime_error("bessel_hat: quadrature failed to converge");
  return pref * std::exp(phi_star) * (left.value.real() + right.value.real());
}

double bessel_hat_closed_form(int n, double r) {
  if (n < 2) throw std::invalid_argument("bessel_hat_closed_form: need n >= 2");
  if (!(r > 0.0)) throw std::invalid_argument("bessel_hat_closed_form: need r > 0");
  return std::pow(2.0, -0.5 * n) * 2.0 * std::sqrt(kPi) /
         std::tgamma(0.5 * (n - 1)) * std::exp(-r) / r;
}

// From t + r^2/(4t) = (t/2 + r^2/(8t)) * 2 and AM-GM on each half:
// e^{-t - r^2/4t} <= e^{-r/2} e^{-t/2}, so
// what(r) <= 2^{-n/2} e^{-r/2} Int t^{nu-1} e^{-t/2} dt / Gamma(-alpha/2)
//          = 2^{-n/2} 2^{nu} Gamma(nu) / Gamma(-alpha/2) * e^{-r/2},  nu > 0.
double bessel_hat_envelope(double alpha, int n) {
  const double nu = 0.5 * (-alpha - n);
  if (!(nu > 0.0)) throw std::domain_error("bessel_hat_envelope: need alpha < -n");
  return std::pow(2.0, -0.5 * n + nu) * std::tgamma(nu) / std::tgamma(-0.5 * alpha);
}

}  // namespace psflab::pairs
