// Warped combs: 1-D diffeomorphisms, affine maps, point-mass pushforwards,
// and the regularized frequency-side sums that match them weakly.

#include "psflab/diffeo.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "psflab/quadrature.hpp"

namespace psflab::diffeo {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double dot_offset(std::span<const std::int32_t> k, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) s += static_cast<double>(k[i]) * b[i];
  return s;
}

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

}  // namespace

Diffeo1D Diffeo1D::make(std::function<double(double)> psi,
                        std::function<double(double)> dpsi, double c1, double c2,
                        std::string name) {
  if (!psi || !dpsi) throw std::invalid_argument("Diffeo1D: null callables");
  if (!(c1 > 0.0) || !(c2 >= c1))
    throw std::invalid_argument("Diffeo1D: need 0 < c1 <= c2");
  constexpr double kReach = 40.0;
  constexpr int kSamples = 2001;
  double prev = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    const double x = -kReach + 2.0 * kReach * i / (kSamples - 1);
    const double s = dpsi(x);
    if (!(s >= c1 * (1.0 - 1e-9)) || !(s <= c2 * (1.0 + 1e-9)))
      throw std::invalid_argument("Diffeo1D: slope leaves [c1, c2] on the sample grid");
    const double cur = psi(x);
    if (i > 0 && !(cur > prev))
      throw std::invalid_argument("Diffeo1D: not strictly increasing");
    prev = cur;
  }
  for (int i = 0; i <= 40; ++i) {
    const double x = -kReach + 2.0 * kReach * i / 40.0;
    const double fd = (psi(x + 5e-6) - psi(x - 5e-6)) / 1e-5;
    if (std::abs(fd - dpsi(x)) > 1e-4 * std::max(1.0, std::abs(dpsi(x))))
      throw std::invalid_argument("Diffeo1D: dpsi inconsistent with psi");
  }
  Diffeo1D d;
  d.psi_ = std::move(psi);
  d.dpsi_ = std::move(dpsi);
  d.c1_ = c1;
  d.c2_ = c2;
  d.psi0_ = d.psi_(0.0);
  d.name_ = std::move(name);
  return d;
}

double invert_diffeo(const Diffeo1D& d, double y) {
  // slope bounds bracket the root: x between (y - psi(0))/c2 and (y - psi(0))/c1
  const double t = y - d.at_zero();
  double lo = std::min(t / d.slope_max(), t / d.slope_min());
  double hi = std::max(t / d.slope_max(), t / d.slope_min());
  const double pad = 1e-9 * (1.0 + std::abs(t) / d.slope_min());
  lo -= pad;
  hi += pad;
  double flo = d(lo) - y;
  double fhi = d(hi) - y;
  const double tol = 1e-13 * std::max(1.0, std::abs(y));
  if (std::abs(flo) <= tol) return lo;
  if (std::abs(fhi) <= tol) return hi;
  if (flo > 0.0 || fhi < 0.0)
    throw std::runtime_error("invert_diffeo: bracket failed (slope bounds violated)");
  double x = 0.5 * (lo + hi);
  int stall = 0;  // consecutive updates of the same end -> force a bisection
  int last_side = 0;
  for (int it = 0; it < 400; ++it) {
    double cand;
    if (stall >= 2 || !(fhi - flo > 0.0)) {
      cand = 0.5 * (lo + hi);
    } else {
      cand = hi - fhi * (hi - lo) / (fhi - flo);
      if (!(cand > lo && cand < hi)) cand = 0.5 * (lo + hi);
    }
    const double fc = d(cand) - y;
    x = cand;
    if (std::abs(fc) <= tol) return cand;
    if (fc < 0.0) {
      lo = cand;
      flo = fc;
      stall = (last_side == -1) ? stall + 1 : 0;
      last_side = -1;
    } else {
      hi = cand;
      fhi = fc;
      stall = (last_side == 1) ? stall + 1 : 0;
      last_side = 1;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() *
                       std::max(1.0, std::abs(cand)))
      break;
  }
  if (std::abs(d(x) - y) <= tol) return x;
  throw std::runtime_error("invert_diffeo: residual tolerance not reached");
}

AffineMap AffineMap::make(int n, std::span<const double> a_rowmajor,
                          std::span<const double> b, std::string name) {
  if (n < 1 || n > 3) throw std::invalid_argument("AffineMap: dim must be 1..3");
  if (a_rowmajor.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
    throw std::invalid_argument("AffineMap: matrix has wrong size");
  if (b.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("AffineMap: offset has wrong size");

  std::vector<double> a(a_rowmajor.begin(), a_rowmajor.end());
  double det = 0.0;
  std::vector<double> inv(a.size(), 0.0);
  if (n == 1) {
    det = a[0];
    if (det != 0.0) inv[0] = 1.0 / det;
  } else if (n == 2) {
    det = a[0] * a[3] - a[1] * a[2];
    if (det != 0.0) {
      inv[0] = a[3] / det;
      inv[1] = -a[1] / det;
      inv[2] = -a[2] / det;
      inv[3] = a[0] / det;
    }
  } else {
    const double c00 = a[4] * a[8] - a[5] * a[7];
    const double c01 = a[5] * a[6] - a[3] * a[8];
    const double c02 = a[3] * a[7] - a[4] * a[6];
    det = a[0] * c00 + a[1] * c01 + a[2] * c02;
    if (det != 0.0) {
      inv[0] = c00 / det;
      inv[1] = (a[2] * a[7] - a[1] * a[8]) / det;
      inv[2] = (a[1] * a[5] - a[2] * a[4]) / det;
      inv[3] = c01 / det;
      inv[4] = (a[0] * a[8] - a[2] * a[6]) / det;
      inv[5] = (a[2] * a[3] - a[0] * a[5]) / det;
      inv[6] = c02 / det;
      inv[7] = (a[1] * a[6] - a[0] * a[7]) / det;
      inv[8] = (a[0] * a[4] - a[1] * a[3]) / det;
    }
  }
  if (!(std::abs(det) > 0.0) || !std::isfinite(det))
    throw std::invalid_argument("AffineMap: singular matrix");

  double residual = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int l = 0; l < n; ++l)
        s += a[static_cast<std::size_t>(i * n + l)] * inv[static_cast<std::size_t>(l * n + j)];
      residual = std::max(residual, std::abs(s - (i == j ? 1.0 : 0.0)));
    }
  if (residual > 1e-12)
    throw std::invalid_argument("AffineMap: inverse residual exceeds 1e-12 (ill-conditioned)");

  double fro_a = 0.0, fro_inv = 0.0;
  for (double v : a) fro_a += v * v;
  for (double v : inv) fro_inv += v * v;

  AffineMap m;
  m.n_ = n;
  m.a_ = std::move(a);
  m.ainv_ = std::move(inv);
  m.b_.assign(b.begin(), b.end());
  m.det_ = det;
  m.sigma_max_ub_ = std::sqrt(fro_a);
  m.sigma_min_lb_ = 1.0 / std::sqrt(fro_inv);
  m.name_ = std::move(name);
  return m;
}

void AffineMap::apply(std::span<const double> x, std::span<double> out) const {
  for (int i = 0; i < n_; ++i) {
    double s = b_[static_cast<std::size_t>(i)];
    for (int j = 0; j < n_; ++j)
      s += a_[static_cast<std::size_t>(i * n_ + j)] * x[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(i)] = s;
  }
}

void AffineMap::apply_inverse(std::span<const double> y, std::span<double> out) const {
  std::array<double, 3> shifted{};
  for (int i = 0; i < n_; ++i)
    shifted[static_cast<std::size_t>(i)] =
        y[static_cast<std::size_t>(i)] - b_[static_cast<std::size_t>(i)];
  for (int i = 0; i < n_; ++i) {
    double s = 0.0;
    for (int j = 0; j < n_; ++j)
      s += ainv_[static_cast<std::size_t>(i * n_ + j)] * shifted[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(i)] = s;
  }
}

void AffineMap::apply_transpose(std::span<const double> x, std::span<double> out) const {
  for (int i = 0; i < n_; ++i) {
    double s = 0.0;
    for (int j = 0; j < n_; ++j)
      s += a_[static_cast<std::size_t>(j * n_ + i)] * x[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(i)] = s;
  }
}

Multiplier Multiplier::one() {
  Multiplier g;
  g.value = [](double) { return std::complex<double>(1.0, 0.0); };
  g.sup_bound = 1.0;
  g.name = "one";
  return g;
}

Multiplier Multiplier::gaussian_bump(double base, double amp, double center,
                                     double width) {
  if (!(width > 0.0)) throw std::invalid_argument("Multiplier: width must be > 0");
  Multiplier g;
  g.value = [base, amp, center, width](double x) {
    const double u = (x - center) / width;
    return std::complex<double>(base + amp * std::exp(-0.5 * u * u), 0.0);
  };
  g.sup_bound = std::abs(base) + std::abs(amp);
  g.name = "bump";
  return g;
}

std::complex<double> dirac_pushforward(const Diffeo1D& d, double z,
                                       const schwartz::TestFunction& f) {
  if (f.dim() != 1)
    throw std::invalid_argument("dirac_pushforward: test function must be 1-D");
  const double x = invert_diffeo(d, z);
  return f.value(x) / d.derivative(x);
}

std::complex<double> dirac_pushforward(const AffineMap& m, std::span<const double> z,
                                       const schwartz::TestFunction& f) {
  if (f.dim() != m.dim())
    throw std::invalid_argument("dirac_pushforward: dimension mismatch");
  std::array<double, 3> x{};
  m.apply_inverse(z, std::span<double>(x.data(), static_cast<std::size_t>(m.dim())));
  return f.value(std::span<const double>(x.data(), static_cast<std::size_t>(m.dim()))) /
         std::abs(m.det());
}

weak::PairingResult warped_comb_rhs(const Diffeo1D& d, const Multiplier& g,
                                    const schwartz::TestFunction& f,
                                    const lattice::TruncationBudget& budget) {
  budget.validate();
  if (f.dim() != 1) throw std::invalid_argument("warped_comb_rhs: 1-D only");
  if (!g.value) throw std::invalid_argument("warped_comb_rhs: null multiplier");
  const double a = f.width();
  const double c2 = d.slope_max();
  // |psi^{-1}(k) - h| >= (|k| - |psi(0)| - c2 |h|) / c2
  const double rate = 0.5 / (a * c2 * c2);
  const double margin = std::abs(d.at_zero()) + c2 * std::abs(f.shift()[0]);
  const double head = std::abs(f.amplitude()) * g.sup_bound / d.slope_min();

  lattice::Accumulator acc;
  weak::PairingResult out;
  out.tail_estimate = kInf;
  std::int64_t terms = 0;
  for (int r = 0; r <= budget.max_shell; ++r) {
    const std::int64_t count = lattice::shell_point_count(1, r);
    if (terms + count > budget.max_terms) break;
    const auto shell = lattice::enumerate_shell(1, r);
    for (std::size_t i = 0; i < shell.size(); ++i) {
      const double x = invert_diffeo(d, static_cast<double>(shell[i][0]));
      acc.add(g.value(x) / d.derivative(x) * f.value(x));
    }
    terms += count;
    out.truncation_level = r;
    out.tail_estimate = head * lattice::gaussian_tail_bound(rate, r, 1, margin);
    if (out.tail_estimate <= budget.target_abs_tol) break;
  }
  out.value = acc.result().value;
  return out;
}

weak::PairingResult warped_comb_lhs(const Diffeo1D& d, const Multiplier& g,
                                    const schwartz::TestFunction& f, double eps,
                                    int n_trunc) {
  if (!(eps > 0.0)) throw std::invalid_argument("warped_comb_lhs: eps must be > 0");
  if (n_trunc < 1) throw std::invalid_argument("warped_comb_lhs: n_trunc must be >= 1");
  if (f.dim() != 1) throw std::invalid_argument("warped_comb_lhs: 1-D only");
  if (!g.value) throw std::invalid_argument("warped_comb_lhs: null multiplier");
  const double a = f.width();
  const double h = f.shift()[0];
  const double w = std::sqrt(90.0 * a);  // f negligible beyond (certainly < 1e-19)
  const double mmod = std::abs(f.modulation()[0]);

  // the integrals are eps-independent; compute each once on panels no wider
  // than a quarter wave of the fastest phase
  std::vector<std::complex<double>> ik(static_cast<std::size_t>(2 * n_trunc + 1));
  double qerr = 0.0;
  bool all_converged = true;
  for (int k = -n_trunc; k <= n_trunc; ++k) {
    double panel = std::min({0.5, std::sqrt(a), 2.0 / (1.0 + mmod)});
    if (k != 0)
      panel = std::min(panel, 0.25 / (std::abs(static_cast<double>(k)) * d.slope_max()));
    const quad::Integrand gk = [&](double x) {
      const double ph = kTwoPi * static_cast<double>(k) * d(x);
      return g.value(x) * f.value(x) * std::complex<double>(std::cos(ph), std::sin(ph));
    };
    const auto res = quad::integrate_panels(gk, h - w, h + w, panel, 1e-13);
    ik[static_cast<std::size_t>(k + n_trunc)] = res.value;
    qerr += res.error_estimate;
    all_converged = all_converged && res.converged;
  }
  if (!all_converged)
    throw std::runtime_error("warped_comb_lhs: oscillatory quadrature did not converge");

  const auto abel_sum = [&](double e) {
    lattice::Accumulator acc;
    for (int k = -n_trunc; k <= n_trunc; ++k)
      acc.add(std::exp(-e * static_cast<double>(k) * static_cast<double>(k)) *
              ik[static_cast<std::size_t>(k + n_trunc)]);
    return acc.result().value;
  };
  // Richardson in eps: S(e) = S0 + A e + B e^2 + O(e^3); the combination
  // (S(e) - 6 S(e/2) + 8 S(e/4)) / 3 cancels both low orders
  const std::complex<double> s0 = abel_sum(eps);
  const std::complex<double> s1 = abel_sum(0.5 * eps);
  const std::complex<double> s2 = abel_sum(0.25 * eps);
  const std::complex<double> star = (s0 - 6.0 * s1 + 8.0 * s2) / 3.0;
  // one halving deeper, as an error probe only
  const std::complex<double> s3 = abel_sum(0.125 * eps);
  const std::complex<double> star_next = (s1 - 6.0 * s2 + 8.0 * s3) / 3.0;

  weak::PairingResult out;
  out.value = star;
  out.truncation_level = n_trunc;
  out.tail_estimate = qerr + std::abs(star - star_next) +
                      2.0 * (std::abs(ik.front()) + std::abs(ik.back()));
  return out;
}

engine::DualEvaluation warped_comb_check(const Diffeo1D& d, const Multiplier& g,
                                         const schwartz::TestFunction& f, double tol,
                                         double eps, int n_trunc,
                                         const lattice::TruncationBudget& budget) {
  if (!(tol > 0.0)) throw std::invalid_argument("warped_comb_check: tol must be > 0");
  const auto lhs = warped_comb_lhs(d, g, f, eps, n_trunc);
  const auto rhs = warped_comb_rhs(d, g, f, budget);
  engine::DualEvaluation ev;
  ev.lhs_value = lhs.value;
  ev.rhs_value = rhs.value;
  ev.lhs_tail = lhs.tail_estimate;
  ev.rhs_tail = rhs.tail_estimate;
  ev.discrepancy = std::abs(lhs.value - rhs.value);
  ev.shells_lhs = lhs.truncation_level;
  ev.shells_rhs = rhs.truncation_level;
  ev.terms_lhs = 2 * static_cast<std::int64_t>(lhs.truncation_level) + 1;
  ev.terms_rhs = 2 * static_cast<std::int64_t>(rhs.truncation_level) + 1;
  ev.chosen_side = engine::Side::spatial;  // the pushforward side carries the bound
  ev.slack = engine::engine_slack(std::abs(lhs.value), std::abs(rhs.value));
  ev.budget_exhausted = false;
  ev.passed = ev.discrepancy <= tol;
  return ev;
}

engine::DualEvaluation affine_comb_check(const AffineMap& m,
                                         const schwartz::TestFunction& f,
                                         const lattice::TruncationBudget& budget) {
  budget.validate();
  const int n = m.dim();
  if (f.dim() != n) throw std::invalid_argument("affine_comb_check: dimension mismatch");
  const double a = f.width();
  const double adet = std::abs(m.det());
  const double smin = m.sigma_min_lb();
  const double smax = m.sigma_max_ub();
  const double amp = std::abs(f.amplitude());
  const double pref = std::pow(kTwoPi, 0.5 * n);

  // lhs: sum_k e^{2 pi i k.b} (2 pi)^{n/2} F[f](-2 pi A^T k)
  const double lhs_rate = 2.0 * kPi * kPi * a * smin * smin;
  const double lhs_margin = norm2(f.modulation()) / (kTwoPi * smin);
  const double lhs_head = pref * amp * std::pow(a, 0.5 * n);
  // rhs: |det A|^{-1} sum_k f(A^{-1}(k - b))
  const double rhs_rate = 0.5 / (a * smax * smax);
  const double rhs_margin = norm2(m.offset()) + smax * norm2(f.shift());
  const double rhs_head = amp / adet;

  struct SideRun {
    std::complex<double> value{0.0, 0.0};
    double tail = kInf;
    int shells = 0;
    std::int64_t terms = 0;
    bool met = false;
  };
  std::array<double, 3> kv{};
  std::array<double, 3> tmp{};
  std::array<double, 3> xi{};

  const auto run = [&](bool freq_side) {
    SideRun out;
    lattice::Accumulator acc;
    for (int r = 0; r <= budget.max_shell; ++r) {
      const std::int64_t count = lattice::shell_point_count(n, r);
      if (out.terms + count > budget.max_terms) break;
      const auto shell = lattice::enumerate_shell(n, r);
      for (std::size_t i = 0; i < shell.size(); ++i) {
        const auto k = shell[i];
        for (int j = 0; j < n; ++j)
          kv[static_cast<std::size_t>(j)] =
              static_cast<double>(k[static_cast<std::size_t>(j)]);
        const auto kspan = std::span<const double>(kv.data(), static_cast<std::size_t>(n));
        if (freq_side) {
          m.apply_transpose(kspan, std::span<double>(tmp.data(), static_cast<std::size_t>(n)));
          for (int j = 0; j < n; ++j)
            xi[static_cast<std::size_t>(j)] = -kTwoPi * tmp[static_cast<std::size_t>(j)];
          const double phase = kTwoPi * dot_offset(k, m.offset());
          acc.add(pref * f.fourier(std::span<const double>(xi.data(), static_cast<std::size_t>(n))) *
                  std::complex<double>(std::cos(phase), std::sin(phase)));
        } else {
          m.apply_inverse(kspan, std::span<double>(tmp.data(), static_cast<std::size_t>(n)));
          acc.add(f.value(std::span<const double>(tmp.data(), static_cast<std::size_t>(n))) / adet);
        }
      }
      out.terms += count;
      out.shells = r;
      out.tail = freq_side
                     ? lhs_head * lattice::gaussian_tail_bound(lhs_rate, r, n, lhs_margin)
                     : rhs_head * lattice::gaussian_tail_bound(rhs_rate, r, n, rhs_margin);
      if (out.tail <= budget.target_abs_tol) {
        out.met = true;
        break;
      }
    }
    out.value = acc.result().value;
    return out;
  };

  const SideRun lhs = run(true);
  const SideRun rhs = run(false);
  engine::DualEvaluation ev;
  ev.lhs_value = lhs.value;
  ev.rhs_value = rhs.value;
  ev.lhs_tail = lhs.tail;
  ev.rhs_tail = rhs.tail;
  ev.discrepancy = std::abs(lhs.value - rhs.value);
  ev.shells_lhs = lhs.shells;
  ev.shells_rhs = rhs.shells;
  ev.terms_lhs = lhs.terms;
  ev.terms_rhs = rhs.terms;
  ev.chosen_side = lhs.shells <= rhs.shells ? engine::Side::frequency
                                            : engine::Side::spatial;
  ev.slack = engine::engine_slack(std::abs(lhs.value), std::abs(rhs.value));
  ev.budget_exhausted = !lhs.met && !rhs.met;
  ev.passed = !ev.budget_exhausted &&
              ev.discrepancy <= ev.lhs_tail + ev.rhs_tail + ev.slack;
  return ev;
}

}  // namespace psflab::diffeo
