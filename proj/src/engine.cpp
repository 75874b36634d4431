#include "psflab/engine.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace psflab::engine {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double sup_norm(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

struct SideRun {
  std::complex<double> value{0.0, 0.0};
  double tail = kInf;
  int shells = 0;
  std::int64_t terms = 0;
  bool met = false;
};

// Shared driver: sum shells until tail_of(r) <= target or the caps bite.
SideRun run_side(int dim, const lattice::TruncationBudget& budget,
                 const std::function<std::complex<double>(const lattice::Shell&)>& shell_sum,
                 const std::function<double(int)>& tail_of) {
  SideRun out;
  lattice::Accumulator acc;
  for (int r = 0; r <= budget.max_shell; ++r) {
    const std::int64_t count = lattice::shell_point_count(dim, r);
    if (out.terms + count > budget.max_terms) break;
    acc.add(shell_sum(lattice::enumerate_shell(dim, r)));
    out.terms += count;
    out.shells = r;
    out.tail = tail_of(r);
    if (out.tail <= budget.target_abs_tol) {
      out.met = true;
      break;
    }
  }
  out.value = acc.result().value;
  return out;
}

SideChoice choose_side(const std::function<double(int)>& freq_tail,
                       const std::function<double(int)>& spat_tail, double tol,
                       int max_shell) {
  SideChoice c;
  for (int r = 0; r <= max_shell; ++r) {
    const double ft = freq_tail(r);
    if (ft <= tol) {
      c.side = Side::frequency;
      c.shells = r;
      c.predicted_tail = ft;
      return c;
    }
    const double st = spat_tail(r);
    if (st <= tol) {
      c.side = Side::spatial;
      c.shells = r;
      c.predicted_tail = st;
      return c;
    }
  }
  const double ft = freq_tail(max_shell);
  const double st = spat_tail(max_shell);
  c.side = ft <= st ? Side::frequency : Side::spatial;
  c.shells = max_shell;
  c.predicted_tail = std::min(ft, st);
  return c;
}

DualEvaluation assemble(const SideRun& lhs, const SideRun& rhs, const SideChoice& choice) {
  DualEvaluation ev;
  ev.lhs_value = lhs.value;
  ev.rhs_value = rhs.value;
  ev.lhs_tail = lhs.tail;
  ev.rhs_tail = rhs.tail;
  ev.discrepancy = std::abs(lhs.value - rhs.value);
  ev.shells_lhs = lhs.shells;
  ev.shells_rhs = rhs.shells;
  ev.terms_lhs = lhs.terms;
  ev.terms_rhs = rhs.terms;
  ev.chosen_side = choice.side;
  ev.slack = engine_slack(std::abs(lhs.value), std::abs(rhs.value));
  ev.budget_exhausted = !lhs.met && !rhs.met;
  ev.passed = !ev.budget_exhausted &&
              ev.discrepancy <= ev.lhs_tail + ev.rhs_tail + ev.slack;
  return ev;
}

}  // namespace

double engine_slack(double lhs_mag, double rhs_mag) {
  return 1e3 * std::numeric_limits<double>::epsilon() *
         std::max({lhs_mag, rhs_mag, 1.0});
}

double reduce_to_period(double x, double period) {
  const double y = x - period * std::floor(x / period + 0.5);
  // guard the half-open interval against rounding at the seam
  if (y < -0.5 * period) return y + period;
  if (y >= 0.5 * period) return y - period;
  return y;
}

DualEvaluation evaluate_identity(const pairs::DualKernelPair& pair,
                                 std::span<const double> x,
                                 const lattice::TruncationBudget& budget) {
  budget.validate();
  if (static_cast<int>(x.size()) != pair.dim())
    throw std::invalid_argument("evaluate_identity: dimension mismatch");
  if (!pair.pointwise())
    throw std::domain_error(
        "evaluate_identity: pair is weak-mode only (series not absolutely "
        "convergent); use the weak pairings");

  std::vector<double> xr(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    xr[i] = reduce_to_period(x[i], pair.period());
  const std::span<const double> xs(xr);

  const auto lhs = run_side(
      pair.dim(), budget,
      [&](const lattice::Shell& s) { return pair.freq_shell_sum(s, xs); },
      [&](int r) { return pair.freq_tail(r); });
  const auto rhs = run_side(
      pair.dim(), budget,
      [&](const lattice::Shell& s) { return pair.spatial_shell_sum(s, xs); },
      [&](int r) { return pair.spatial_tail(r, xs); });
  const auto choice = choose_side([&](int r) { return pair.freq_tail(r); },
                                  [&](int r) { return pair.spatial_tail(r, xs); },
                                  budget.target_abs_tol, budget.max_shell);
  return assemble(lhs, rhs, choice);
}

SideChoice preferred_side(const pairs::DualKernelPair& pair,
                          std::span<const double> x, double tol, int max_shell) {
  if (static_cast<int>(x.size()) != pair.dim())
    throw std::invalid_argument("preferred_side: dimension mismatch");
  std::vector<double> xr(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    xr[i] = reduce_to_period(x[i], pair.period());
  const std::span<const double> xs(xr);
  return choose_side([&](int r) { return pair.freq_tail(r); },
                     [&](int r) { return pair.spatial_tail(r, xs); }, tol, max_shell);
}

SideChoice preferred_side(const pairs::DualKernelPair& pair, double tol,
                          int max_shell) {
  const std::vector<double> origin(static_cast<std::size_t>(pair.dim()), 0.0);
  return preferred_side(pair, origin, tol, max_shell);
}

// lhs: sum_k f(x + 2 pi k); per-term bound |amp| e^{-|x + 2pik - h|^2/(2a)}
// with |x + 2pik - h| >= 2 pi max(|k|_inf - margin, 0), margin = |x-h|_inf/2pi.
// rhs: (2pi)^{-n/2} sum_k F[f](k) e^{ik.x}; |F[f](k)| <= |amp| a^{n/2}
// e^{-a |k - m|^2 / 2}.
DualEvaluation classical_psf(const schwartz::TestFunction& f,
                             std::span<const double> x,
                             const lattice::TruncationBudget& budget) {
  budget.validate();
  if (static_cast<int>(x.size()) != f.dim())
    throw std::invalid_argument("classical_psf: dimension mismatch");
  const int n = f.dim();
  const double a = f.width();
  const double amp = std::abs(f.amplitude());

  std::vector<double> xr(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) xr[i] = reduce_to_period(x[i], kTwoPi);

  std::vector<double> xh(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    xh[i] = (xr[i] - f.shift()[i]) / kTwoPi;
  const double spat_margin = sup_norm(xh);
  const double spat_rate = 2.0 * kPi * kPi / a;

  const double freq_margin = sup_norm(f.modulation());
  const double freq_rate = 0.5 * a;
  const double freq_pref = amp * std::pow(a, 0.5 * n) * std::pow(kTwoPi, -0.5 * n);

  std::vector<double> arg(x.size());
  const auto lhs = run_side(
      n, budget,
      [&](const lattice::Shell& s) {
        lattice::Accumulator acc;
        for (std::size_t i = 0; i < s.size(); ++i) {
          const auto k = s[i];
          for (std::size_t j = 0; j < arg.size(); ++j) arg[j] = xr[j] + kTwoPi * k[j];
          acc.add(f.value(arg));
        }
        return acc.result().value;
      },
      [&](int r) {
        return amp * lattice::gaussian_tail_bound(spat_rate, r, n, spat_margin);
      });

  const double fpref = std::pow(kTwoPi, -0.5 * n);
  const auto rhs = run_side(
      n, budget,
      [&](const lattice::Shell& s) {
        lattice::Accumulator acc;
        for (std::size_t i = 0; i < s.size(); ++i) {
          const auto k = s[i];
          double phase = 0.0;
          for (std::size_t j = 0; j < arg.size(); ++j) {
            arg[j] = static_cast<double>(k[j]);
            phase += arg[j] * xr[j];
          }
          acc.add(fpref * f.fourier(arg) *
                  std::complex<double>(std::cos(phase), std::sin(phase)));
        }
        return acc.result().value;
      },
      [&](int r) {
        return freq_pref * lattice::gaussian_tail_bound(freq_rate, r, n, freq_margin);
      });

  // lhs here is the spatial sum, so feed the chooser in (frequency, spatial)
  // order and rename.
  const auto choice = choose_side(
      [&](int r) {
        return freq_pref * lattice::gaussian_tail_bound(freq_rate, r, n, freq_margin);
      },
      [&](int r) {
        return amp * lattice::gaussian_tail_bound(spat_rate, r, n, spat_margin);
      },
      budget.target_abs_tol, budget.max_shell);
  return assemble(lhs, rhs, choice);
}

DualEvaluation theta_transform_check(double t, int n,
                                     const lattice::TruncationBudget& budget) {
  if (!(t > 0.0)) throw std::invalid_argument("theta_transform_check: need t > 0");
  const auto pair = pairs::heat_pair(t / (kPi * kPi), n);
  const std::vector<double> origin(static_cast<std::size_t>(n), 0.0);
  return evaluate_identity(*pair, origin, budget);
}

DualEvaluation corollary_3_5_check(int terms) {
  if (terms < 1) throw std::invalid_argument("corollary_3_5_check: need terms >= 1");
  lattice::Accumulator acc;
  for (int k = 0; k <= terms; ++k)
    acc.add(2.0 / (1.0 + static_cast<double>(k) * static_cast<double>(k)));
  const auto part = acc.result();

  DualEvaluation ev;
  ev.lhs_value = part.value;
  ev.lhs_tail = lattice::power_tail_bound(2.0, 1.0, terms, 1);
  const double e2p = std::exp(-kTwoPi);
  ev.rhs_value = kPi * (1.0 + e2p) / (1.0 - e2p) + 1.0;
  ev.rhs_tail = 0.0;
  ev.discrepancy = std::abs(ev.lhs_value - ev.rhs_value);
  ev.shells_lhs = terms;
  ev.shells_rhs = 0;
  ev.terms_lhs = terms + 1;
  ev.terms_rhs = 1;
  ev.chosen_side = Side::frequency;  // the closed form is the geometric side
  ev.slack = engine_slack(std::abs(ev.lhs_value), std::abs(ev.rhs_value));
  ev.budget_exhausted = false;  // the closed form side is exact
  ev.passed = ev.discrepancy <= ev.lhs_tail + ev.rhs_tail + ev.slack;
  return ev;
}

}  // namespace psflab::engine
