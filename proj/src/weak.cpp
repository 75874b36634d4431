// Weak pairings of the exponential/delta combs, 2 pi periodization, torus
// Fourier coefficients, and the dyadic-piece growth report.

#include "psflab/weak.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "psflab/engine.hpp"
#include "psflab/kernels.hpp"
#include "psflab/quadrature.hpp"

namespace psflab::weak {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double sup_norm(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

// Largest |k|_inf that can meet supp phi_j, i.e. 2 pi |k| <= 3 * 2^{j-1}.
int lp_box_radius(int j) {
  return static_cast<int>(std::floor(1.5 * std::ldexp(1.0, j) / kTwoPi));
}

}  // namespace

PairingResult pair_dirac_comb(const schwartz::TestFunction& f,
                              const lattice::TruncationBudget& budget) {
  budget.validate();
  const int n = f.dim();
  const double rate = 0.5 / f.width();
  const double margin = sup_norm(f.shift());
  const double amp = std::abs(f.amplitude());
  lattice::Accumulator acc;
  std::vector<double> xk(static_cast<std::size_t>(n));
  PairingResult out;
  out.tail_estimate = kInf;
  std::int64_t terms = 0;
  for (int r = 0; r <= budget.max_shell; ++r) {
    const std::int64_t count = lattice::shell_point_count(n, r);
    if (terms + count > budget.max_terms) break;
    const auto shell = lattice::enumerate_shell(n, r);
    for (std::size_t i = 0; i < shell.size(); ++i) {
      const auto k = shell[i];
      for (int j = 0; j < n; ++j)
        xk[static_cast<std::size_t>(j)] = static_cast<double>(k[static_cast<std::size_t>(j)]);
      acc.add(f.value(xk));
    }
    terms += count;
    out.truncation_level = r;
    out.tail_estimate = amp * lattice::gaussian_tail_bound(rate, r, n, margin);
    if (out.tail_estimate <= budget.target_abs_tol) break;
  }
  out.value = acc.result().value;
  return out;
}

PairingResult pair_exp_comb(const schwartz::TestFunction& f, int n_trunc) {
  if (n_trunc < 0) throw std::invalid_argument("pair_exp_comb: n_trunc must be >= 0");
  const int n = f.dim();
  const double pref = std::pow(kTwoPi, 0.5 * n);
  lattice::Accumulator acc;
  std::vector<double> xi(static_cast<std::size_t>(n));
  for (int r = 0; r <= n_trunc; ++r) {
    const auto shell = lattice::enumerate_shell(n, r);
    for (std::size_t i = 0; i < shell.size(); ++i) {
      const auto k = shell[i];
      for (int j = 0; j < n; ++j)
        xi[static_cast<std::size_t>(j)] =
            -kTwoPi * static_cast<double>(k[static_cast<std::size_t>(j)]);
      acc.add(f.fourier(xi));
    }
  }
  PairingResult out;
  out.value = pref * acc.result().value;
  out.truncation_level = n_trunc;
  const double amp = std::abs(f.amplitude()) * std::pow(f.width(), 0.5 * n);
  out.tail_estimate =
      pref * amp *
      lattice::gaussian_tail_bound(2.0 * kPi * kPi * f.width(), n_trunc, n,
                                   sup_norm(f.modulation()) / kTwoPi);
  return out;
}

PairingResult periodize(const schwartz::TestFunction& f, std::span<const double> x,
                        const lattice::TruncationBudget& budget) {
  budget.validate();
  const int n = f.dim();
  if (static_cast<int>(x.size()) != n)
    throw std::invalid_argument("periodize: x has wrong dimension");
  std::vector<double> xr(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    xr[i] = engine::reduce_to_period(x[i], kTwoPi);
  std::vector<double> c(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) c[i] = (xr[i] - f.shift()[i]) / kTwoPi;
  const double margin = sup_norm(c);
  const double rate = 2.0 * kPi * kPi / f.width();
  const double amp = std::abs(f.amplitude());

  lattice::Accumulator acc;
  std::vector<double> arg(x.size());
  PairingResult out;
  out.tail_estimate = kInf;
  std::int64_t terms = 0;
  for (int r = 0; r <= budget.max_shell; ++r) {
    const std::int64_t count = lattice::shell_point_count(n, r);
    if (terms + count > budget.max_terms) break;
    const auto shell = lattice::enumerate_shell(n, r);
    for (std::size_t i = 0; i < shell.size(); ++i) {
      const auto k = shell[i];
      for (int j = 0; j < n; ++j)
        arg[static_cast<std::size_t>(j)] =
            xr[static_cast<std::size_t>(j)] +
            kTwoPi * static_cast<double>(k[static_cast<std::size_t>(j)]);
      acc.add(f.value(arg));
    }
    terms += count;
    out.truncation_level = r;
    out.tail_estimate = amp * lattice::gaussian_tail_bound(rate, r, n, margin);
    if (out.tail_estimate <= budget.target_abs_tol) break;
  }
  out.value = acc.result().value;
  return out;
}

std::complex<double> torus_fourier_coeff(const schwartz::TestFunction& f,
                                         std::span<const std::int32_t> m,
                                         int grid_per_dim) {
  const int n = f.dim();
  if (static_cast<int>(m.size()) != n)
    throw std::invalid_argument("torus_fourier_coeff: m has wrong dimension");
  if (grid_per_dim < 8)
    throw std::invalid_argument("torus_fourier_coeff: grid_per_dim must be >= 8");
  const double step = kTwoPi / grid_per_dim;
  const lattice::TruncationBudget budget;  // default tails ~1e-12 per sample
  std::vector<double> xg(static_cast<std::size_t>(n));
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  lattice::Accumulator acc;
  for (;;) {
    double phase = 0.0;
    for (int j = 0; j < n; ++j) {
      xg[static_cast<std::size_t>(j)] = step * idx[static_cast<std::size_t>(j)];
      phase -= static_cast<double>(m[static_cast<std::size_t>(j)]) *
               xg[static_cast<std::size_t>(j)];
    }
    acc.add(periodize(f, xg, budget).value *
            std::complex<double>(std::cos(phase), std::sin(phase)));
    int j = 0;
    while (j < n && ++idx[static_cast<std::size_t>(j)] == grid_per_dim) {
      idx[static_cast<std::size_t>(j)] = 0;
      ++j;
    }
    if (j == n) break;
  }
  const double cell = std::pow(step, n) * std::pow(kTwoPi, -0.5 * n);
  return cell * acc.result().value;
}

std::complex<double> lp_piece(int j, std::span<const double> x, int dim) {
  if (j < 0) throw std::invalid_argument("lp_piece: level must be >= 0");
  if (dim < 1 || dim > 3) throw std::invalid_argument("lp_piece: dim must be 1..3");
  if (static_cast<int>(x.size()) != dim)
    throw std::invalid_argument("lp_piece: x has wrong dimension");
  const int kmax = lp_box_radius(j);
  lattice::Accumulator acc;
  std::vector<int> k(static_cast<std::size_t>(dim), -kmax);
  for (;;) {
    double r2 = 0.0;
    double dot = 0.0;
    for (int d = 0; d < dim; ++d) {
      const double kd = k[static_cast<std::size_t>(d)];
      r2 += kd * kd;
      dot += kd * x[static_cast<std::size_t>(d)];
    }
    const double wgt = schwartz::dyadic_window_radial(j, kTwoPi * std::sqrt(r2));
    if (wgt != 0.0) {
      const double phase = kTwoPi * dot;
      acc.add(wgt * std::complex<double>(std::cos(phase), std::sin(phase)));
    }
    int d = 0;
    while (d < dim && ++k[static_cast<std::size_t>(d)] > kmax) {
      k[static_cast<std::size_t>(d)] = -kmax;
      ++d;
    }
    if (d == dim) break;
  }
  return acc.result().value;
}

LPReport csn_report(int j_max, int dim, int grid_per_dim) {
  if (j_max < 2) throw std::invalid_argument("csn_report: j_max must be >= 2");
  if (dim != 1 && dim != 2)
    throw std::invalid_argument("csn_report: dim must be 1 or 2");
  if (grid_per_dim < 16)
    throw std::invalid_argument("csn_report: grid_per_dim must be >= 16");
  const int g = grid_per_dim;
  std::vector<std::complex<double>> roots(static_cast<std::size_t>(g));
  for (int t = 0; t < g; ++t) {
    const double ph = kTwoPi * t / g;
    roots[static_cast<std::size_t>(t)] = {std::cos(ph), std::sin(ph)};
  }
  const auto root_at = [&](std::int64_t prod) -> const std::complex<double>& {
    return roots[static_cast<std::size_t>(((prod % g) + g) % g)];
  };

  LPReport rep;
  rep.dim = dim;
  rep.grid_per_dim = g;
  for (int j = 0; j <= j_max; ++j) {
    const int kmax = lp_box_radius(j);
    const int w = 2 * kmax + 1;
    double sup = 0.0;
    if (dim == 1) {
      std::vector<double> coeff(static_cast<std::size_t>(w));
      for (int k = -kmax; k <= kmax; ++k)
        coeff[static_cast<std::size_t>(k + kmax)] =
            schwartz::dyadic_window_radial(j, kTwoPi * std::abs(static_cast<double>(k)));
      for (int i = 0; i < g; ++i) {
        std::complex<double> s{0.0, 0.0};
        for (int k = -kmax; k <= kmax; ++k)
          s += coeff[static_cast<std::size_t>(k + kmax)] *
               root_at(static_cast<std::int64_t>(k) * i);
        sup = std::max(sup, std::abs(s));
      }
    } else {
      std::vector<double> coeff(static_cast<std::size_t>(w) * static_cast<std::size_t>(w));
      for (int k1 = -kmax; k1 <= kmax; ++k1)
        for (int k2 = -kmax; k2 <= kmax; ++k2)
          coeff[static_cast<std::size_t>((k1 + kmax) * w + (k2 + kmax))] =
              schwartz::dyadic_window_radial(
                  j, kTwoPi * std::hypot(static_cast<double>(k1),
                                         static_cast<double>(k2)));
      // inner[i2][k1] = sum_k2 coeff(k1,k2) * omega^{k2 i2}; the outer scan is
      // then one vectorized dot per grid point
      std::vector<std::complex<double>> inner(static_cast<std::size_t>(g) *
                                              static_cast<std::size_t>(w));
      for (int i2 = 0; i2 < g; ++i2)
        for (int k1 = -kmax; k1 <= kmax; ++k1) {
          std::complex<double> s{0.0, 0.0};
          for (int k2 = -kmax; k2 <= kmax; ++k2)
            s += coeff[static_cast<std::size_t>((k1 + kmax) * w + (k2 + kmax))] *
                 root_at(static_cast<std::int64_t>(k2) * i2);
          inner[static_cast<std::size_t>(i2) * static_cast<std::size_t>(w) +
                static_cast<std::size_t>(k1 + kmax)] = s;
        }
      std::vector<std::complex<double>> row(static_cast<std::size_t>(w));
      for (int i1 = 0; i1 < g; ++i1) {
        for (int k1 = -kmax; k1 <= kmax; ++k1)
          row[static_cast<std::size_t>(k1 + kmax)] =
              root_at(static_cast<std::int64_t>(k1) * i1);
        for (int i2 = 0; i2 < g; ++i2) {
          const auto* base = inner.data() +
                             static_cast<std::size_t>(i2) * static_cast<std::size_t>(w);
          const std::complex<double> v = kernels::cplx_dot(
              std::span<const std::complex<double>>(row.data(), row.size()),
              std::span<const std::complex<double>>(base, static_cast<std::size_t>(w)));
          sup = std::max(sup, std::abs(v));
        }
      }
    }
    LPLevel lvl;
    lvl.level = j;
    lvl.sup_modulus = sup;
    lvl.scale_ratio = std::ldexp(sup, -j * dim);
    rep.levels.push_back(lvl);
    rep.max_ratio = std::max(rep.max_ratio, lvl.scale_ratio);
  }
  return rep;
}

PairingResult pair_frequency_side(const pairs::DualKernelPair& pair,
                                  const schwartz::TestFunction& f,
                                  const lattice::TruncationBudget& budget) {
  budget.validate();
  if (pair.dim() != 1 || f.dim() != 1)
    throw std::invalid_argument("pair_frequency_side: dimension 1 only");
  const std::array<std::int32_t, 1> unit{1};
  std::array<double, 1> v{};
  pair.freq_wavevector(unit, v);
  const double s = std::abs(v[0]);  // wavevector per lattice step
  if (!(s > 0.0))
    throw std::invalid_argument("pair_frequency_side: degenerate wavevector");
  const double rate = 0.5 * f.width() * s * s;
  const double margin = sup_norm(f.modulation()) / s;
  const double head =
      pair.freq_coeff_sup() * std::sqrt(kTwoPi) * std::abs(f.amplitude()) *
      std::sqrt(f.width());

  lattice::Accumulator acc;
  PairingResult out;
  out.tail_estimate = kInf;
  std::int64_t terms = 0;
  for (int r = 0; r <= budget.max_shell; ++r) {
    const std::int64_t count = lattice::shell_point_count(1, r);
    if (terms + count > budget.max_terms) break;
    const auto shell = lattice::enumerate_shell(1, r);
    for (std::size_t i = 0; i < shell.size(); ++i) {
      const auto k = shell[i];
      pair.freq_wavevector(k, v);
      acc.add(pair.freq_coeff(k) * f.fourier(-v[0]));
    }
    terms += count;
    out.truncation_level = r;
    out.tail_estimate = head * lattice::gaussian_tail_bound(rate, r, 1, margin);
    if (out.tail_estimate <= budget.target_abs_tol) break;
  }
  out.value = std::sqrt(kTwoPi) * acc.result().value;
  return out;
}

PairingResult pair_spatial_side(const pairs::DualKernelPair& pair,
                                const schwartz::TestFunction& f,
                                const lattice::TruncationBudget& budget) {
  budget.validate();
  if (pair.dim() != 1 || f.dim() != 1)
    throw std::invalid_argument("pair_spatial_side: dimension 1 only");
  const double period = pair.period();
  const double a = f.width();
  const double h = f.shift()[0];
  const double mmod = std::abs(f.modulation()[0]);
  const double amp = std::abs(f.amplitude());

  const auto kval = [&pair](double y) {
    return pair.spatial_kernel(std::span<const double>(&y, 1));
  };
  const auto kenv = [&](double s) { return std::abs(kval(s)) + std::abs(kval(-s)); };

  // f is negligible outside |y - c| <= w; panels track the fastest scale
  const double w = std::sqrt(90.0 * a);
  const double max_panel = std::min({0.5, 2.0 / (1.0 + mmod), std::sqrt(a)});
  const double tol_k = std::max(budget.target_abs_tol / 16.0, 1e-15);

  double qerr = 0.0;
  const auto add_result = [&](std::complex<double>& total, const quad::Result& res) {
    total += res.value;
    qerr += res.error_estimate;
  };
  // translate integral: int K(y) f(y + period*k) dy over the f window, with a
  // u^2 substitution on any half touching y = 0 (absorbs kernel cusps there)
  const auto ik = [&](double kk) {
    const double c = h - period * kk;
    const double lo = c - w;
    const double hi = c + w;
    const quad::Integrand g = [&](double y) { return kval(y) * f.value(y + period * kk); };
    std::complex<double> total{0.0, 0.0};
    if (lo < 0.0 && hi > 0.0) {
      const quad::Integrand gm = [&](double u) { return g(-u * u) * 2.0 * u; };
      const quad::Integrand gp = [&](double u) { return g(u * u) * 2.0 * u; };
      const double up = std::min(0.5, std::sqrt(max_panel));
      add_result(total, quad::integrate_panels(gm, 0.0, std::sqrt(-lo), up, 0.5 * tol_k));
      add_result(total, quad::integrate_panels(gp, 0.0, std::sqrt(hi), up, 0.5 * tol_k));
    } else {
      add_result(total, quad::integrate_panels(g, lo, hi, max_panel, tol_k));
    }
    return total;
  };

  // one-off kernel mass estimate for the shell-tail forecast
  const double probe_reach = std::max(8.0, 2.0 * period);
  double kernel_l1 = 0.0;
  {
    const quad::Integrand gabs = [&](double u) {
      return std::complex<double>(
          (std::abs(kval(u * u)) + std::abs(kval(-u * u))) * 2.0 * u, 0.0);
    };
    kernel_l1 =
        quad::integrate_panels(gabs, 0.0, std::sqrt(probe_reach), 0.5, 1e-8).value.real();
  }

  const double mh = std::abs(h) / period;
  // |I_k| <= amp e^{-c^2/8a} * int|K| + sup_{|y|>|c|/2}|K| * amp sqrt(2 pi a);
  // geometric continuation of the probed kernel envelope covers the far part
  const auto shell_tail = [&](int r) {
    const double t1 = (kernel_l1 + 1.0) * amp *
                      lattice::gaussian_tail_bound(period * period / (8.0 * a), r, 1, mh);
    const double sdist = 0.5 * period * (static_cast<double>(r) + 1.0 - mh);
    double t2 = kInf;
    if (sdist > 0.0) {
      const double e0 = kenv(sdist);
      if (e0 == 0.0) {
        t2 = 0.0;
      } else {
        const double rho = std::min(0.9, kenv(sdist + 0.5 * period) / e0);
        t2 = 2.0 * amp * std::sqrt(kTwoPi * a) * e0 / (1.0 - rho);
      }
    }
    return t1 + t2;
  };

  lattice::Accumulator acc;
  PairingResult out;
  out.tail_estimate = kInf;
  std::int64_t terms = 0;
  for (int r = 0; r <= budget.max_shell; ++r) {
    const std::int64_t count = lattice::shell_point_count(1, r);
    if (terms + count > budget.max_terms) break;
    const auto shell = lattice::enumerate_shell(1, r);
    for (std::size_t i = 0; i < shell.size(); ++i) {
      const double kk = static_cast<double>(shell[i][0]);
      const double c = h - period * kk;
      if (std::abs(c) > w) {
        // window excludes the kernel centre; skip once provably below tol
        const double ynear = c > 0.0 ? c - w : c + w;
        const double bound = kenv(std::abs(ynear)) * amp * std::sqrt(kTwoPi * a);
        if (bound < 0.25 * tol_k) {
          qerr += bound;
          continue;
        }
      }
      acc.add(ik(kk));
    }
    terms += count;
    out.truncation_level = r;
    out.tail_estimate = shell_tail(r) + qerr;
    if (out.tail_estimate <= budget.target_abs_tol) break;
  }
  out.value = acc.result().value;
  return out;
}

std::vector<schwartz::TestFunction> standard_battery(int dim) {
  if (dim < 1 || dim > 3)
    throw std::invalid_argument("standard_battery: dim must be 1..3");
  std::vector<schwartz::TestFunction> out;
  const double widths[] = {0.5, 1.0, 2.0};
  const double shifts[] = {0.0, 0.4};
  const double mods[] = {0.0, kTwoPi};
  for (double a : widths)
    for (double s : shifts)
      for (double q : mods) {
        std::vector<double> h(static_cast<std::size_t>(dim), 0.0);
        std::vector<double> m(static_cast<std::size_t>(dim), 0.0);
        h[0] = s;
        m[0] = q;
        out.push_back(schwartz::shift_modulate(schwartz::gaussian(a, dim), h, m));
      }
  return out;
}

}  // namespace psflab::weak
