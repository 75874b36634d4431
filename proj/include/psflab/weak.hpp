#pragma once
// Weak (distributional) pairings: both sides of the comb identity
// sum_k e^{2 pi i k.x} = sum_k delta_k paired against test functions,
// periodization, torus Fourier coefficients, and the dyadic-piece growth
// report that witnesses the C^{-n} regularity scale.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "psflab/kernel_pairs.hpp"
#include "psflab/lattice.hpp"
#include "psflab/schwartz.hpp"

namespace psflab::weak {

struct PairingResult {
  std::complex<double> value{0.0, 0.0};
  int truncation_level = 0;   // shell / index radius actually used
  double tail_estimate = 0.0; // bound (or estimate, where noted) on dropped mass
};

// < sum_k delta_k, f > = sum_{k in Z^n} f(k); certified gaussian tail.
PairingResult pair_dirac_comb(const schwartz::TestFunction& f,
                              const lattice::TruncationBudget& budget = {});

// < sum_k e^{2 pi i k.x}, f > = (2 pi)^{n/2} sum_{|k|_inf <= n_trunc} F[f](-2 pi k).
PairingResult pair_exp_comb(const schwartz::TestFunction& f, int n_trunc);

// sum_k f(x + 2 pi k); 2 pi periodic, x need not be reduced.
PairingResult periodize(const schwartz::TestFunction& f, std::span<const double> x,
                        const lattice::TruncationBudget& budget = {});

// Trapezoid rule on (grid_per_dim)^n for the torus coefficient
//   (2 pi)^{-n/2} Int_{[0,2pi]^n} periodize(f)(x) e^{-i m.x} dx,
// spectrally accurate; equals F[f](m).
std::complex<double> torus_fourier_coeff(const schwartz::TestFunction& f,
                                         std::span<const std::int32_t> m,
                                         int grid_per_dim = 256);

// Dyadic frequency piece of the exponential comb:
//   sum_k phi_j(2 pi k) e^{2 pi i k.x}   (finite sum; j = 0 gives 1).
std::complex<double> lp_piece(int j, std::span<const double> x, int dim);

struct LPLevel {
  int level = 0;
  double sup_modulus = 0.0;  // max over the sample grid of |lp_piece|
  double scale_ratio = 0.0;  // 2^{-level * dim} * sup_modulus
};

struct LPReport {
  int dim = 1;
  int grid_per_dim = 1024;
  std::vector<LPLevel> levels;
  double max_ratio = 0.0;
};

// Scans levels 0..j_max on a uniform torus grid. The scale_ratio column must
// stay bounded (the distribution lives exactly at smoothness -n).
LPReport csn_report(int j_max, int dim, int grid_per_dim = 1024);

// Weak-mode pairing of a dual kernel pair against f (dim 1 integration):
//   frequency side: sum_k freq_coeff(k) * (2 pi)^{1/2} F[f](-v(k))
//   spatial side:   sum_k Int spatial_kernel(y) f(y + P k) dy  (adaptive GL)
PairingResult pair_frequency_side(const pairs::DualKernelPair& pair,
                                  const schwartz::TestFunction& f,
                                  const lattice::TruncationBudget& budget = {});
PairingResult pair_spatial_side(const pairs::DualKernelPair& pair,
                                const schwartz::TestFunction& f,
                                const lattice::TruncationBudget& budget = {});

// Width {1/2, 1, 2} x shift {0, 0.4e_1} x modulation {0, 2 pi e_1} battery.
std::vector<schwartz::TestFunction> standard_battery(int dim);

}  // namespace psflab::weak
