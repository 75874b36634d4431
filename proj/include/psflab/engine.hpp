#pragma once
// Drives both sides of a summation identity to their truncation targets and
// renders a verdict: the observed discrepancy must be covered by the sum of
// the certified tail bounds plus a small floating-point slack, and at least
// one side must have reached the requested tolerance within budget.

#include <complex>
#include <cstdint>
#include <span>

#include "psflab/kernel_pairs.hpp"
#include "psflab/lattice.hpp"
#include "psflab/schwartz.hpp"

namespace psflab::engine {

using pairs::Side;

// lhs/rhs follow the identity as written. For evaluate_identity the left
// side is the frequency series and the right side the spatial one; for
// classical_psf the left side is the periodization sum.
struct DualEvaluation {
  std::complex<double> lhs_value{0.0, 0.0};
  std::complex<double> rhs_value{0.0, 0.0};
  double lhs_tail = 0.0;
  double rhs_tail = 0.0;
  double discrepancy = 0.0;  // |lhs_value - rhs_value|
  int shells_lhs = 0;
  int shells_rhs = 0;
  std::int64_t terms_lhs = 0;
  std::int64_t terms_rhs = 0;
  Side chosen_side = Side::frequency;  // cheaper representation (see preferred_side)
  double slack = 0.0;
  bool budget_exhausted = false;  // neither side reached target_abs_tol
  bool passed = false;
};

// 1e3 * eps * max(|lhs|, |rhs|, 1): rounding allowance for the compensated
// partial sums on top of the analytic tail bounds.
double engine_slack(double lhs_mag, double rhs_mag);

// Reduce to [-period/2, period/2).
double reduce_to_period(double x, double period);

// Evaluates both sides at x (componentwise period-reduced first).
// Throws std::domain_error if !pair.pointwise(), std::invalid_argument on
// dimension mismatch or invalid budget.
DualEvaluation evaluate_identity(const pairs::DualKernelPair& pair,
                                 std::span<const double> x,
                                 const lattice::TruncationBudget& budget);

struct SideChoice {
  Side side = Side::frequency;
  int shells = 0;         // first shell whose tail bound clears tol
  double predicted_tail = 0.0;
};

// The side whose certified tail first drops below tol; frequency wins ties.
// If neither clears tol by max_shell, picks the smaller tail there.
SideChoice preferred_side(const pairs::DualKernelPair& pair,
                          std::span<const double> x, double tol, int max_shell);
SideChoice preferred_side(const pairs::DualKernelPair& pair, double tol,
                          int max_shell);  // at x = 0

// sum_k f(x + 2 pi k)  vs  (2 pi)^{-n/2} sum_k F[f](k) e^{i k.x}
// (lhs = periodization / spatial, rhs = Fourier series / frequency).
DualEvaluation classical_psf(const schwartz::TestFunction& f,
                             std::span<const double> x,
                             const lattice::TruncationBudget& budget);

// sum_k e^{-t |k|^2}  vs  (pi/t)^{n/2} sum_k e^{-pi^2 |k|^2 / t}; the x = 0
// heat identity with t in place of t pi^2. Self-dual at t = pi.
DualEvaluation theta_transform_check(double t, int n,
                                     const lattice::TruncationBudget& budget);

// 2 sum_{k=0..terms} (1+k^2)^{-1}  vs  pi (1+e^{-2 pi})/(1-e^{-2 pi}) + 1,
// with the certified power tail bound on the truncated side.
DualEvaluation corollary_3_5_check(int terms = 10000);

}  // namespace psflab::engine
