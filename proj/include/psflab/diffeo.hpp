#pragma once
// Warped lattice combs: one-dimensional diffeomorphisms with uniform slope
// bounds, affine maps in dimension <= 3, pushforwards of point masses, and
// the regularized frequency-side evaluation that matches the pushed-forward
// comb weakly.

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "psflab/engine.hpp"
#include "psflab/lattice.hpp"
#include "psflab/schwartz.hpp"
#include "psflab/weak.hpp"

namespace psflab::diffeo {

// Strictly increasing C^1 map with 0 < c1 <= psi' <= c2 (validated on a
// sample grid; derivative cross-checked against central differences).
class Diffeo1D {
public:
  static Diffeo1D make(std::function<double(double)> psi,
                       std::function<double(double)> dpsi,
                       double c1, double c2, std::string name);

  double operator()(double x) const { return psi_(x); }
  double derivative(double x) const { return dpsi_(x); }
  double slope_min() const { return c1_; }
  double slope_max() const { return c2_; }
  double at_zero() const { return psi0_; }
  const std::string& name() const { return name_; }

private:
  Diffeo1D() = default;
  std::function<double(double)> psi_, dpsi_;
  double c1_ = 0.0, c2_ = 0.0, psi0_ = 0.0;
  std::string name_;
};

// Bisection-safeguarded secant within the slope bracket; residual verified
// to 1e-13 * max(1, |y|) or std::runtime_error.
double invert_diffeo(const Diffeo1D& d, double y);

// x -> A x + b with A invertible, n <= 3. Inverse computed exactly enough
// that |A A^{-1} - I|_max <= 1e-12 is enforced at construction.
class AffineMap {
public:
  static AffineMap make(int n, std::span<const double> a_rowmajor,
                        std::span<const double> b, std::string name);

  int dim() const { return n_; }
  const std::string& name() const { return name_; }
  double det() const { return det_; }
  void apply(std::span<const double> x, std::span<double> out) const;
  void apply_inverse(std::span<const double> y, std::span<double> out) const;
  void apply_transpose(std::span<const double> x, std::span<double> out) const;
  std::span<const double> offset() const { return b_; }
  // Rigorous singular value bracket: sigma_min >= 1/|A^{-1}|_F, sigma_max <= |A|_F.
  double sigma_min_lb() const { return sigma_min_lb_; }
  double sigma_max_ub() const { return sigma_max_ub_; }

private:
  AffineMap() = default;
  int n_ = 0;
  std::vector<double> a_, ainv_, b_;
  double det_ = 0.0, sigma_min_lb_ = 0.0, sigma_max_ub_ = 0.0;
  std::string name_;
};

// Smooth bounded factor riding along the warped comb; sup_bound >= sup |value|.
struct Multiplier {
  std::function<std::complex<double>(double)> value;
  double sup_bound = 1.0;
  std::string name = "one";

  static Multiplier one();
  // base + amp * exp(-(x-center)^2 / (2 width^2))
  static Multiplier gaussian_bump(double base, double amp, double center, double width);
};

// < delta_z o psi, f > = f(psi^{-1}(z)) / psi'(psi^{-1}(z)).
std::complex<double> dirac_pushforward(const Diffeo1D& d, double z,
                                       const schwartz::TestFunction& f);
// < delta_z o (Ax+b), f > = |det A|^{-1} f(A^{-1}(z - b)).
std::complex<double> dirac_pushforward(const AffineMap& m, std::span<const double> z,
                                       const schwartz::TestFunction& f);

// Spatial side of the warped identity: sum_k (g/psi')(psi^{-1}(k)) f(psi^{-1}(k)),
// certified gaussian tail.
weak::PairingResult warped_comb_rhs(const Diffeo1D& d, const Multiplier& g,
                                    const schwartz::TestFunction& f,
                                    const lattice::TruncationBudget& budget = {});

// Frequency side: sum_{|k|<=n_trunc} e^{-eps k^2} Int g(x) e^{2 pi i k psi(x)} f(x) dx,
// Richardson-extrapolated over {eps, eps/2, eps/4} (the integrals are
// eps-independent and computed once, on oscillation-matched panels).
// tail_estimate is an error *estimate* (quadrature + extrapolation residual),
// not a certified bound.
weak::PairingResult warped_comb_lhs(const Diffeo1D& d, const Multiplier& g,
                                    const schwartz::TestFunction& f,
                                    double eps = 1e-2, int n_trunc = 16);

// Runs both sides; passed <=> discrepancy <= tol (estimate-based, since the
// frequency side is quadrature + extrapolation, not a certified sum).
engine::DualEvaluation warped_comb_check(const Diffeo1D& d, const Multiplier& g,
                                         const schwartz::TestFunction& f,
                                         double tol, double eps = 1e-2,
                                         int n_trunc = 16,
                                         const lattice::TruncationBudget& budget = {});

// Affine warp of the comb, both sides exact series:
//   sum_k e^{2 pi i k.b} (2 pi)^{n/2} F[f](-2 pi A^T k)  vs
//   |det A|^{-1} sum_k f(A^{-1}(k - b)); certified tails on both sides.
engine::DualEvaluation affine_comb_check(const AffineMap& m,
                                         const schwartz::TestFunction& f,
                                         const lattice::TruncationBudget& budget = {});

}  // namespace psflab::diffeo
