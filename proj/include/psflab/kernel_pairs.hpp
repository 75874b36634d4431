#pragma once
// Dual kernel pairs: a frequency-side series sum_k c(k) e^{i v(k).x} and a
// spatial-side series sum_k K(x - P k) that sum to the same function, with
// certified tail bounds on both sides. The engine consumes this interface;
// concrete pairs: heat/Gauss, exponential/Cauchy-Poisson, Bessel-potential,
// and Gaussian-symbol pairs.

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "psflab/lattice.hpp"
#include "psflab/schwartz.hpp"

namespace psflab::pairs {

enum class Side { frequency, spatial };
const char* side_name(Side s);

class DualKernelPair {
public:
  virtual ~DualKernelPair() = default;

  int dim() const { return dim_; }
  // Spacing of the spatial translation lattice (frequency lattice is Z^dim).
  double period() const { return period_; }
  const std::string& label() const { return label_; }
  const std::vector<std::pair<std::string, double>>& params() const { return params_; }
  // Both series converge absolutely pointwise; when false the identity only
  // holds weakly and evaluate_identity refuses the pair.
  bool pointwise() const { return pointwise_; }

  // -- frequency side: term(k) = freq_coeff(k) * e^{i freq_wavevector(k).x}
  virtual std::complex<double> freq_coeff(std::span<const std::int32_t> k) const = 0;
  virtual void freq_wavevector(std::span<const std::int32_t> k,
                               std::span<double> v) const;  // default 2 pi k
  // Upper bound on sum of |freq_coeff| over |k|_inf > shell (x-independent).
  virtual double freq_tail(int shell) const = 0;
  // sup_k |freq_coeff(k)| (all shipped pairs have bounded coefficients).
  virtual double freq_coeff_sup() const { return 1.0; }

  // -- spatial side: term(k) = spatial_kernel(x - period * k)
  virtual std::complex<double> spatial_kernel(std::span<const double> y) const = 0;
  std::complex<double> spatial_term(std::span<const double> x,
                                    std::span<const std::int32_t> k) const;
  // Upper bound on sum of |spatial_term(x, k)| over |k|_inf > shell; valid
  // for the given x (callers pass x already reduced to [-P/2, P/2)^dim).
  virtual double spatial_tail(int shell, std::span<const double> x) const = 0;

  // Shell-level partial sums. Defaults loop the per-term virtuals; concrete
  // pairs override where the batched exp kernels pay off.
  virtual std::complex<double> freq_shell_sum(const lattice::Shell& s,
                                              std::span<const double> x) const;
  virtual std::complex<double> spatial_shell_sum(const lattice::Shell& s,
                                                 std::span<const double> x) const;

protected:
  DualKernelPair(int dim, double period, bool pointwise, std::string label,
                 std::vector<std::pair<std::string, double>> params);

private:
  int dim_;
  double period_;
  bool pointwise_;
  std::string label_;
  std::vector<std::pair<std::string, double>> params_;
};

// sum_k e^{-t pi^2 |k|^2} e^{2 pi i k.x}  =  (t pi)^{-n/2} sum_k e^{-|x-k|^2/t},
// t > 0. Self-dual scaling at t = 1/pi.
std::unique_ptr<DualKernelPair> heat_pair(double t, int n);

// sum_k e^{-2 pi t |k|} e^{2 pi i k.x}  =  c_n t sum_k (|x-k|^2 + t^2)^{-(n+1)/2},
// t > 0, c_n = normalize_cn(n).
std::unique_ptr<DualKernelPair> poisson_pair(double t, int n);

// sum_k (1 + |2 pi k|^2)^{alpha/2} e^{2 pi i k.x}
//   = (2 pi)^{-n/2} sum_k bessel_hat(alpha, n, |x-k|),  alpha < 0.
// Pointwise only for alpha < -n; otherwise weak-mode (see psflab/weak.hpp).
std::unique_ptr<DualKernelPair> bessel_pair(double alpha, int n);

// sum_k tau(k) e^{-i k.x}  =  (2 pi)^{n/2} sum_k F[tau](x - 2 pi k),
// spatial period 2 pi.
std::unique_ptr<DualKernelPair> symbol_pair(const schwartz::TestFunction& tau);

// Gamma((n+1)/2) / pi^{(n+1)/2}.
double normalize_cn(int n);

// Radial profile of the Fourier transform of (1 + |xi|^2)^{alpha/2}:
//   bessel_hat(alpha, n, r) =
//     2^{-n/2} / Gamma(-alpha/2) * Int_0^inf t^{(-alpha-n)/2 - 1} e^{-t - r^2/(4t)} dt.
// Requires alpha < 0; r = 0 requires alpha < -n (else the profile diverges
// there and std::domain_error is thrown). Absolute accuracy ~1e-11.
double bessel_hat(double alpha, int n, double r);

// Exact value at the special order alpha = 1-n (n >= 2):
//   2^{-n/2} * 2 sqrt(pi) / Gamma((n-1)/2) * e^{-r} / r.
double bessel_hat_closed_form(int n, double r);

// e^{-r/2} envelope constant: bessel_hat(alpha, n, r) <= C e^{-r/2} for
// alpha < -n, C = 2^{-alpha/2 - n} Gamma((-alpha-n)/2) / Gamma(-alpha/2).
double bessel_hat_envelope(double alpha, int n);

}  // namespace psflab::pairs
