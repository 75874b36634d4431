#pragma once
// Integer-lattice shells, compensated accumulation, and certified upper
// bounds on the tails of the three decay families the summation engine
// works with (gaussian, exponential, power law).

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace psflab::lattice {

// All k in Z^dim with sup norm |k|_inf == radius, flattened row-major in
// lexicographic order. radius 0 is the single origin point.
class Shell {
public:
  Shell(int dim, int radius, std::vector<std::int32_t> flat);

  int dim() const { return dim_; }
  int radius() const { return radius_; }
  std::size_t size() const { return flat_.size() / static_cast<std::size_t>(dim_); }
  std::span<const std::int32_t> operator[](std::size_t i) const {
    return {flat_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }
  std::span<const std::int32_t> flat() const { return flat_; }

private:
  int dim_;
  int radius_;
  std::vector<std::int32_t> flat_;
};

// Deterministic enumeration; throws std::invalid_argument on dim < 1 or
// radius < 0. Cost is linear in the number of emitted points.
Shell enumerate_shell(int dim, int radius);

// (2r+1)^dim - (2r-1)^dim for r >= 1, and 1 for r == 0.
std::int64_t shell_point_count(int dim, int radius);

struct TruncationBudget {
  int max_shell = 400;
  double target_abs_tol = 1e-12;
  std::int64_t max_terms = 4'000'000;

  void validate() const;  // throws std::invalid_argument on nonsensical values
};

struct AccumulationResult {
  std::complex<double> value{0.0, 0.0};
  double compensation_residual = 0.0;  // |running Neumaier correction|
  std::int64_t terms_used = 0;
};

// Neumaier-compensated complex accumulator. result() folds the correction
// into the value and throws std::range_error if the sum overflowed.
class Accumulator {
public:
  void add(std::complex<double> term);
  AccumulationResult result() const;
  std::int64_t terms() const { return terms_; }

private:
  double sr_ = 0.0, si_ = 0.0;  // running sums
  double cr_ = 0.0, ci_ = 0.0;  // corrections
  std::int64_t terms_ = 0;
};

AccumulationResult accumulate(std::span<const std::complex<double>> terms);

// Upper bounds on sum over {k in Z^dim : |k|_inf > shell} of the given
// radial decay profile, uniform over evaluation offsets of sup norm
// <= margin. All three are rigorous over-estimates, monotone nonincreasing
// in `shell`, and return +inf while shell+1 <= margin (no usable bound yet).
//
//   gaussian_tail_bound: terms exp(-a * d(k)^2),      a > 0
//   exp_tail_bound:      terms exp(-b * d(k)),        b > 0
//   power_tail_bound:    terms (d(k)^2 + t^2)^(-p/2), p > dim, t >= 0
//
// where d(k) >= |k|_inf - margin is the distance relevant to the decay.
// Derivations are documented at the definitions.
double gaussian_tail_bound(double a, int shell, int dim, double margin = 0.0);
double exp_tail_bound(double b, int shell, int dim, double margin = 0.0);
double power_tail_bound(double p, double t, int shell, int dim, double margin = 0.0);

}  // namespace psflab::lattice
