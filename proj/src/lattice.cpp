#include "psflab/lattice.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace psflab::lattice {

namespace {

void check_dim_radius(int dim, int radius) {
  if (dim < 1) throw std::invalid_argument("shell: dim must be >= 1");
  if (radius < 0) throw std::invalid_argument("shell: radius must be >= 0");
}

// Emits, in lexicographic order, every point of [-r, r]^dim whose sup norm
// is exactly r. `need` tracks whether some not-yet-fixed coordinate still has
// to hit +-r; the last coordinate is then pinned directly, so every visited
// leaf emits a point and the walk is linear in the output size.
void emit_shell(int dim, int r, int pos, bool need, std::vector<std::int32_t>& pt,
                std::vector<std::int32_t>& flat) {
  if (pos == dim) {
    flat.insert(flat.end(), pt.begin(), pt.end());
    return;
  }
  if (need && pos == dim - 1) {
    pt[pos] = -r;
    flat.insert(flat.end(), pt.begin(), pt.end());
    if (r != 0) {
      pt[pos] = r;
      flat.insert(flat.end(), pt.begin(), pt.end());
    }
    return;
  }
  for (int v = -r; v <= r; ++v) {
    pt[pos] = v;
    emit_shell(dim, r, pos + 1, need && std::abs(v) != r, pt, flat);
  }
}

}  // namespace

Shell::Shell(int dim, int radius, std::vector<std::int32_t> flat)
    : dim_(dim), radius_(radius), flat_(std::move(flat)) {}

Shell enumerate_shell(int dim, int radius) {
  check_dim_radius(dim, radius);
  std::vector<std::int32_t> flat;
  flat.reserve(static_cast<std::size_t>(shell_point_count(dim, radius)) *
               static_cast<std::size_t>(dim));
  std::vector<std::int32_t> pt(static_cast<std::size_t>(dim), 0);
  emit_shell(dim, radius, 0, true, pt, flat);
  return Shell(dim, radius, std::move(flat));
}

std::int64_t shell_point_count(int dim, int radius) {
  check_dim_radius(dim, radius);
  if (radius == 0) return 1;
  auto ipow = [](std::int64_t b, int e) {
    std::int64_t out = 1;
    for (int i = 0; i < e; ++i) {
      if (__builtin_mul_overflow(out, b, &out))
        throw std::overflow_error("shell_point_count overflow");
    }
    return out;
  };
  return ipow(2 * static_cast<std::int64_t>(radius) + 1, dim) -
         ipow(2 * static_cast<std::int64_t>(radius) - 1, dim);
}

void TruncationBudget::validate() const {
  if (max_shell < 0) throw std::invalid_argument("budget: max_shell must be >= 0");
  if (!(target_abs_tol > 0.0))
    throw std::invalid_argument("budget: target_abs_tol must be > 0");
  if (max_terms < 1) throw std::invalid_argument("budget: max_terms must be >= 1");
}

namespace {
inline void neumaier_step(double& s, double& c, double x) {
  const double t = s + x;
  if (std::abs(s) >= std::abs(x))
    c += (s - t) + x;
  else
    c += (x - t) + s;
  s = t;
}
}  // namespace

void Accumulator::add(std::complex<double> term) {
  neumaier_step(sr_, cr_, term.real());
  neumaier_step(si_, ci_, term.imag());
  ++terms_;
}

AccumulationResult Accumulator::result() const {
  AccumulationResult r;
  r.value = {sr_ + cr_, si_ + ci_};
  r.compensation_residual = std::hypot(cr_, ci_);
  r.terms_used = terms_;
  if (!std::isfinite(r.value.real()) || !std::isfinite(r.value.imag()))
    throw std::range_error("accumulate: sum overflowed");
  return r;
}

AccumulationResult accumulate(std::span<const std::complex<double>> terms) {
  Accumulator acc;
  for (const auto& t : terms) acc.add(t);
  return acc.result();
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_tail_args(int shell, int dim, double margin) {
  if (dim < 1) throw std::invalid_argument("tail bound: dim must be >= 1");
  if (shell < 0) throw std::invalid_argument("tail bound: shell must be >= 0");
  if (!(margin >= 0.0)) throw std::invalid_argument("tail bound: margin must be >= 0");
}

// N_dim(r) = #{k : |k|_inf = r} = (2r+1)^dim - (2r-1)^dim, as a double
// (exact for the ranges in play).
double surface_count(int dim, std::int64_t r) {
  if (r == 0) return 1.0;
  return static_cast<double>(shell_point_count(dim, static_cast<int>(r)));
}

}  // namespace

// Tail of the product weight Prod_i w(|k_i|), w(u) = exp(-a max(u-m, 0)^2),
// over the complement of the box |k|_inf <= R. The weights factor, so the
// complement sum is exactly B^n - b_R^n with B the full one-dimensional sum
// and b_R its box part (computed term by term). B is bracketed from above by
// b_R + S with the geometric majorant
//   S = 2 e^{-a d^2} / (1 - e^{-2 a d}),  d = R+1-m > 0,
// valid because the term ratio e^{-a((u+1-m)^2-(u-m)^2)} = e^{-a(2(u-m)+1)}
// is <= e^{-2ad} for u >= R+1. Thus tail <= (b_R+S)^n - b_R^n. A running
// minimum over radii <= R keeps the bound nonincreasing in R (each earlier
// value also dominates the tail at R).
double gaussian_tail_bound(double a, int shell, int dim, double margin) {
  check_tail_args(shell, dim, margin);
  if (!(a > 0.0)) throw std::domain_error("gaussian_tail_bound: need a > 0");
  if (static_cast<double>(shell) + 1.0 <= margin) return kInf;

  double box = 0.0;  // b_r, grown incrementally
  double best = kInf;
  for (int r = 0; r <= shell; ++r) {
    const double u = std::max(static_cast<double>(r) - margin, 0.0);
    box += (r == 0 ? 1.0 : 2.0) * std::exp(-a * u * u);
    const double d = static_cast<double>(r) + 1.0 - margin;
    if (d <= 0.0) continue;
    const double s = 2.0 * std::exp(-a * d * d) / -std::expm1(-2.0 * a * d);
    // (box+s)^dim - box^dim, stably
    const double raw = std::pow(box, dim) * std::expm1(dim * std::log1p(s / box));
    best = std::min(best, raw);
  }
  return best;
}

// Tail of Sum_{|k|_inf > R} e^{-b (|k|_inf - m)} = Sum_{r > R} N(r) e^{-b(r-m)}
// with N(r) = surface_count (a degree dim-1 polynomial in r for r >= 1),
// evaluated exactly via Newton's forward-difference form of the polynomial
// against the geometric series:
//   Sum_{r >= A} p(r) x^r = x^A Sum_{s=0}^{deg} (Delta^s p)(A) x^s / (1-x)^{s+1}.
// For r < m the per-term majorant e^{-b(r-m)} >= 1 still dominates
// e^{-b max(r-m,0)}, so the formula stays an upper bound; +inf is returned
// below the margin only to keep the three families' contracts uniform.
double exp_tail_bound(double b, int shell, int dim, double margin) {
  check_tail_args(shell, dim, margin);
  if (!(b > 0.0)) throw std::domain_error("exp_tail_bound: need b > 0");
  if (static_cast<double>(shell) + 1.0 <= margin) return kInf;

  const std::int64_t a0 = static_cast<std::int64_t>(shell) + 1;
  // forward differences of N at r = a0 .. a0+dim-1 (degree dim-1)
  std::vector<double> diff(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) diff[static_cast<std::size_t>(i)] = surface_count(dim, a0 + i);
  for (int lvl = 1; lvl < dim; ++lvl)
    for (int i = dim - 1; i >= lvl; --i)
      diff[static_cast<std::size_t>(i)] -= diff[static_cast<std::size_t>(i - 1)];

  const double x = std::exp(-b);
  const double one_minus_x = -std::expm1(-b);
  double sum = 0.0;
  double xpow = 1.0;          // x^s
  double denom = one_minus_x; // (1-x)^{s+1}
  for (int s = 0; s < dim; ++s) {
    sum += diff[static_cast<std::size_t>(s)] * xpow / denom;
    xpow *= x;
    denom *= one_minus_x;
  }
  return std::exp(-b * (static_cast<double>(a0) - margin)) * sum;
}

// Tail of Sum_{|k|_inf > R} (max(|k|_inf - m, 0)^2 + t^2)^{-p/2}
//   <= Sum_{r > R} N(r) (r-m)^{-p}            (drop t, need r > m)
//   <= Int_R^inf 2 dim (2x+1)^{dim-1} (x-m)^{-p} dx
// (N(r) <= 2 dim (2r+1)^{dim-1} by the mean value theorem; the integrand is
// decreasing on (m, inf) since p > dim-1, so the sum over r >= R+1 is below
// the integral from R). Expanding (2x+1)^{dim-1} = Sum_j C(dim-1, j) (2(x-m))^j
// (2m+1)^{dim-1-j} and integrating termwise:
//   bound = 2 dim Sum_j C(dim-1,j) 2^j (2m+1)^{dim-1-j} (R-m)^{j-p+1} / (p-j-1),
// each exponent j-p+1 < 0 because p > dim >= j+1. Requires p > dim.
double power_tail_bound(double p, double t, int shell, int dim, double margin) {
  check_tail_args(shell, dim, margin);
  if (!(t >= 0.0)) throw std::invalid_argument("power_tail_bound: need t >= 0");
  if (!(p > static_cast<double>(dim)))
    throw std::domain_error("power_tail_bound: need decay p > dim");
  const double rm = static_cast<double>(shell) - margin;
  if (rm <= 0.0) return kInf;

  double binom = 1.0;  // C(dim-1, j)
  double pow2 = 1.0;   // 2^j
  double sum = 0.0;
  for (int j = 0; j <= dim - 1; ++j) {
    const double term = binom * pow2 * std::pow(2.0 * margin + 1.0, dim - 1 - j) *
                        std::pow(rm, j - p + 1.0) / (p - j - 1.0);
    sum += term;
    binom *= static_cast<double>(dim - 1 - j) / static_cast<double>(j + 1);
    pow2 *= 2.0;
  }
  return 2.0 * dim * sum;
}

}  // namespace psflab::lattice
