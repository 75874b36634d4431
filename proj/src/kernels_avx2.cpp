// AVX2+FMA backend. Strategy notes:
//  - exp4: Cody-Waite argument reduction against ln 2 (hi/lo split), degree-13
//    Taylor polynomial on |r| <= ln(2)/2, and reconstruction by two half-sized
//    power-of-two scalings so the full double range (gradual underflow
//    included) survives without exponent-field wraparound. Inputs are clamped
//    to [-746, 710] first; NaN propagates through the clamp since maxpd/minpd
//    return the second operand on unordered compares. Observed accuracy vs
//    std::exp is ~2 ulp.
//  - reductions: four independent Neumaier-compensated lanes (branchless
//    compare/blend two-sum), merged in fixed lane order, so results are
//    deterministic run to run.
//  - tails shorter than a vector are padded: with -inf for exp reductions
//    (exp -> 0, a no-op addend) and with zeros for cplx_dot.

#include <immintrin.h>

#include <cstddef>
#include <limits>

#include "kernels_impl.hpp"

namespace psflab::kernels::detail {

namespace {

constexpr double kMagic = 6755399441055744.0;  // 1.5 * 2^52
constexpr long long kMagicBits = 0x4338000000000000LL;

inline __m256d exp4(__m256d x) {
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634074);
  const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
  const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);

  x = _mm256_max_pd(_mm256_set1_pd(-746.0), x);
  x = _mm256_min_pd(_mm256_set1_pd(710.0), x);

  const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, ln2_hi, x);
  r = _mm256_fnmadd_pd(n, ln2_lo, r);

  // Taylor coefficients 1/k!, k = 13 .. 0, Horner with FMA.
  __m256d p = _mm256_set1_pd(1.6059043836821613e-10);
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.08767569878681e-09));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.505210838544172e-08));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.7557319223985893e-07));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.755731922398589e-06));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.48015873015873e-05));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.984126984126984e-04));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.388888888888889e-03));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(8.333333333333333e-03));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(4.1666666666666664e-02));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.6666666666666666e-01));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(5.0e-01));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));

  // 2^n = 2^h1 * 2^h2 with h1 = round(n/2), h2 = n - h1; |h_i| <= 540 keeps
  // both exponent fields in the normal range.
  const __m256d h1 = _mm256_round_pd(_mm256_mul_pd(n, _mm256_set1_pd(0.5)),
                                     _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  const __m256d h2 = _mm256_sub_pd(n, h1);
  const __m256d magic = _mm256_set1_pd(kMagic);
  const __m256i shift = _mm256_set1_epi64x(1023LL - kMagicBits);
  const __m256i b1 = _mm256_slli_epi64(
      _mm256_add_epi64(_mm256_castpd_si256(_mm256_add_pd(h1, magic)), shift), 52);
  const __m256i b2 = _mm256_slli_epi64(
      _mm256_add_epi64(_mm256_castpd_si256(_mm256_add_pd(h2, magic)), shift), 52);

  p = _mm256_mul_pd(p, _mm256_castsi256_pd(b1));
  p = _mm256_mul_pd(p, _mm256_castsi256_pd(b2));
  return p;
}

// Branchless two-sum step: s += x with correction c, per lane.
inline void neumaier4(__m256d& s, __m256d& c, __m256d x) {
  const __m256d t = _mm256_add_pd(s, x);
  const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  const __m256d as = _mm256_and_pd(s, abs_mask);
  const __m256d ax = _mm256_and_pd(x, abs_mask);
  const __m256d swap = _mm256_cmp_pd(as, ax, _CMP_LT_OQ);
  const __m256d big = _mm256_blendv_pd(s, x, swap);
  const __m256d small = _mm256_blendv_pd(x, s, swap);
  c = _mm256_add_pd(c, _mm256_add_pd(_mm256_sub_pd(big, t), small));
  s = t;
}

inline __m256d load_padded(const double* p, std::size_t have, double fill) {
  alignas(32) double buf[4] = {fill, fill, fill, fill};
  for (std::size_t i = 0; i < have; ++i) buf[i] = p[i];
  return _mm256_load_pd(buf);
}

// Folds lane sums + corrections left to right with a scalar Neumaier pass.
inline double merge_lanes(__m256d s, __m256d c) {
  alignas(32) double sv[4], cv[4];
  _mm256_store_pd(sv, s);
  _mm256_store_pd(cv, c);
  double acc = 0.0, corr = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double x = sv[i] + cv[i];
    const double t = acc + x;
    if ((acc >= 0 ? acc : -acc) >= (x >= 0 ? x : -x))
      corr += (acc - t) + x;
    else
      corr += (x - t) + acc;
    acc = t;
  }
  return acc + corr;
}

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void avx2_exp_map(const double* x, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, exp4(_mm256_loadu_pd(x + i)));
  if (i < n) {
    alignas(32) double buf[4];
    _mm256_store_pd(buf, exp4(load_padded(x + i, n - i, kNegInf)));
    for (std::size_t j = 0; i + j < n; ++j) out[i + j] = buf[j];
  }
}

double avx2_exp_sum(const double* x, std::size_t n) {
  __m256d s = _mm256_setzero_pd(), c = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) neumaier4(s, c, exp4(_mm256_loadu_pd(x + i)));
  if (i < n) neumaier4(s, c, exp4(load_padded(x + i, n - i, kNegInf)));
  return merge_lanes(s, c);
}

double avx2_exp_dot(const double* w, const double* x, std::size_t n) {
  __m256d s = _mm256_setzero_pd(), c = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    neumaier4(s, c, _mm256_mul_pd(_mm256_loadu_pd(w + i), exp4(_mm256_loadu_pd(x + i))));
  if (i < n)
    neumaier4(s, c, _mm256_mul_pd(load_padded(w + i, n - i, 0.0),
                                  exp4(load_padded(x + i, n - i, kNegInf))));
  return merge_lanes(s, c);
}

void avx2_cplx_dot(const double* a, const double* b, std::size_t n,
                   double* out_re, double* out_im) {
  __m256d s = _mm256_setzero_pd(), c = _mm256_setzero_pd();
  const std::size_t len = 2 * n;  // doubles
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    const __m256d av = _mm256_loadu_pd(a + i);
    const __m256d bv = _mm256_loadu_pd(b + i);
    const __m256d bre = _mm256_movedup_pd(bv);              // [br0 br0 br1 br1]
    const __m256d bim = _mm256_permute_pd(bv, 0xF);         // [bi0 bi0 bi1 bi1]
    const __m256d asw = _mm256_permute_pd(av, 0x5);         // [ai0 ar0 ai1 ar1]
    const __m256d prod = _mm256_fmaddsub_pd(av, bre, _mm256_mul_pd(asw, bim));
    neumaier4(s, c, prod);  // lanes: [re0 im0 re1 im1]
  }
  if (i < len) {
    const __m256d av = load_padded(a + i, len - i, 0.0);
    const __m256d bv = load_padded(b + i, len - i, 0.0);
    const __m256d bre = _mm256_movedup_pd(bv);
    const __m256d bim = _mm256_permute_pd(bv, 0xF);
    const __m256d asw = _mm256_permute_pd(av, 0x5);
    neumaier4(s, c, _mm256_fmaddsub_pd(av, bre, _mm256_mul_pd(asw, bim)));
  }
  alignas(32) double sv[4], cv[4];
  _mm256_store_pd(sv, s);
  _mm256_store_pd(cv, c);
  // fixed order: complex lane 0 then complex lane 1
  const double re0 = sv[0] + cv[0], re1 = sv[2] + cv[2];
  const double im0 = sv[1] + cv[1], im1 = sv[3] + cv[3];
  *out_re = re0 + re1;
  *out_im = im0 + im1;
}

}  // namespace

const Vtable avx2_vtable = {avx2_exp_map, avx2_exp_sum, avx2_exp_dot, avx2_cplx_dot};

}  // namespace psflab::kernels::detail
