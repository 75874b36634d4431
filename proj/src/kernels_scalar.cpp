// Reference backend. The AVX2 variants are tested against these element by
// element and on whole reductions.

#include <cmath>
#include <cstddef>

#include "kernels_impl.hpp"

namespace psflab::kernels::detail {

namespace {

inline void neumaier(double& s, double& c, double x) {
  const double t = s + x;
  if (std::abs(s) >= std::abs(x))
    c += (s - t) + x;
  else
    c += (x - t) + s;
  s = t;
}

void scalar_exp_map(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(x[i]);
}

double scalar_exp_sum(const double* x, std::size_t n) {
  double s = 0.0, c = 0.0;
  for (std::size_t i = 0; i < n; ++i) neumaier(s, c, std::exp(x[i]));
  return s + c;
}

double scalar_exp_dot(const double* w, const double* x, std::size_t n) {
  double s = 0.0, c = 0.0;
  for (std::size_t i = 0; i < n; ++i) neumaier(s, c, w[i] * std::exp(x[i]));
  return s + c;
}

void scalar_cplx_dot(const double* a, const double* b, std::size_t n,
                     double* out_re, double* out_im) {
  double sr = 0.0, cr = 0.0, si = 0.0, ci = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[2 * i], ai = a[2 * i + 1];
    const double br = b[2 * i], bi = b[2 * i + 1];
    neumaier(sr, cr, ar * br - ai * bi);
    neumaier(si, ci, ar * bi + ai * br);
  }
  *out_re = sr + cr;
  *out_im = si + ci;
}

}  // namespace

const Vtable scalar_vtable = {scalar_exp_map, scalar_exp_sum, scalar_exp_dot,
                              scalar_cplx_dot};

}  // namespace psflab::kernels::detail
