#pragma once
// Backend table shared by the dispatcher and the per-ISA translation units.
// cplx_dot works on interleaved (re, im) storage, n = number of complex
// elements.

#include <cstddef>

namespace psflab::kernels::detail {

struct Vtable {
  void (*exp_map)(const double* x, double* out, std::size_t n);
  double (*exp_sum)(const double* x, std::size_t n);
  double (*exp_dot)(const double* w, const double* x, std::size_t n);
  void (*cplx_dot)(const double* a, const double* b, std::size_t n,
                   double* out_re, double* out_im);
};

extern const Vtable scalar_vtable;
#ifdef PSFLAB_CAN_COMPILE_AVX2
extern const Vtable avx2_vtable;
#endif

}  // namespace psflab::kernels::detail
