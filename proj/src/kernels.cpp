#include "psflab/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels_impl.hpp"

namespace psflab::kernels {

namespace {

bool detect_avx2() {
#if defined(PSFLAB_CAN_COMPILE_AVX2) && (defined(__x86_64__) || defined(__i386__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const detail::Vtable* table_for(Backend b) {
#ifdef PSFLAB_CAN_COMPILE_AVX2
  if (b == Backend::avx2) return &detail::avx2_vtable;
#endif
  (void)b;
  return &detail::scalar_vtable;
}

Backend env_or_auto() {
  if (const char* env = std::getenv("PSFLAB_KERNELS")) {
    const std::string v(env);
    if (v == "scalar") return Backend::scalar;
    if (v == "avx2") {
      if (!detect_avx2())
        throw std::runtime_error("PSFLAB_KERNELS=avx2 but CPU/build lacks AVX2+FMA");
      return Backend::avx2;
    }
    if (!v.empty() && v != "auto")
      throw std::runtime_error("PSFLAB_KERNELS must be scalar|avx2|auto");
  }
  return detect_avx2() ? Backend::avx2 : Backend::scalar;
}

std::atomic<int> g_forced{-1};  // -1: not forced

Backend current() {
  const int f = g_forced.load(std::memory_order_relaxed);
  if (f >= 0) return static_cast<Backend>(f);
  static const Backend auto_choice = env_or_auto();
  return auto_choice;
}

}  // namespace

bool cpu_has_avx2() { return detect_avx2(); }

Backend active_backend() { return current(); }

const char* backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

void force_backend(Backend b) {
  if (b == Backend::avx2 && !detect_avx2())
    throw std::runtime_error("force_backend: CPU/build lacks AVX2+FMA");
  g_forced.store(static_cast<int>(b), std::memory_order_relaxed);
}

void clear_forced_backend() { g_forced.store(-1, std::memory_order_relaxed); }

void exp_map(std::span<const double> x, std::span<double> out) {
  if (x.size() != out.size()) throw std::invalid_argument("exp_map: size mismatch");
  table_for(current())->exp_map(x.data(), out.data(), x.size());
}

double exp_sum(std::span<const double> x) {
  return table_for(current())->exp_sum(x.data(), x.size());
}

double exp_dot(std::span<const double> w, std::span<const double> x) {
  if (w.size() != x.size()) throw std::invalid_argument("exp_dot: size mismatch");
  return table_for(current())->exp_dot(w.data(), x.data(), x.size());
}

std::complex<double> cplx_dot(std::span<const std::complex<double>> a,
                              std::span<const std::complex<double>> b) {
  if (a.size() != b.size()) throw std::invalid_argument("cplx_dot: size mismatch");
  double re = 0.0, im = 0.0;
  table_for(current())->cplx_dot(reinterpret_cast<const double*>(a.data()),
                                 reinterpret_cast<const double*>(b.data()),
                                 a.size(), &re, &im);
  return {re, im};
}

}  // namespace psflab::kernels
