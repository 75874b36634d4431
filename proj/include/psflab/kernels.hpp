#pragma once
// Data-parallel reduction kernels with runtime backend selection.
//
// The scalar implementations are the reference; the AVX2 variants must agree
// with them to a few ulp per element and are only selected when the CPU
// supports AVX2+FMA. Selection order: force_backend() > PSFLAB_KERNELS
// environment variable ("scalar" | "avx2" | "auto") > auto-detect.
// Reductions are deterministic for a fixed backend: fixed lane count,
// per-lane compensation, ordered merge.

#include <complex>
#include <span>

namespace psflab::kernels {

enum class Backend { scalar, avx2 };

// out[i] = exp(x[i]); out may alias x. Sizes must match.
void exp_map(std::span<const double> x, std::span<double> out);

// sum_i exp(x[i]), compensated.
double exp_sum(std::span<const double> x);

// sum_i w[i] * exp(x[i]), compensated. Sizes must match.
double exp_dot(std::span<const double> w, std::span<const double> x);

// sum_i a[i] * b[i] (complex, no conjugation), compensated.
std::complex<double> cplx_dot(std::span<const std::complex<double>> a,
                              std::span<const std::complex<double>> b);

Backend active_backend();
const char* backend_name(Backend b);

// Overrides auto-detection (tests, benchmarking). Requesting avx2 on a CPU
// without it throws std::runtime_error.
void force_backend(Backend b);
void clear_forced_backend();

bool cpu_has_avx2();

}  // namespace psflab::kernels
