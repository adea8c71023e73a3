#pragma once

#include <cstddef>

// Data-parallel inner loops over posterior-draw arrays. Every operation has
// a scalar reference implementation and may have SIMD variants; the fastest
// supported variant is selected once at runtime. All backends produce
// bit-identical results: reductions use a fixed stride-4 stripe order
// (stripe k sums elements with index == k mod 4, combined as
// (s0+s1)+(s2+s3)), and elementwise ops share one fma/exp operation
// sequence. Set SUROPT_SIMD=scalar|avx2|auto to override selection.

namespace suropt::kernels {

enum class Backend { scalar, avx2 };

Backend active_backend();
const char* backend_name(Backend b);

double sum(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);

/// y[i] += a * x[i]
void axpy(double* y, const double* x, double a, std::size_t n);

/// dst[i] = exp(src[i]); dst may alias src.
void exp_batch(double* dst, const double* src, std::size_t n);

/// sum over i of exp(x[i])
double exp_sum(const double* x, std::size_t n);

namespace scalar {
double sum(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
void axpy(double* y, const double* x, double a, std::size_t n);
void exp_batch(double* dst, const double* src, std::size_t n);
double exp_sum(const double* x, std::size_t n);
}  // namespace scalar

namespace avx2 {
/// True when the build has the AVX2 backend and the CPU supports AVX2+FMA.
/// The remaining functions must only be called when this returns true.
bool available();
double sum(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
void axpy(double* y, const double* x, double a, std::size_t n);
void exp_batch(double* dst, const double* src, std::size_t n);
double exp_sum(const double* x, std::size_t n);
}  // namespace avx2

}  // namespace suropt::kernels
