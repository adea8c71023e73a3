#include <cmath>

#include "suropt/kernels.hpp"
#include "kernels/exp_core.hpp"

// Reference backend. Compiled with -ffp-contract=off so the written
// operation sequence is exactly what executes.

namespace suropt::kernels::scalar {

double sum(const double* x, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += x[i];
    s1 += x[i + 1];
    s2 += x[i + 2];
    s3 += x[i + 3];
  }
  double s[4] = {s0, s1, s2, s3};
  for (; i < n; ++i) s[i & 3] += x[i];
  return (s[0] + s[1]) + (s[2] + s[3]);
}

double dot(const double* x, const double* y, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 = std::fma(x[i], y[i], s0);
    s1 = std::fma(x[i + 1], y[i + 1], s1);
    s2 = std::fma(x[i + 2], y[i + 2], s2);
    s3 = std::fma(x[i + 3], y[i + 3], s3);
  }
  double s[4] = {s0, s1, s2, s3};
  for (; i < n; ++i) s[i & 3] = std::fma(x[i], y[i], s[i & 3]);
  return (s[0] + s[1]) + (s[2] + s[3]);
}

void axpy(double* y, const double* x, double a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = std::fma(a, x[i], y[i]);
}

void exp_batch(double* dst, const double* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = detail::exp_core(src[i]);
}

double exp_sum(const double* x, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += detail::exp_core(x[i]);
    s1 += detail::exp_core(x[i + 1]);
    s2 += detail::exp_core(x[i + 2]);
    s3 += detail::exp_core(x[i + 3]);
  }
  double s[4] = {s0, s1, s2, s3};
  for (; i < n; ++i) s[i & 3] += detail::exp_core(x[i]);
  return (s[0] + s[1]) + (s[2] + s[3]);
}

}  // namespace suropt::kernels::scalar
