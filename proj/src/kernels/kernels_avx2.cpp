#include <stdexcept>

#include "suropt/kernels.hpp"
#include "kernels/exp_core.hpp"

// AVX2+FMA backend. Mirrors the scalar reference lane for lane: same stripe
// reduction order, same exp operation sequence, so results are bit-identical.

#if defined(__x86_64__) && defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <cmath>
#include <limits>

namespace suropt::kernels::avx2 {

extern const bool kCompiled = true;

namespace {

inline __m256d exp4(__m256d x) {
  using namespace suropt::kernels::detail;
  const __m256d hi = _mm256_set1_pd(kExpHi);
  const __m256d lo = _mm256_set1_pd(kExpLo);
  const __m256d nan_mask = _mm256_cmp_pd(x, x, _CMP_UNORD_Q);
  const __m256d hi_mask = _mm256_cmp_pd(x, hi, _CMP_GT_OQ);
  const __m256d lo_mask = _mm256_cmp_pd(x, lo, _CMP_LT_OQ);
  const __m256d xc = _mm256_min_pd(_mm256_max_pd(x, lo), hi);

  const __m256d n = _mm256_round_pd(_mm256_mul_pd(xc, _mm256_set1_pd(kLog2E)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, _mm256_set1_pd(kLn2Hi), xc);
  r = _mm256_fnmadd_pd(n, _mm256_set1_pd(kLn2Lo), r);
  const __m256d r2 = _mm256_mul_pd(r, r);

  __m256d p = _mm256_fmadd_pd(_mm256_set1_pd(kExpP0), r2, _mm256_set1_pd(kExpP1));
  p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(kExpP2));
  p = _mm256_mul_pd(p, r);
  __m256d q = _mm256_fmadd_pd(_mm256_set1_pd(kExpQ0), r2, _mm256_set1_pd(kExpQ1));
  q = _mm256_fmadd_pd(q, r2, _mm256_set1_pd(kExpQ2));
  q = _mm256_fmadd_pd(q, r2, _mm256_set1_pd(kExpQ3));
  const __m256d e = _mm256_add_pd(
      _mm256_set1_pd(1.0),
      _mm256_div_pd(_mm256_mul_pd(_mm256_set1_pd(2.0), p), _mm256_sub_pd(q, p)));

  const __m128i ni = _mm256_cvtpd_epi32(n);
  const __m128i n1 = _mm_srai_epi32(ni, 1);
  const __m128i n2 = _mm_sub_epi32(ni, n1);
  const __m256i bias = _mm256_set1_epi64x(1023);
  const __m256d f1 = _mm256_castsi256_pd(
      _mm256_slli_epi64(_mm256_add_epi64(_mm256_cvtepi32_epi64(n1), bias), 52));
  const __m256d f2 = _mm256_castsi256_pd(
      _mm256_slli_epi64(_mm256_add_epi64(_mm256_cvtepi32_epi64(n2), bias), 52));
  __m256d res = _mm256_mul_pd(_mm256_mul_pd(e, f1), f2);

  res = _mm256_blendv_pd(res, _mm256_set1_pd(std::numeric_limits<double>::infinity()),
                         hi_mask);
  res = _mm256_blendv_pd(res, _mm256_setzero_pd(), lo_mask);
  res = _mm256_blendv_pd(res, x, nan_mask);
  return res;
}

}  // namespace

double sum(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  alignas(32) double s[4];
  _mm256_store_pd(s, acc);
  for (; i < n; ++i) s[i & 3] += x[i];
  return (s[0] + s[1]) + (s[2] + s[3]);
}

double dot(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  }
  alignas(32) double s[4];
  _mm256_store_pd(s, acc);
  for (; i < n; ++i) s[i & 3] = std::fma(x[i], y[i], s[i & 3]);
  return (s[0] + s[1]) + (s[2] + s[3]);
}

void axpy(double* y, const double* x, double a, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i),
                                            _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] = std::fma(a, x[i], y[i]);
}

void exp_batch(double* dst, const double* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(dst + i, exp4(_mm256_loadu_pd(src + i)));
  for (; i < n; ++i) dst[i] = detail::exp_core(src[i]);
}

double exp_sum(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, exp4(_mm256_loadu_pd(x + i)));
  alignas(32) double s[4];
  _mm256_store_pd(s, acc);
  for (; i < n; ++i) s[i & 3] += detail::exp_core(x[i]);
  return (s[0] + s[1]) + (s[2] + s[3]);
}

}  // namespace suropt::kernels::avx2

#else  // no AVX2 in this build

namespace suropt::kernels::avx2 {

extern const bool kCompiled = false;

namespace {
[[noreturn]] void unavailable() {
  throw std::logic_error("AVX2 kernel backend not compiled in");
}
}  // namespace

double sum(const double*, std::size_t) { unavailable(); }
double dot(const double*, const double*, std::size_t) { unavailable(); }
void axpy(double*, const double*, double, std::size_t) { unavailable(); }
void exp_batch(double*, const double*, std::size_t) { unavailable(); }
double exp_sum(const double*, std::size_t) { unavailable(); }

}  // namespace suropt::kernels::avx2

#endif
