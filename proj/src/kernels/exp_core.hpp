#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

// Shared exp algorithm for all kernel backends. The operation sequence
// (fma/add/mul/div order, range reduction, two-step 2^n scaling) is fixed;
// a vector backend must mirror it lane for lane so that every backend
// produces bit-identical results. Accuracy is ~1-2 ulp against libm.

namespace suropt::kernels::detail {

inline constexpr double kExpHi = 709.782712893383996732;   // above: overflow to inf
inline constexpr double kExpLo = -745.133219101941108420;  // below: underflow to 0

inline constexpr double kLog2E = 1.44269504088896340736;
inline constexpr double kLn2Hi = 6.93145751953125e-1;
inline constexpr double kLn2Lo = 1.42860682030941723212e-6;

// Rational approximation of exp(r) on |r| <= ln2/2:
//   exp(r) = 1 + 2*r*P(r^2) / (Q(r^2) - r*P(r^2))
inline constexpr double kExpP0 = 1.26177193074810590878e-4;
inline constexpr double kExpP1 = 3.02994407707441961300e-2;
inline constexpr double kExpP2 = 9.99999999999999999910e-1;
inline constexpr double kExpQ0 = 3.00198505138664455042e-6;
inline constexpr double kExpQ1 = 2.52448340349684104192e-3;
inline constexpr double kExpQ2 = 2.27265548208155028766e-1;
inline constexpr double kExpQ3 = 2.00000000000000000005e0;

// 2^n as a double via exponent bits; requires -538 <= n <= 538.
inline double pow2i(int n) {
  return std::bit_cast<double>(static_cast<std::uint64_t>(n + 1023) << 52);
}

inline double exp_core(double x) {
  if (std::isnan(x)) return x;
  if (x > kExpHi) return std::numeric_limits<double>::infinity();
  if (x < kExpLo) return 0.0;
  const double n = std::nearbyint(x * kLog2E);
  double r = std::fma(-n, kLn2Hi, x);
  r = std::fma(-n, kLn2Lo, r);
  const double r2 = r * r;
  const double p = std::fma(std::fma(kExpP0, r2, kExpP1), r2, kExpP2) * r;
  const double q =
      std::fma(std::fma(std::fma(kExpQ0, r2, kExpQ1), r2, kExpQ2), r2, kExpQ3);
  const double e = 1.0 + (2.0 * p) / (q - p);
  // Split 2^n into two factors so the n = 1024 / n = -1075 extremes stay
  // representable; the second multiply may round into a subnormal.
  const int ni = static_cast<int>(n);
  const int n1 = ni >> 1;
  const int n2 = ni - n1;
  return (e * pow2i(n1)) * pow2i(n2);
}

}  // namespace suropt::kernels::detail
