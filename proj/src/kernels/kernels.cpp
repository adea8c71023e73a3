#include "suropt/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace suropt::kernels {

namespace avx2 {
extern const bool kCompiled;
}

bool avx2::available() {
#if defined(__x86_64__) || defined(__i386__)
  return kCompiled && __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

struct Table {
  Backend backend;
  double (*sum)(const double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  void (*axpy)(double*, const double*, double, std::size_t);
  void (*exp_batch)(double*, const double*, std::size_t);
  double (*exp_sum)(const double*, std::size_t);
};

Table make_table() {
  const char* env = std::getenv("SUROPT_SIMD");
  const std::string_view mode = env ? env : "auto";
  if (mode != "scalar" && avx2::available()) {
    return {Backend::avx2, avx2::sum, avx2::dot, avx2::axpy, avx2::exp_batch,
            avx2::exp_sum};
  }
  return {Backend::scalar, scalar::sum, scalar::dot, scalar::axpy,
          scalar::exp_batch, scalar::exp_sum};
}

const Table& table() {
  static const Table t = make_table();
  return t;
}

}  // namespace

Backend active_backend() { return table().backend; }

const char* backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

double sum(const double* x, std::size_t n) { return table().sum(x, n); }

double dot(const double* x, const double* y, std::size_t n) {
  return table().dot(x, y, n);
}

void axpy(double* y, const double* x, double a, std::size_t n) {
  table().axpy(y, x, a, n);
}

void exp_batch(double* dst, const double* src, std::size_t n) {
  table().exp_batch(dst, src, n);
}

double exp_sum(const double* x, std::size_t n) { return table().exp_sum(x, n); }

}  // namespace suropt::kernels
