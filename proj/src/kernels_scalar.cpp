#include "cogpow/kernels.hpp"

#include <cmath>

// Reference kernels. Plain sequential loops, libm elementwise math. These
// define the semantics the SIMD variants are tested against.

namespace cogpow::kern::detail {

namespace {

double sum_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double max_scalar(const double* x, std::size_t n) {
  double m = x[0];
  for (std::size_t i = 1; i < n; ++i)
    if (x[i] > m) m = x[i];
  return m;
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void mul_acc_scalar(double* acc, const double* a, const double* b,
                    std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += a[i] * b[i];
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void exp_scalar(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(x[i]);
}

void log_scalar(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::log(x[i]);
}

double sum_log_offset_scalar(const double* x, double c, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::log(c + x[i]);
  return acc;
}

}  // namespace

const Table scalar_table = {
    sum_scalar,  max_scalar, dot_scalar, mul_acc_scalar,
    axpy_scalar, exp_scalar, log_scalar, sum_log_offset_scalar,
};

}  // namespace cogpow::kern::detail
