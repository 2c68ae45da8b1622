#pragma once

// Vectorizable inner-loop primitives used by the game, learning and oracle
// layers. Every kernel has a scalar reference implementation and, on x86-64
// hardware with AVX2+FMA, a vectorized variant. The backend is picked once at
// startup (override with set_backend() or the COGPOW_BACKEND environment
// variable: "scalar" or "avx2"). Scalar and SIMD variants are
// equivalence-tested against each other in tests/test_kernels.cpp.

#include <cstddef>
#include <string_view>
#include <vector>

namespace cogpow::kern {

enum class Backend { Scalar, Avx2 };

Backend active_backend();
bool set_backend(Backend b);  // false if b is unsupported on this CPU
std::vector<Backend> supported_backends();
std::string_view backend_name(Backend b);

// sum of x[0..n)
double sum(const double* x, std::size_t n);

// max of x[0..n); n must be >= 1
double max_value(const double* x, std::size_t n);

// dot product of a and b
double dot(const double* a, const double* b, std::size_t n);

// acc[i] += a[i] * b[i]
void mul_acc(double* acc, const double* a, const double* b, std::size_t n);

// y[i] += alpha * x[i]
void axpy(double alpha, const double* x, double* y, std::size_t n);

// out[i] = exp(x[i]); out may alias x
void exp(const double* x, double* out, std::size_t n);

// out[i] = log(x[i]); out may alias x
void log(const double* x, double* out, std::size_t n);

// sum of log(c + x[i])
double sum_log_offset(const double* x, double c, std::size_t n);

namespace detail {

struct Table {
  double (*sum)(const double*, std::size_t);
  double (*max_value)(const double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  void (*mul_acc)(double*, const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*exp_v)(const double*, double*, std::size_t);
  void (*log_v)(const double*, double*, std::size_t);
  double (*sum_log_offset)(const double*, double, std::size_t);
};

extern const Table scalar_table;
const Table* avx2_table();  // nullptr when AVX2+FMA is unavailable

}  // namespace detail

}  // namespace cogpow::kern
