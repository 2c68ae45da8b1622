#include "cogpow/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace cogpow::kern {

namespace {

using detail::Table;

const Table* resolve_default() {
  const Table* avx2 = detail::avx2_table();
  if (const char* env = std::getenv("COGPOW_BACKEND")) {
    if (std::strcmp(env, "scalar") == 0) return &detail::scalar_table;
    if (std::strcmp(env, "avx2") == 0 && avx2) return avx2;
  }
  return avx2 ? avx2 : &detail::scalar_table;
}

const Table*& active_table() {
  static const Table* table = resolve_default();
  return table;
}

}  // namespace

Backend active_backend() {
  return active_table() == &detail::scalar_table ? Backend::Scalar
                                                 : Backend::Avx2;
}

bool set_backend(Backend b) {
  if (b == Backend::Scalar) {
    active_table() = &detail::scalar_table;
    return true;
  }
  if (const Table* t = detail::avx2_table()) {
    active_table() = t;
    return true;
  }
  return false;
}

std::vector<Backend> supported_backends() {
  std::vector<Backend> v{Backend::Scalar};
  if (detail::avx2_table()) v.push_back(Backend::Avx2);
  return v;
}

std::string_view backend_name(Backend b) {
  return b == Backend::Scalar ? "scalar" : "avx2";
}

double sum(const double* x, std::size_t n) { return active_table()->sum(x, n); }

double max_value(const double* x, std::size_t n) {
  return active_table()->max_value(x, n);
}

double dot(const double* a, const double* b, std::size_t n) {
  return active_table()->dot(a, b, n);
}

void mul_acc(double* acc, const double* a, const double* b, std::size_t n) {
  active_table()->mul_acc(acc, a, b, n);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  active_table()->axpy(alpha, x, y, n);
}

void exp(const double* x, double* out, std::size_t n) {
  active_table()->exp_v(x, out, n);
}

void log(const double* x, double* out, std::size_t n) {
  active_table()->log_v(x, out, n);
}

double sum_log_offset(const double* x, double c, std::size_t n) {
  return active_table()->sum_log_offset(x, c, n);
}

}  // namespace cogpow::kern
