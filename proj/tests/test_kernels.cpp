#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "cogpow/kernels.hpp"
#include "cogpow/rng.hpp"

using namespace cogpow;

namespace {

std::vector<double> random_vec(Rng& rng, std::size_t n, double lo, double hi) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(lo, hi);
  return v;
}

bool close_rel(double a, double b, double rel, double abs_floor = 0.0) {
  double diff = std::abs(a - b);
  return diff <= rel * std::max(std::abs(a), std::abs(b)) + abs_floor;
}

struct BackendGuard {
  kern::Backend saved;
  BackendGuard() : saved(kern::active_backend()) {}
  ~BackendGuard() { kern::set_backend(saved); }
};

}  // namespace

TEST_CASE("reduction kernels match a plain loop on every backend") {
  BackendGuard guard;
  Rng rng(101);
  for (std::size_t n : {1u, 3u, 4u, 7u, 64u, 1001u}) {
    auto a = random_vec(rng, n, -10.0, 10.0);
    auto b = random_vec(rng, n, -2.0, 5.0);
    double ref_sum = 0, ref_dot = 0, ref_max = -1e300;
    for (std::size_t i = 0; i < n; ++i) {
      ref_sum += a[i];
      ref_dot += a[i] * b[i];
      ref_max = std::max(ref_max, a[i]);
    }
    for (auto backend : kern::supported_backends()) {
      REQUIRE(kern::set_backend(backend));
      CHECK(close_rel(kern::sum(a.data(), n), ref_sum, 1e-13, 1e-13));
      CHECK(close_rel(kern::dot(a.data(), b.data(), n), ref_dot, 1e-13, 1e-13));
      CHECK(kern::max_value(a.data(), n) == ref_max);
    }
  }
}

TEST_CASE("mul_acc and axpy match a plain loop on every backend") {
  BackendGuard guard;
  Rng rng(202);
  const std::size_t n = 37;
  auto a = random_vec(rng, n, -3.0, 3.0);
  auto b = random_vec(rng, n, -3.0, 3.0);
  auto y0 = random_vec(rng, n, -1.0, 1.0);
  for (auto backend : kern::supported_backends()) {
    REQUIRE(kern::set_backend(backend));
    auto acc = y0;
    kern::mul_acc(acc.data(), a.data(), b.data(), n);
    auto y = y0;
    kern::axpy(0.37, a.data(), y.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(close_rel(acc[i], y0[i] + a[i] * b[i], 1e-15, 1e-15));
      CHECK(close_rel(y[i], y0[i] + 0.37 * a[i], 1e-15, 1e-15));
    }
  }
}

TEST_CASE("vector exp matches libm to a few ulp") {
  BackendGuard guard;
  Rng rng(303);
  std::vector<double> xs = random_vec(rng, 4096, -700.0, 700.0);
  for (int i = 0; i < 512; ++i) xs.push_back(rng.uniform(-5.0, 5.0));
  xs.insert(xs.end(), {0.0, 1.0, -1.0, 709.0, -708.0, -745.0, 1e-300, -1e-300});
  for (auto backend : kern::supported_backends()) {
    REQUIRE(kern::set_backend(backend));
    std::vector<double> out(xs.size());
    kern::exp(xs.data(), out.data(), xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      double ref = std::exp(xs[i]);
      CHECK_MESSAGE(close_rel(out[i], ref, 4e-15, 1e-305),
                    "exp(" << xs[i] << ") backend "
                           << std::string(kern::backend_name(backend)));
    }
  }
}

TEST_CASE("vector exp special values") {
  BackendGuard guard;
  const double inf = std::numeric_limits<double>::infinity();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> xs{1000.0, -1000.0, inf, -inf, nan};
  for (auto backend : kern::supported_backends()) {
    REQUIRE(kern::set_backend(backend));
    std::vector<double> out(xs.size());
    kern::exp(xs.data(), out.data(), xs.size());
    CHECK(out[0] == inf);
    CHECK(out[1] == 0.0);
    CHECK(out[2] == inf);
    CHECK(out[3] == 0.0);
    CHECK(std::isnan(out[4]));
  }
}

TEST_CASE("vector log matches libm to a few ulp") {
  BackendGuard guard;
  Rng rng(404);
  std::vector<double> xs;
  for (int i = 0; i < 4096; ++i) xs.push_back(std::exp(rng.uniform(-700.0, 700.0)));
  for (int i = 0; i < 512; ++i) xs.push_back(rng.uniform(0.5, 2.0));
  xs.insert(xs.end(), {1.0, 2.0, 0.5, 1e-300, 1e300, 5.477976463546086e-17});
  for (auto backend : kern::supported_backends()) {
    REQUIRE(kern::set_backend(backend));
    std::vector<double> out(xs.size());
    kern::log(xs.data(), out.data(), xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      double ref = std::log(xs[i]);
      CHECK_MESSAGE(close_rel(out[i], ref, 4e-15, 4e-16),
                    "log(" << xs[i] << ") backend "
                           << std::string(kern::backend_name(backend)));
    }
  }
}

TEST_CASE("vector log specials and subnormals") {
  BackendGuard guard;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> xs{0.0, -1.0, inf, 4.9e-324, 1e-310};
  for (auto backend : kern::supported_backends()) {
    REQUIRE(kern::set_backend(backend));
    std::vector<double> out(xs.size());
    kern::log(xs.data(), out.data(), xs.size());
    CHECK(out[0] == -inf);
    CHECK(std::isnan(out[1]));
    CHECK(out[2] == inf);
    CHECK(close_rel(out[3], std::log(4.9e-324), 1e-14));
    CHECK(close_rel(out[4], std::log(1e-310), 1e-14));
  }
}

TEST_CASE("scalar and avx2 backends agree pairwise") {
  auto backends = kern::supported_backends();
  if (backends.size() < 2) return;  // no SIMD on this host
  BackendGuard guard;
  Rng rng(505);
  const std::size_t n = 1027;
  auto x = random_vec(rng, n, -80.0, 80.0);
  auto pos = random_vec(rng, n, 1e-18, 1e3);

  REQUIRE(kern::set_backend(kern::Backend::Scalar));
  std::vector<double> exp_s(n), log_s(n);
  kern::exp(x.data(), exp_s.data(), n);
  kern::log(pos.data(), log_s.data(), n);
  double sum_s = kern::sum(x.data(), n);
  double slo_s = kern::sum_log_offset(pos.data(), 0.25, n);

  REQUIRE(kern::set_backend(kern::Backend::Avx2));
  std::vector<double> exp_v(n), log_v(n);
  kern::exp(x.data(), exp_v.data(), n);
  kern::log(pos.data(), log_v.data(), n);
  double sum_v = kern::sum(x.data(), n);
  double slo_v = kern::sum_log_offset(pos.data(), 0.25, n);

  for (std::size_t i = 0; i < n; ++i) {
    CHECK(close_rel(exp_s[i], exp_v[i], 4e-15));
    CHECK(close_rel(log_s[i], log_v[i], 4e-15, 4e-16));
  }
  CHECK(close_rel(sum_s, sum_v, 1e-13, 1e-13));
  CHECK(close_rel(slo_s, slo_v, 1e-12, 1e-12));
}

TEST_CASE("sum_log_offset equals log-then-sum") {
  BackendGuard guard;
  Rng rng(606);
  const std::size_t n = 213;
  auto x = random_vec(rng, n, 0.0, 50.0);
  for (auto backend : kern::supported_backends()) {
    REQUIRE(kern::set_backend(backend));
    double fused = kern::sum_log_offset(x.data(), 1.5, n);
    double manual = 0.0;
    for (std::size_t i = 0; i < n; ++i) manual += std::log(1.5 + x[i]);
    CHECK(close_rel(fused, manual, 1e-12, 1e-12));
  }
}

TEST_CASE("exp output may alias input") {
  BackendGuard guard;
  Rng rng(707);
  auto x = random_vec(rng, 19, -3.0, 3.0);
  for (auto backend : kern::supported_backends()) {
    REQUIRE(kern::set_backend(backend));
    auto y = x;
    kern::exp(y.data(), y.data(), y.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      CHECK(close_rel(y[i], std::exp(x[i]), 4e-15));
  }
}
