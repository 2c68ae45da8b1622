#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cogpow/channel.hpp"

using namespace cogpow;
using doctest::Approx;

TEST_CASE("placement is deterministic per seed and rejects a degenerate area") {
  Rng a(7), b(7);
  auto p1 = place_users(a, 10, 200.0);
  auto p2 = place_users(b, 10, 200.0);
  REQUIRE(p1.size() == p2.size());
  for (std::size_t i = 0; i < p1.size(); ++i) {
    CHECK(p1[i].x == p2[i].x);
    CHECK(p1[i].y == p2[i].y);
    CHECK(p1[i].x >= 0.0);
    CHECK(p1[i].x <= 200.0);
  }
  Rng c(1);
  CHECK_THROWS(place_users(c, 1, 0.0));
}

TEST_CASE("placement mean matches the uniform law") {
  // law-of-large-numbers oracle: mean coordinate of U[0,200] is 100
  Rng rng(1234);
  auto pts = place_users(rng, 10000, 200.0);
  double mx = 0, my = 0;
  for (const auto& p : pts) {
    mx += p.x;
    my += p.y;
  }
  mx /= pts.size();
  my /= pts.size();
  CHECK(std::abs(mx - 100.0) < 2.0);
  CHECK(std::abs(my - 100.0) < 2.0);
}

TEST_CASE("static path loss values") {
  PathLossParams params{2.0, 1.0, false};
  CHECK(path_loss_gain(1.0, params) == Approx(1.0));
  CHECK(path_loss_gain(10.0, params) == Approx(0.01));
  CHECK(path_loss_gain(2.0, params) == Approx(0.25));  // doubling halves twice
  CHECK_THROWS(path_loss_gain(0.0, params));

  // gains at reference distance: user exactly 1 m from the center
  Rng rng(5);
  std::vector<Point> pts{{101.0, 100.0}};
  Matrix g = static_gains(pts, 4, 200.0, params, rng);
  for (std::size_t s = 0; s < 4; ++s) CHECK(g(0, s) == Approx(1.0));
}

TEST_CASE("pu link gain from the stock geometry") {
  // direct formula oracle: c0 d^-alpha at d = 50 m, alpha = 3
  double lambda_w = 299792458.0 / 2.4e9;
  double c0 = std::pow(lambda_w / (4.0 * M_PI), 2.0);
  PathLossParams params{3.0, c0, false};
  CHECK(pu_link_gain(50.0, params) == Approx(7.904768968254792e-10).epsilon(1e-12));
  PathLossParams unit{2.0, 1.0, false};
  CHECK(pu_link_gain(1.0, unit) == Approx(1.0));
  CHECK(pu_link_gain(10.0, unit) == Approx(0.01));
}

TEST_CASE("fading draws have unit mean") {
  PathLossParams params{3.0, 1.0, true};
  Rng rng(99);
  std::vector<Point> pts{{101.0, 100.0}};  // unit base gain
  double acc = 0.0;
  const int n = 100000;
  for (int i = 0; i < n / 4; ++i) {
    Matrix g = static_gains(pts, 4, 200.0, params, rng);
    for (int s = 0; s < 4; ++s) acc += g(0, s);
  }
  CHECK(std::abs(acc / n - 1.0) < 0.02);  // Monte-Carlo mean oracle
}

TEST_CASE("fast fading sampling: scaling, determinism, distribution") {
  Matrix mean(2, 3, 2.5);
  FadingProcess a(mean, 1.0, FadingProcess::Distribution::RayleighIID, Rng(11));
  FadingProcess b(mean, 1.0, FadingProcess::Distribution::RayleighIID, Rng(11));
  auto d1 = a.sample();
  auto d2 = b.sample();
  CHECK(d1.gains == d2.gains);  // same rng state, same draw

  // zero mean gain scales to zero
  Matrix zero_row(1, 2, 0.0);
  zero_row(0, 1) = 1.0;
  FadingProcess z(zero_row, 1.0, FadingProcess::Distribution::RayleighIID, Rng(3));
  for (int i = 0; i < 50; ++i) {
    auto d = z.sample();
    CHECK(d.gains(0, 0) == 0.0);
    CHECK(d.gains(0, 1) >= 0.0);
  }

  // degenerate distribution reproduces the mean exactly
  FadingProcess deg(mean, 1.0, FadingProcess::Distribution::Degenerate, Rng(4));
  CHECK(deg.sample().gains == mean);
}

TEST_CASE("fading coefficient distribution matches exponential(1)") {
  // Kolmogorov-Smirnov oracle against the exp(1) CDF
  Matrix mean(1, 1, 1.0);
  FadingProcess proc(mean, 1.0, FadingProcess::Distribution::RayleighIID, Rng(31337));
  const int n = 100000;
  std::vector<double> draws(n);
  for (int i = 0; i < n; ++i) draws[i] = proc.sample().gains(0, 0);
  std::sort(draws.begin(), draws.end());
  double ks = 0.0;
  for (int i = 0; i < n; ++i) {
    double cdf = 1.0 - std::exp(-draws[i]);
    double lo = static_cast<double>(i) / n;
    double hi = static_cast<double>(i + 1) / n;
    ks = std::max(ks, std::max(std::abs(cdf - lo), std::abs(cdf - hi)));
  }
  CHECK(ks < 0.01);
}

TEST_CASE("successive fading draws are uncorrelated") {
  Matrix mean(1, 1, 1.0);
  FadingProcess proc(mean, 1.0, FadingProcess::Distribution::RayleighIID, Rng(777));
  const int n = 100000;
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = proc.sample().gains(0, 0);
  double mu = 0;
  for (double v : x) mu += v;
  mu /= n;
  double var = 0;
  for (double v : x) var += (v - mu) * (v - mu);
  var /= n;
  for (int lag = 1; lag <= 3; ++lag) {
    double cov = 0;
    for (int i = 0; i + lag < n; ++i) cov += (x[i] - mu) * (x[i + lag] - mu);
    cov /= (n - lag);
    CHECK(std::abs(cov / var) < 0.02);
  }
}

TEST_CASE("whole realization is a pure function of seed and config") {
  NetworkConfig cfg = load_scenario(default_scenario_json());
  Rng r1(cfg.rng_seed), r2(cfg.rng_seed);
  auto ch1 = make_static_channel(cfg, r1);
  auto ch2 = make_static_channel(cfg, r2);
  CHECK(ch1.gains == ch2.gains);
  CHECK(ch1.pu_gain == ch2.pu_gain);
  for (std::size_t i = 0; i < ch1.gains.size(); ++i) {
    CHECK(ch1.gains.data()[i] >= 0.0);
    CHECK(std::isfinite(ch1.gains.data()[i]));
  }
}

TEST_CASE("channel csv round trip") {
  NetworkConfig cfg = load_scenario(default_scenario_json());
  Rng rng(8);
  auto ch = make_static_channel(cfg, rng);
  std::stringstream ss;
  write_channel_csv(ss, ch);
  auto back = read_channel_csv(ss);
  CHECK(back.pu_gain == ch.pu_gain);
  CHECK(back.gains == ch.gains);
}
