#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cogpow/game.hpp"
#include "test_instances.hpp"

using namespace cogpow;
using cogpow::testing::random_context;
using cogpow::testing::random_feasible;
using doctest::Approx;

namespace {

GameContext tiny(std::size_t K, std::size_t S, double g, double noise, double P) {
  GameContext ctx;
  ctx.gains = Matrix(K, S, g);
  ctx.noise.assign(S, noise);
  ctx.i_max.assign(S, 1.0);
  ctx.max_power.assign(K, P);
  ctx.pricing.lambda_k.assign(K, 0.0);
  ctx.pu_gain = 1.0;
  ctx.pu_power = 1.0;
  return ctx;
}

}  // namespace

TEST_CASE("sinr closed forms") {
  // single user, no interference
  GameContext one = tiny(1, 1, 2.0, 1.0, 1.0);
  Matrix p(1, 1, 0.5);
  CHECK(compute_sinr(one.gains, p, one.noise)(0, 0) == Approx(1.0));

  // zero power
  Matrix p0(1, 1, 0.0);
  CHECK(compute_sinr(one.gains, p0, one.noise)(0, 0) == 0.0);

  // two symmetric users on one carrier
  GameContext two = tiny(2, 1, 1.0, 1.0, 1.0);
  Matrix ps(2, 1, 1.0);
  Matrix sinr = compute_sinr(two.gains, ps, two.noise);
  CHECK(sinr(0, 0) == Approx(0.5));
  CHECK(sinr(1, 0) == Approx(0.5));
}

TEST_CASE("rate closed forms and the two-log identity") {
  GameContext one = tiny(1, 1, 2.0, 1.0, 1.0);
  Matrix p(1, 1, 0.5);
  GameSnapshot snap = snapshot(one, p);
  CHECK(snap.rates[0] == Approx(std::log(2.0)).epsilon(1e-15));

  Matrix p0(1, 1, 0.0);
  CHECK(snapshot(one, p0).rates[0] == 0.0);

  // algebraic re-evaluation oracle: R_k as a difference of two log sums
  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    GameContext ctx = random_context(rng, 1 + rng.below(4), 1 + rng.below(4));
    PowerProfile prof = random_feasible(rng, ctx);
    GameSnapshot s = snapshot(ctx, prof);
    for (std::size_t k = 0; k < ctx.num_users(); ++k) {
      double alt = 0.0;
      for (std::size_t sc = 0; sc < ctx.num_subcarriers(); ++sc) {
        double other = ctx.noise[sc];
        for (std::size_t l = 0; l < ctx.num_users(); ++l)
          if (l != k) other += ctx.gains(l, sc) * prof(l, sc);
        alt += std::log(ctx.noise[sc] + s.w[sc]) - std::log(other);
      }
      CHECK(s.rates[k] == Approx(alt).epsilon(1e-12));
    }
  }
}

TEST_CASE("potential closed forms") {
  // zero powers, zero prices
  GameContext ctx = tiny(2, 3, 1.0, 0.7, 1.0);
  Matrix p0(2, 3, 0.0);
  CHECK(potential(ctx, p0) == Approx(3.0 * std::log(0.7)).epsilon(1e-14));

  // single user without pricing: V - sum log sigma^2 equals the rate
  GameContext one = tiny(1, 2, 1.3, 0.5, 1.0);
  Matrix p(1, 2);
  p(0, 0) = 0.3;
  p(0, 1) = 0.6;
  double base = 2.0 * std::log(0.5);
  CHECK(potential(one, p) - base ==
        Approx(snapshot(one, p).rates[0]).epsilon(1e-12));
}

TEST_CASE("unilateral deviations move utility and potential identically") {
  Rng rng(1234);
  for (int trial = 0; trial < 400; ++trial) {
    GameContext ctx = random_context(rng, 1 + rng.below(5), 1 + rng.below(5));
    PowerProfile p = random_feasible(rng, ctx);
    PowerProfile q = random_feasible(rng, ctx);
    std::size_t k = rng.below(ctx.num_users());
    PowerProfile p2 = p;
    for (std::size_t s = 0; s < ctx.num_subcarriers(); ++s) p2(k, s) = q(k, s);

    GameSnapshot before = snapshot(ctx, p);
    GameSnapshot after = snapshot(ctx, p2);
    double du = after.utilities[k] - before.utilities[k];
    double dv = after.potential - before.potential;
    double tol = 1e-9 * std::max(1.0, std::abs(before.potential));
    CHECK(std::abs(du - dv) <= tol);
  }
}

TEST_CASE("marginal utilities closed forms") {
  GameContext ctx = tiny(1, 1, 1.0, 1.0, 2.0);
  Matrix p(1, 1, 1.0);
  CHECK(marginal_utilities(ctx, p)(0, 0) == Approx(0.5));

  ctx.pricing.flat_model = PriceModel::Lp;
  ctx.pricing.lambda0 = 1.0;
  CHECK(marginal_utilities(ctx, p)(0, 0) == Approx(-0.5));
}

TEST_CASE("marginals match finite differences of the utility") {
  Rng rng(555);
  const double rel_h = 1e-6;
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    GameContext ctx = random_context(rng, 1 + rng.below(3), 1 + rng.below(3));
    PowerProfile p = random_feasible(rng, ctx);
    auto w = aggregate_interference(ctx.gains, p);
    Matrix v = marginal_utilities(ctx, p);
    for (std::size_t k = 0; k < ctx.num_users(); ++k) {
      for (std::size_t s = 0; s < ctx.num_subcarriers(); ++s) {
        // keep away from violation-price kinks where the derivative jumps
        if (std::abs(w[s] / ctx.i_max[s] - 1.0) < 1e-3) continue;
        if (std::abs(ctx.gains(k, s) * p(k, s) / ctx.i_max[s] - 1.0) < 1e-3) continue;
        if (p(k, s) < 1e-4) continue;
        double h = rel_h * std::max(p(k, s), 0.1);
        PowerProfile pp = p, pm = p;
        pp(k, s) += h;
        pm(k, s) -= h;
        double up = snapshot(ctx, pp).utilities[k];
        double um = snapshot(ctx, pm).utilities[k];
        double fd = (up - um) / (2.0 * h);
        CHECK(v(k, s) == Approx(fd).epsilon(1e-5).scale(1.0));
        ++checked;
      }
    }
  }
  CHECK(checked > 200);
}

TEST_CASE("aggregate interference recovery from local measurements") {
  // hand-checked: two symmetric users
  CHECK(interference_from_sinr(1.0, 1.0, 0.5, 1.0) == Approx(2.0));
  // single-user identity: sinr = g p / sigma^2 = 1, recovery = w = g p
  CHECK(interference_from_sinr(1.0, 1.0, 1.0, 1.0) == Approx(1.0));
  CHECK_THROWS(interference_from_sinr(1.0, 0.0, 0.0, 1.0));

  Rng rng(31);
  for (int trial = 0; trial < 1000; ++trial) {
    GameContext ctx = random_context(rng, 1 + rng.below(5), 1 + rng.below(5));
    PowerProfile p = random_feasible(rng, ctx);
    Matrix sinr = compute_sinr(ctx.gains, p, ctx.noise);
    auto w = aggregate_interference(ctx.gains, p);
    for (std::size_t k = 0; k < ctx.num_users(); ++k)
      for (std::size_t s = 0; s < ctx.num_subcarriers(); ++s) {
        if (!(sinr(k, s) > 0.0)) continue;
        double rec = interference_from_sinr(ctx.gains(k, s), p(k, s), sinr(k, s),
                                            ctx.noise[s]);
        CHECK(rec == Approx(w[s]).epsilon(1e-12));
      }
  }
}

TEST_CASE("local measurement identity") {
  Rng rng(32);
  for (int trial = 0; trial < 1000; ++trial) {
    GameContext ctx = random_context(rng, 1 + rng.below(4), 1 + rng.below(4));
    PowerProfile p = random_feasible(rng, ctx);
    Matrix sinr = compute_sinr(ctx.gains, p, ctx.noise);
    auto w = aggregate_interference(ctx.gains, p);
    for (std::size_t k = 0; k < ctx.num_users(); ++k)
      for (std::size_t s = 0; s < ctx.num_subcarriers(); ++s) {
        if (p(k, s) <= 0.0) continue;
        double lhs = (1.0 / p(k, s)) * sinr(k, s) / (1.0 + sinr(k, s));
        double rhs = ctx.gains(k, s) / (ctx.noise[s] + w[s]);
        CHECK(lhs == Approx(rhs).epsilon(1e-12));
      }
  }
}

TEST_CASE("potential is concave along segments") {
  Rng rng(33);
  for (int trial = 0; trial < 200; ++trial) {
    GameContext ctx = random_context(rng, 1 + rng.below(4), 1 + rng.below(4));
    PowerProfile a = random_feasible(rng, ctx);
    PowerProfile b = random_feasible(rng, ctx);
    double va = potential(ctx, a), vb = potential(ctx, b);
    for (double t : {0.25, 0.5, 0.75}) {
      PowerProfile mid(a.rows(), a.cols());
      for (std::size_t i = 0; i < a.size(); ++i)
        mid.data()[i] = t * a.data()[i] + (1.0 - t) * b.data()[i];
      CHECK(potential(ctx, mid) >= t * va + (1.0 - t) * vb - 1e-10);
    }
  }
}

TEST_CASE("aggregate interference is linear in each power") {
  Rng rng(34);
  GameContext ctx = random_context(rng, 3, 3);
  PowerProfile p = random_feasible(rng, ctx);
  auto w = aggregate_interference(ctx.gains, p);
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t s = 0; s < 3; ++s) {
      PowerProfile q = p;
      double delta = 0.01;
      q(k, s) += delta;
      auto w2 = aggregate_interference(ctx.gains, q);
      CHECK(w2[s] - w[s] == Approx(ctx.gains(k, s) * delta).epsilon(1e-9));
      for (std::size_t s2 = 0; s2 < 3; ++s2)
        if (s2 != s) CHECK(w2[s2] == w[s2]);
    }
}

TEST_CASE("primary user rate") {
  // g P equals the interference level: one-carrier rate log 2
  CHECK(pu_rate({1.0}, 1.0, 1.0) == Approx(std::log(2.0)).epsilon(1e-12));
  // interference growing without bound drives the rate to zero
  CHECK(pu_rate({1e300}, 1.0, 1.0) == Approx(0.0).scale(1.0).epsilon(1e-12));
  // all secondaries silent: floor keeps it finite
  CHECK(std::isfinite(pu_rate({0.0}, 1.0, 1.0)));

  // stock geometry oracle: 30 dBm transmitter at 50 m, cube-law path loss
  double g_pu = 7.904768968254792e-10;
  double w = 1e-10;
  double expect = std::log1p(g_pu * 1.0 / w);
  CHECK(pu_rate({w}, g_pu, 1.0) == Approx(expect).epsilon(1e-12));
}

TEST_CASE("operator revenue") {
  GameContext ctx = tiny(2, 2, 1.0, 1.0, 1.0);
  Matrix p(2, 2, 0.25);

  CHECK(operator_revenue(ctx, p) == 0.0);  // no pricing

  ctx.pricing.flat_model = PriceModel::Vp;
  ctx.pricing.lambda0 = 3.0;
  // w = 0.5 per carrier, below tolerance: violation revenue is zero
  CHECK(operator_revenue(ctx, p) == 0.0);

  ctx.pricing.flat_model = PriceModel::Lp;
  ctx.pricing.user_model = PriceModel::Lp;
  ctx.pricing.lambda_k = {0.5, 0.25};
  auto w = aggregate_interference(ctx.gains, p);
  double flat = flat_price(ctx.pricing, w, ctx.i_max).value;
  double users = user_price(ctx.pricing, 0, p.row(0), ctx.gains.row(0), ctx.i_max).value +
                 user_price(ctx.pricing, 1, p.row(1), ctx.gains.row(1), ctx.i_max).value;
  CHECK(operator_revenue(ctx, p) == Approx(2.0 * flat + users).epsilon(1e-12));
}

TEST_CASE("ergodic potential estimate") {
  Rng rng(77);
  GameContext ctx = random_context(rng, 2, 2);
  PowerProfile p = random_feasible(rng, ctx);

  // point-mass fading reproduces the static potential exactly
  FadingProcess deg(ctx.gains, ctx.pu_gain, FadingProcess::Distribution::Degenerate,
                    Rng(5));
  auto est = ergodic_potential_estimate(ctx, p, deg, 200);
  CHECK(est.mean == Approx(potential(ctx, p)).epsilon(1e-14));
  CHECK(est.stderr_ == 0.0);

  // self-consistency: refined estimate stays within 3 standard errors
  FadingProcess f1(ctx.gains, ctx.pu_gain, FadingProcess::Distribution::RayleighIID,
                   Rng(6));
  FadingProcess f2(ctx.gains, ctx.pu_gain, FadingProcess::Distribution::RayleighIID,
                   Rng(7));
  auto e1 = ergodic_potential_estimate(ctx, p, f1, 10000);
  auto e2 = ergodic_potential_estimate(ctx, p, f2, 100000);
  CHECK(std::abs(e1.mean - e2.mean) <=
        3.0 * std::sqrt(e1.stderr_ * e1.stderr_ + e2.stderr_ * e2.stderr_));

  // zero powers with no pricing: V is constant across draws
  GameContext plain = ctx;
  plain.pricing = PricingSpec{};
  plain.pricing.lambda_k.assign(2, 0.0);
  PowerProfile zero(2, 2, 0.0);
  FadingProcess f3(ctx.gains, ctx.pu_gain, FadingProcess::Distribution::RayleighIID,
                   Rng(8));
  auto e3 = ergodic_potential_estimate(plain, zero, f3, 500);
  double expect = std::log(plain.noise[0]) + std::log(plain.noise[1]);
  CHECK(e3.mean == Approx(expect).epsilon(1e-14));
  CHECK(e3.stderr_ == 0.0);
  CHECK_THROWS(ergodic_potential_estimate(plain, zero, f3, 0));
}

TEST_CASE("snapshot internal consistency") {
  Rng rng(88);
  GameContext ctx = random_context(rng, 4, 3);
  PowerProfile p = random_feasible(rng, ctx);
  GameSnapshot s = snapshot(ctx, p);
  auto w = aggregate_interference(ctx.gains, p);
  for (std::size_t sc = 0; sc < 3; ++sc) CHECK(s.w[sc] == Approx(w[sc]).epsilon(1e-15));
  for (std::size_t k = 0; k < 4; ++k)
    CHECK(s.utilities[k] == Approx(s.rates[k] - s.costs[k]).epsilon(1e-14));
  CHECK(s.potential == Approx(potential(ctx, p)).epsilon(1e-13));
  CHECK(is_feasible(ctx, p));
}
