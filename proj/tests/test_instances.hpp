#pragma once

// Shared generators for randomized tests: normalized-unit game instances
// (gains, noise, caps of order one) with arbitrary pricing combinations, and
// uniformly drawn feasible profiles.

#include <cstddef>
#include <vector>

#include "cogpow/game.hpp"
#include "cogpow/rng.hpp"

namespace cogpow::testing {

inline PricingSpec random_pricing(Rng& rng, std::size_t users) {
  PricingSpec spec;
  int flat = static_cast<int>(rng.below(3));
  int user = static_cast<int>(rng.below(3));
  spec.flat_model = flat == 0 ? PriceModel::None : flat == 1 ? PriceModel::Lp
                                                             : PriceModel::Vp;
  spec.user_model = user == 0 ? PriceModel::None : user == 1 ? PriceModel::Lp
                                                             : PriceModel::Vp;
  spec.lambda0 = rng.uniform(0.0, 2.0);
  spec.lambda_k.resize(users);
  for (auto& l : spec.lambda_k) l = rng.uniform(0.0, 1.5);
  return spec;
}

inline GameContext random_context(Rng& rng, std::size_t users, std::size_t subcarriers,
                                  bool with_pricing = true) {
  GameContext ctx;
  ctx.gains = Matrix(users, subcarriers);
  for (std::size_t i = 0; i < ctx.gains.size(); ++i)
    ctx.gains.data()[i] = rng.uniform(0.05, 3.0);
  ctx.noise.resize(subcarriers);
  for (auto& s : ctx.noise) s = rng.uniform(0.1, 2.0);
  ctx.i_max.resize(subcarriers);
  for (auto& t : ctx.i_max) t = rng.uniform(0.2, 2.0);
  ctx.max_power.resize(users);
  for (auto& p : ctx.max_power) p = rng.uniform(0.5, 2.0);
  if (with_pricing)
    ctx.pricing = random_pricing(rng, users);
  else
    ctx.pricing.lambda_k.assign(users, 0.0);
  ctx.pu_gain = rng.uniform(0.1, 1.0);
  ctx.pu_power = rng.uniform(0.5, 2.0);
  return ctx;
}

// uniform over each user's corner-of-cube via Dirichlet(1,...,1) weights
inline PowerProfile random_feasible(Rng& rng, const GameContext& ctx) {
  PowerProfile p(ctx.num_users(), ctx.num_subcarriers());
  for (std::size_t k = 0; k < p.rows(); ++k) {
    double total = 0.0;
    std::vector<double> e(p.cols() + 1);
    for (auto& x : e) {
      x = rng.exponential();
      total += x;
    }
    for (std::size_t s = 0; s < p.cols(); ++s)
      p(k, s) = ctx.max_power[k] * e[s] / total;
  }
  return p;
}

}  // namespace cogpow::testing
