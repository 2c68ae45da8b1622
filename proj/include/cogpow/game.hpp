#pragma once

// The game itself: feasible power profiles, SINR, achievable rates, costs,
// utilities, the exact potential and its per-user gradients, plus the
// primary-user side quantities. All operations are pure functions of
// (context, profile) and safe to call concurrently.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cogpow/channel.hpp"
#include "cogpow/config.hpp"
#include "cogpow/matrix.hpp"
#include "cogpow/pricing.hpp"

namespace cogpow {

// A power profile is a K x S matrix of watts; user k's row must satisfy
// p_ks >= 0 and sum_s p_ks <= P_k.
using PowerProfile = Matrix;

// Static data of one game instance (channel draw + scenario parameters).
struct GameContext {
  Matrix gains;                   // K x S
  std::vector<double> noise;      // sigma^2_s, W
  std::vector<double> i_max;      // W
  std::vector<double> max_power;  // P_k, W
  PricingSpec pricing;
  double pu_gain = 0.0;
  double pu_power = 0.0;

  std::size_t num_users() const { return gains.rows(); }
  std::size_t num_subcarriers() const { return gains.cols(); }
};

GameContext make_context(const NetworkConfig& cfg, const ChannelRealization& ch);

bool is_feasible(const GameContext& ctx, const PowerProfile& p, double tol = 1e-12);

// w_s = sum_k g_ks p_ks
std::vector<double> aggregate_interference(const Matrix& gains, const PowerProfile& p);

// sinr_ks = g_ks p_ks / (sigma^2_s + sum_{l != k} g_ls p_ls)
Matrix compute_sinr(const Matrix& gains, const PowerProfile& p,
                    const std::vector<double>& noise);

// R_k = sum_s log(1 + sinr_ks), in nats
double rate_from_sinr(const Matrix& sinr, std::size_t k);

struct GameSnapshot {
  Matrix sinr;
  std::vector<double> w;
  std::vector<double> rates;      // nats
  std::vector<double> costs;
  std::vector<double> utilities;  // rates - costs
  double potential = 0.0;
};

GameSnapshot snapshot(const GameContext& ctx, const PowerProfile& p);

// V(p) = sum_s log(sigma^2_s + w_s) - pi_0(w) - sum_k pi_k(p_k)
double potential(const GameContext& ctx, const PowerProfile& p);
double potential_with_gains(const GameContext& ctx, const Matrix& gains,
                            const PowerProfile& p);

// v_ks = g_ks (1/(sigma^2_s + w_s) - d pi_0/d w_s) - d pi_k/d p_ks
Matrix marginal_utilities(const GameContext& ctx, const PowerProfile& p);
Matrix marginal_utilities_with_gains(const GameContext& ctx, const Matrix& gains,
                                     const PowerProfile& p);

// Subgradient interval [lo_ks, hi_ks] of the marginal utility; the endpoints
// differ only within kink_tol of a violation-price kink.
void marginal_utility_intervals(const GameContext& ctx, const PowerProfile& p,
                                double kink_tol, Matrix& lo, Matrix& hi);

// Recover sigma^2_s + sum_l g_ls p_ls from user-local measurements and return
// the aggregate interference w_s. The direct product g_ks p_ks (1+sinr)/sinr
// equals noise plus aggregate interference, so the locally known noise floor
// is subtracted before returning. Requires sinr_ks > 0.
double interference_from_sinr(double g_ks, double p_ks, double sinr_ks,
                              double noise_s);

// R_PU = sum_s log(1 + g_pu P_pu / (w_s + floor)); the machine-scale floor
// (or a configured receiver noise) keeps the ratio defined when all secondary
// users shut down.
double pu_rate(const std::vector<double>& w, double pu_gain, double pu_power,
               double noise_floor = 2.2250738585072014e-308);

// Operator income: the flat price collected from each of the K users plus the
// per-user charges.
double operator_revenue(const GameContext& ctx, const PowerProfile& p);

struct ErgodicEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::uint64_t samples = 0;
};

// Monte-Carlo estimate of the ergodic potential E_g[V(p; g)] over fresh draws
// from the process.
ErgodicEstimate ergodic_potential_estimate(const GameContext& ctx,
                                           const PowerProfile& p,
                                           FadingProcess process,
                                           std::uint64_t n_samples);

}  // namespace cogpow
