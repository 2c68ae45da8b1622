#include "cogpow/game.hpp"

#include <cmath>
#include <stdexcept>

#include "cogpow/kernels.hpp"

namespace cogpow {

GameContext make_context(const NetworkConfig& cfg, const ChannelRealization& ch) {
  GameContext ctx;
  ctx.gains = ch.gains;
  ctx.noise = cfg.noise_power;
  ctx.i_max = cfg.i_max;
  ctx.max_power = cfg.max_power;
  ctx.pricing = cfg.pricing;
  ctx.pu_gain = ch.pu_gain;
  ctx.pu_power = cfg.pu_power;
  return ctx;
}

bool is_feasible(const GameContext& ctx, const PowerProfile& p, double tol) {
  if (p.rows() != ctx.num_users() || p.cols() != ctx.num_subcarriers()) return false;
  for (std::size_t k = 0; k < p.rows(); ++k) {
    double total = 0.0;
    for (std::size_t s = 0; s < p.cols(); ++s) {
      if (p(k, s) < -tol * ctx.max_power[k]) return false;
      total += p(k, s);
    }
    if (total > ctx.max_power[k] * (1.0 + tol)) return false;
  }
  return true;
}

std::vector<double> aggregate_interference(const Matrix& gains, const PowerProfile& p) {
  std::vector<double> w(gains.cols(), 0.0);
  for (std::size_t k = 0; k < gains.rows(); ++k)
    kern::mul_acc(w.data(), gains.row(k), p.row(k), gains.cols());
  return w;
}

Matrix compute_sinr(const Matrix& gains, const PowerProfile& p,
                    const std::vector<double>& noise) {
  auto w = aggregate_interference(gains, p);
  Matrix sinr(gains.rows(), gains.cols());
  for (std::size_t k = 0; k < gains.rows(); ++k)
    for (std::size_t s = 0; s < gains.cols(); ++s) {
      double own = gains(k, s) * p(k, s);
      sinr(k, s) = own / (noise[s] + w[s] - own);
    }
  return sinr;
}

double rate_from_sinr(const Matrix& sinr, std::size_t k) {
  double r = 0.0;
  for (std::size_t s = 0; s < sinr.cols(); ++s) r += std::log1p(sinr(k, s));
  return r;
}

double potential_with_gains(const GameContext& ctx, const Matrix& gains,
                            const PowerProfile& p) {
  auto w = aggregate_interference(gains, p);
  double v = 0.0;
  for (std::size_t s = 0; s < w.size(); ++s) v += std::log(ctx.noise[s] + w[s]);
  v -= flat_price(ctx.pricing, w, ctx.i_max).value;
  for (std::size_t k = 0; k < gains.rows(); ++k)
    v -= user_price(ctx.pricing, k, p.row(k), gains.row(k), ctx.i_max).value;
  return v;
}

double potential(const GameContext& ctx, const PowerProfile& p) {
  return potential_with_gains(ctx, ctx.gains, p);
}

GameSnapshot snapshot(const GameContext& ctx, const PowerProfile& p) {
  GameSnapshot snap;
  snap.w = aggregate_interference(ctx.gains, p);
  snap.sinr = Matrix(p.rows(), p.cols());
  for (std::size_t k = 0; k < p.rows(); ++k)
    for (std::size_t s = 0; s < p.cols(); ++s) {
      double own = ctx.gains(k, s) * p(k, s);
      snap.sinr(k, s) = own / (ctx.noise[s] + snap.w[s] - own);
    }
  double flat_value = flat_price(ctx.pricing, snap.w, ctx.i_max).value;
  snap.rates.resize(p.rows());
  snap.costs.resize(p.rows());
  snap.utilities.resize(p.rows());
  double user_total = 0.0;
  for (std::size_t k = 0; k < p.rows(); ++k) {
    snap.rates[k] = rate_from_sinr(snap.sinr, k);
    double uk = user_price(ctx.pricing, k, p.row(k), ctx.gains.row(k), ctx.i_max).value;
    snap.costs[k] = flat_value + uk;
    snap.utilities[k] = snap.rates[k] - snap.costs[k];
    user_total += uk;
  }
  double logsum = 0.0;
  for (std::size_t s = 0; s < snap.w.size(); ++s)
    logsum += std::log(ctx.noise[s] + snap.w[s]);
  snap.potential = logsum - flat_value - user_total;
  return snap;
}

Matrix marginal_utilities_with_gains(const GameContext& ctx, const Matrix& gains,
                                     const PowerProfile& p) {
  auto w = aggregate_interference(gains, p);
  auto flat = flat_price(ctx.pricing, w, ctx.i_max);
  Matrix v(p.rows(), p.cols());
  for (std::size_t k = 0; k < p.rows(); ++k) {
    auto user = user_price(ctx.pricing, k, p.row(k), gains.row(k), ctx.i_max);
    for (std::size_t s = 0; s < p.cols(); ++s)
      v(k, s) = gains(k, s) * (1.0 / (ctx.noise[s] + w[s]) - flat.grad[s]) -
                user.grad[s];
  }
  return v;
}

Matrix marginal_utilities(const GameContext& ctx, const PowerProfile& p) {
  return marginal_utilities_with_gains(ctx, ctx.gains, p);
}

void marginal_utility_intervals(const GameContext& ctx, const PowerProfile& p,
                                double kink_tol, Matrix& lo, Matrix& hi) {
  auto w = aggregate_interference(ctx.gains, p);
  lo = Matrix(p.rows(), p.cols());
  hi = Matrix(p.rows(), p.cols());
  for (std::size_t k = 0; k < p.rows(); ++k)
    for (std::size_t s = 0; s < p.cols(); ++s) {
      double flo, fhi, ulo, uhi;
      flat_price_grad_interval(ctx.pricing, w[s], ctx.i_max[s], kink_tol, flo, fhi);
      user_price_grad_interval(ctx.pricing, k, p(k, s), ctx.gains(k, s),
                               ctx.i_max[s], kink_tol, ulo, uhi);
      // larger price gradients make the marginal smaller
      lo(k, s) = ctx.gains(k, s) * (1.0 / (ctx.noise[s] + w[s]) - fhi) - uhi;
      hi(k, s) = ctx.gains(k, s) * (1.0 / (ctx.noise[s] + w[s]) - flo) - ulo;
    }
}

double interference_from_sinr(double g_ks, double p_ks, double sinr_ks,
                              double noise_s) {
  if (!(sinr_ks > 0.0))
    throw std::invalid_argument(
        "interference_from_sinr: zero SINR, aggregate level not locally recoverable");
  return g_ks * p_ks * (1.0 + sinr_ks) / sinr_ks - noise_s;
}

double pu_rate(const std::vector<double>& w, double pu_gain, double pu_power,
               double noise_floor) {
  double r = 0.0;
  double signal = pu_gain * pu_power;
  for (double ws : w) {
    double ratio = signal / (ws + noise_floor);
    if (std::isfinite(ratio))
      r += std::log1p(ratio);
    else
      r += std::log(signal) - std::log(ws + noise_floor);
  }
  return r;
}

double operator_revenue(const GameContext& ctx, const PowerProfile& p) {
  auto w = aggregate_interference(ctx.gains, p);
  double rev = static_cast<double>(ctx.num_users()) *
               flat_price(ctx.pricing, w, ctx.i_max).value;
  for (std::size_t k = 0; k < p.rows(); ++k)
    rev += user_price(ctx.pricing, k, p.row(k), ctx.gains.row(k), ctx.i_max).value;
  return rev;
}

namespace {

ErgodicEstimate accumulate_potential_samples(const GameContext& ctx,
                                             const PowerProfile& p,
                                             FadingProcess& process,
                                             std::uint64_t n_samples) {
  double mean = 0.0, m2 = 0.0;
  for (std::uint64_t i = 1; i <= n_samples; ++i) {
    ChannelRealization draw = process.sample();
    double v = potential_with_gains(ctx, draw.gains, p);
    double delta = v - mean;
    mean += delta / static_cast<double>(i);
    m2 += delta * (v - mean);
  }
  ErgodicEstimate est;
  est.mean = mean;
  est.samples = n_samples;
  if (n_samples > 1) {
    double var = m2 / static_cast<double>(n_samples - 1);
    est.stderr_ = std::sqrt(var / static_cast<double>(n_samples));
  }
  return est;
}

}  // namespace

ErgodicEstimate ergodic_potential_estimate(const GameContext& ctx,
                                           const PowerProfile& p,
                                           FadingProcess process,
                                           std::uint64_t n_samples) {
  if (n_samples < 1)
    throw std::invalid_argument("ergodic_potential_estimate: need n_samples >= 1");
  return accumulate_potential_samples(ctx, p, process, n_samples);
}

}  // namespace cogpow
