#include "cogpow/learning.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cogpow/kernels.hpp"

namespace cogpow {

void gibbs_map(std::span<const double> scores, double max_power,
               std::span<double> powers_out) {
  const std::size_t n = scores.size();
  double shift = std::max(0.0, kern::max_value(scores.data(), n));
  for (std::size_t s = 0; s < n; ++s) powers_out[s] = scores[s] - shift;
  kern::exp(powers_out.data(), powers_out.data(), n);
  double denom = std::exp(-shift) + kern::sum(powers_out.data(), n);
  double scale = max_power / denom;
  for (std::size_t s = 0; s < n; ++s) powers_out[s] *= scale;
}

Matrix gibbs_map_all(const Matrix& scores, const std::vector<double>& max_power) {
  Matrix p(scores.rows(), scores.cols());
  for (std::size_t k = 0; k < scores.rows(); ++k)
    gibbs_map({scores.row(k), scores.cols()}, max_power[k],
              {p.row(k), scores.cols()});
  return p;
}

void user_marginals(const UserMeasurements& m, MarginalForm form,
                    std::span<double> v_out) {
  const std::size_t S = m.own_gains.size();
  const std::size_t k = m.user_index;
  for (std::size_t s = 0; s < S; ++s) {
    double g = m.own_gains[s];
    double p = m.own_powers[s];
    double sinr = m.own_sinr[s];
    // sigma^2 + w, recovered from the user's own measurements. A zero SINR
    // (own power underflowed to nothing) carries no information about the
    // aggregate level, so only the local noise floor is assumed.
    bool recoverable = sinr > 0.0 && p > 0.0;
    double total = recoverable ? g * p * (1.0 + sinr) / sinr : m.noise[s];
    double w = total - m.noise[s];
    double rate_term;
    if (form == MarginalForm::Measured && recoverable)
      rate_term = (1.0 / p) * sinr / (1.0 + sinr);
    else
      rate_term = g / total;
    // subgradient choice at a violation kink is 0 (no charge until an actual
    // violation), i.e. the lower endpoint of the price-gradient interval
    double flat_lo, flat_hi, user_lo, user_hi;
    flat_price_grad_interval(*m.pricing, w, m.i_max[s], 0.0, flat_lo, flat_hi);
    user_price_grad_interval(*m.pricing, k, p, g, m.i_max[s], 0.0, user_lo, user_hi);
    v_out[s] = rate_term - g * flat_lo - user_lo;
  }
}

double score_update(std::span<double> scores_k, std::span<const double> v_k,
                    double gamma) {
  kern::axpy(gamma, v_k.data(), scores_k.data(), scores_k.size());
  double m = 0.0;
  for (double v : v_k) m = std::max(m, std::abs(gamma * v));
  return m;
}

double step_size(const StepSchedule& sched, const LearningState& st,
                 std::uint64_t n) {
  switch (sched.kind) {
    case StepSchedule::Kind::Constant:
      return sched.gamma0;
    case StepSchedule::Kind::PowerLaw:
      return sched.gamma0 * std::pow(static_cast<double>(n), -sched.beta);
    case StepSchedule::Kind::Stc:
      if (!st.stc_switched) return sched.gamma0;
      return sched.gamma0 *
             std::pow(static_cast<double>(n - st.stc_switch_iteration + 1),
                      -sched.stc_beta);
  }
  return sched.gamma0;
}

bool detect_oscillation(std::span<const double> window, int min_alternations,
                        double flat_tol) {
  if (window.size() < 4)
    throw std::invalid_argument("detect_oscillation: window must hold >= 4 values");
  int alternations = 0;
  int prev_sign = 0;
  for (std::size_t i = 1; i < window.size(); ++i) {
    double d = window[i] - window[i - 1];
    int sign = (d > flat_tol) ? 1 : (d < -flat_tol) ? -1 : 0;
    if (sign == 0) continue;  // flat difference: converged, not oscillating
    if (prev_sign != 0 && sign != prev_sign) ++alternations;
    prev_sign = sign;
  }
  return alternations >= min_alternations;
}

StepDiagnostics xl_step(LearningState& state, const GameContext& ctx,
                        const Matrix& gains, const StepSchedule& sched,
                        MarginalForm form) {
  const std::size_t K = ctx.num_users();
  const std::size_t S = ctx.num_subcarriers();
  std::uint64_t n = state.iteration + 1;

  Matrix p = gibbs_map_all(state.scores, ctx.max_power);
  Matrix sinr = compute_sinr(gains, p, ctx.noise);

  StepDiagnostics diag;
  diag.gamma = step_size(sched, state, n);
  std::vector<double> v(S);
  for (std::size_t k = 0; k < K; ++k) {
    UserMeasurements m{{gains.row(k), S}, {p.row(k), S},     {sinr.row(k), S},
                       ctx.noise,         ctx.i_max,         &ctx.pricing,
                       k};
    user_marginals(m, form, v);
    double inc = score_update({state.scores.row(k), S}, v, diag.gamma);
    diag.max_abs_increment = std::max(diag.max_abs_increment, inc);
  }
  state.iteration = n;
  return diag;
}

namespace {

TrajectoryPoint make_point(const GameContext& ctx, const PowerProfile& p,
                           std::uint64_t n, double gamma, double max_inc) {
  TrajectoryPoint tp;
  tp.iteration = n;
  tp.powers = p;
  tp.w = aggregate_interference(ctx.gains, p);
  GameSnapshot snap = snapshot(ctx, p);
  tp.potential = snap.potential;
  tp.sum_rate = kern::sum(snap.rates.data(), snap.rates.size());
  tp.max_psi = 0.0;
  for (std::size_t s = 0; s < tp.w.size(); ++s)
    tp.max_psi = std::max(tp.max_psi, tp.w[s] / ctx.i_max[s]);
  tp.gamma = gamma;
  tp.max_abs_increment = max_inc;
  return tp;
}

}  // namespace

RunRecord run_learning(const GameContext& ctx, const RunSettings& run,
                       RunMode mode, FadingProcess* fading, MarginalForm form) {
  if (mode == RunMode::Ergodic && fading == nullptr)
    throw std::invalid_argument("run_learning: ergodic mode needs a fading process");
  run.schedule.validate();

  const std::size_t K = ctx.num_users();
  const std::size_t S = ctx.num_subcarriers();
  LearningState state(K, S);
  RunRecord rec;

  // initial interior profile (scores are zero)
  {
    Matrix p0 = gibbs_map_all(state.scores, ctx.max_power);
    rec.trajectory.push_back(make_point(ctx, p0, 0, 0.0, 0.0));
    rec.final_powers = p0;
    rec.final_potential = rec.trajectory.back().potential;
  }

  // oscillation window over the potential, for the STC switch
  std::vector<double> v_window;
  const std::size_t window_len =
      static_cast<std::size_t>(std::max(4, run.schedule.stc_window));

  int quiet_streak = 0;
  Matrix draw_gains;
  for (std::uint64_t n = 1; n <= run.max_iterations; ++n) {
    const Matrix* gains = &ctx.gains;
    if (mode == RunMode::Ergodic) {
      draw_gains = fading->sample().gains;
      gains = &draw_gains;
    }
    StepDiagnostics diag = xl_step(state, ctx, *gains, run.schedule, form);

    Matrix p = gibbs_map_all(state.scores, ctx.max_power);
    auto w = aggregate_interference(ctx.gains, p);
    double max_psi = 0.0;
    for (std::size_t s = 0; s < S; ++s)
      max_psi = std::max(max_psi, w[s] / ctx.i_max[s]);
    rec.max_psi_series.push_back(max_psi);

    double v_now = potential(ctx, p);
    if (run.schedule.kind == StepSchedule::Kind::Stc && !state.stc_switched) {
      v_window.push_back(v_now);
      if (v_window.size() > window_len)
        v_window.erase(v_window.begin());
      if (v_window.size() == window_len &&
          detect_oscillation(v_window, run.schedule.stc_alternations)) {
        state.stc_switched = true;
        state.stc_switch_iteration = n;
      }
    }

    rec.iterations_run = n;
    rec.final_powers = p;
    rec.final_potential = v_now;
    if (n % run.log_stride == 0 || n == run.max_iterations) {
      TrajectoryPoint tp = make_point(ctx, p, n, diag.gamma, diag.max_abs_increment);
      tp.potential = v_now;
      rec.trajectory.push_back(std::move(tp));
    }

    if (diag.max_abs_increment < run.power_change_tol)
      ++quiet_streak;
    else
      quiet_streak = 0;
    if (quiet_streak >= 10 && rec.first_convergence_iteration == 0) {
      rec.first_convergence_iteration = n;
      if (run.stop_on_convergence) {
        rec.reason = TerminationReason::Converged;
        return rec;
      }
    }
  }
  rec.reason = rec.first_convergence_iteration != 0 && run.stop_on_convergence
                   ? TerminationReason::Converged
                   : TerminationReason::MaxIters;
  return rec;
}

double bregman_divergence(const PowerProfile& p_ref, const PowerProfile& p,
                          const std::vector<double>& max_power) {
  if (p_ref.rows() != p.rows() || p_ref.cols() != p.cols())
    throw std::invalid_argument("bregman_divergence: shape mismatch");
  double total = 0.0;
  for (std::size_t k = 0; k < p.rows(); ++k) {
    double sum_ref = 0.0, sum_cur = 0.0;
    for (std::size_t s = 0; s < p.cols(); ++s) {
      double q_ref = p_ref(k, s) / max_power[k];
      double q = p(k, s) / max_power[k];
      if (!(q > 0.0))
        throw std::invalid_argument("bregman_divergence: profile on boundary");
      if (q_ref > 0.0) total += q_ref * std::log(q_ref / q);
      sum_ref += q_ref;
      sum_cur += q;
    }
    if (!(sum_cur < 1.0))
      throw std::invalid_argument("bregman_divergence: profile on boundary");
    double slack_ref = 1.0 - sum_ref;
    if (slack_ref > 0.0) total += slack_ref * std::log(slack_ref / (1.0 - sum_cur));
  }
  return total;
}

}  // namespace cogpow
