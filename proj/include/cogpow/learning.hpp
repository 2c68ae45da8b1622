#pragma once

// Distributed exponential learning: scores ascend the marginal utilities and
// the exponential regularization map turns scores into strictly feasible
// powers. Works unchanged on a fixed channel or with a fresh fading draw per
// iteration.

#include <cstdint>
#include <span>
#include <vector>

#include "cogpow/game.hpp"
#include "cogpow/matrix.hpp"
#include "cogpow/schedule.hpp"

namespace cogpow {

// p_ks = P_k exp(y_ks) / (1 + sum_r exp(y_kr)), evaluated with a max shift so
// arbitrarily large scores cannot overflow. Output powers are strictly
// positive (up to floating-point underflow at extreme score spreads) and sum
// to strictly less than P_k.
void gibbs_map(std::span<const double> scores, double max_power,
               std::span<double> powers_out);
Matrix gibbs_map_all(const Matrix& scores, const std::vector<double>& max_power);

// Exactly the quantities user k can obtain locally in one iteration: own
// gains, own powers, own measured SINR, the public noise floor and tolerance
// profile, and the agreed pricing terms. The score update reads nothing else.
struct UserMeasurements {
  std::span<const double> own_gains;
  std::span<const double> own_powers;
  std::span<const double> own_sinr;
  std::span<const double> noise;
  std::span<const double> i_max;
  const PricingSpec* pricing = nullptr;
  std::size_t user_index = 0;
};

enum class MarginalForm {
  Measured,  // (1/p) sinr/(1+sinr) rate term, as measured over the air
  Direct,    // algebraically equal g/(sigma^2 + w) form
};

// Marginal utility vector of one user from local measurements only.
void user_marginals(const UserMeasurements& m, MarginalForm form,
                    std::span<double> v_out);

// y_k += gamma * v_k; returns max_s |gamma * v_ks|
double score_update(std::span<double> scores_k, std::span<const double> v_k,
                    double gamma);

struct LearningState {
  Matrix scores;             // K x S, zero-initialized
  std::uint64_t iteration = 0;
  // search-then-converge bookkeeping
  bool stc_switched = false;
  std::uint64_t stc_switch_iteration = 0;

  LearningState(std::size_t users, std::size_t subcarriers)
      : scores(users, subcarriers) {}
};

// Step size for iteration n (1-based) under the schedule; STC decay starts
// after the state records a switch.
double step_size(const StepSchedule& sched, const LearningState& st, std::uint64_t n);

// Sliding-window oscillation test on a scalar series (typically the
// potential): true when the sign of successive differences alternates at
// least `min_alternations` times within the window. Differences smaller than
// flat_tol in magnitude count as converged, not oscillating. Window must hold
// at least 4 values.
bool detect_oscillation(std::span<const double> window, int min_alternations = 3,
                        double flat_tol = 1e-12);

struct StepDiagnostics {
  double max_abs_increment = 0.0;  // max |gamma v|
  double gamma = 0.0;
};

// One full iteration on the given channel gains: powers from scores, SINR,
// marginals, score ascent. Updates state in place.
StepDiagnostics xl_step(LearningState& state, const GameContext& ctx,
                        const Matrix& gains, const StepSchedule& sched,
                        MarginalForm form = MarginalForm::Direct);

enum class RunMode { Static, Ergodic };
enum class TerminationReason { Converged, MaxIters };

struct TrajectoryPoint {
  std::uint64_t iteration = 0;
  double potential = 0.0;
  double max_psi = 0.0;
  double sum_rate = 0.0;
  double gamma = 0.0;
  double max_abs_increment = 0.0;
  PowerProfile powers;
  std::vector<double> w;
};

struct RunRecord {
  std::vector<TrajectoryPoint> trajectory;  // every log_stride iterations
  std::vector<double> max_psi_series;       // every iteration
  TerminationReason reason = TerminationReason::MaxIters;
  std::uint64_t iterations_run = 0;
  std::uint64_t first_convergence_iteration = 0;  // 0 = proxy never fired
  PowerProfile final_powers;
  double final_potential = 0.0;
};

// Run the learning dynamics to termination. In Ergodic mode a fading process
// must be supplied; one fresh draw is consumed per iteration. The convergence
// proxy declares the run converged once max_{k,s} |gamma_n v_ks| stays below
// run.power_change_tol for 10 consecutive iterations.
RunRecord run_learning(const GameContext& ctx, const RunSettings& run,
                       RunMode mode = RunMode::Static,
                       FadingProcess* fading = nullptr,
                       MarginalForm form = MarginalForm::Direct);

// Entropy-induced divergence between feasible profiles, summed over users
// with powers normalized by P_k; zero iff the profiles coincide. p must be
// strictly interior (the reference profile may touch the boundary).
double bregman_divergence(const PowerProfile& p_ref, const PowerProfile& p,
                          const std::vector<double>& max_power);

}  // namespace cogpow
