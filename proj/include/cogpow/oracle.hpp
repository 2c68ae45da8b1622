#pragma once

// Equilibrium certification, independent of the learning dynamics: direct
// concave maximization of the potential over the product of corner-of-cube
// polytopes, exact per-user best responses (one-dimensional root finding on
// the separable utility), KKT residuals, brute-force grid search for desk
// sizes, and the potential extrema feeding the equilibration level.

#include <cstdint>
#include <string>
#include <vector>

#include "cogpow/game.hpp"

namespace cogpow {

// Euclidean projection onto {x >= 0, sum x <= cap}, in place.
void project_corner_of_cube(double* x, std::size_t n, double cap);

struct OracleOptions {
  double tol = 1e-9;             // natural-map residual, relative to P_k
  std::uint64_t max_iters = 20000;
  bool br_polish = true;         // exact best-response sweeps after the ascent
  std::uint64_t polish_sweeps = 200;
  double certify_tol = 1e-6;     // kkt residual threshold for `converged`
};

struct EquilibriumCertificate {
  PowerProfile p_star;
  double v_star = 0.0;
  std::vector<double> br_gap;
  double kkt_residual = 0.0;
  std::string method;
  bool converged = false;
  std::uint64_t iterations = 0;
};

// Maximize the concave potential over the feasible set. Deterministic given
// the start point (default: the uniform interior profile). Non-convergence
// within the budget is reported through `converged` and the certificate
// fields, never silently.
EquilibriumCertificate maximize_potential(const GameContext& ctx,
                                          const OracleOptions& opts = {},
                                          const PowerProfile* start = nullptr);

// Exact best response of user k against p_{-k}, and the utility improvement
// it yields.
PowerProfile best_response(const GameContext& ctx, const PowerProfile& p,
                           std::size_t k);
std::vector<double> best_response_gap(const GameContext& ctx, const PowerProfile& p);

// Max violation of the first-order stationarity / complementarity conditions,
// in power-weighted utility units. Uses subgradient intervals, so a profile
// sitting exactly on a violation-price kink certifies cleanly.
double kkt_residual(const GameContext& ctx, const PowerProfile& p,
                    double active_tol = 1e-9, double kink_tol = 1e-9);

// Exhaustive grid maximization of the potential. Grid levels along every
// coordinate are multiples of grid_step, plus the power cap itself. Throws
// (with the size estimate) when the joint grid exceeds max_evaluations.
PowerProfile brute_force_ne(const GameContext& ctx, double grid_step,
                            std::uint64_t max_evaluations = std::uint64_t{1} << 26);

struct PotentialExtrema {
  double v_min = 0.0;
  double v_max = 0.0;
  bool v_min_exact = true;  // false when the vertex set was sampled
  std::uint64_t vertices_evaluated = 0;
};

// V_max from the concave maximizer; V_min over the vertices of the feasible
// set (exact enumeration up to `exact_budget` vertices, uniform sampling with
// the given seed beyond that, flagged in the result).
PotentialExtrema potential_extrema(const GameContext& ctx,
                                   std::uint64_t exact_budget = std::uint64_t{1} << 20,
                                   std::uint64_t sample_count = 100000,
                                   std::uint64_t seed = 0x5EED);

// Empirical uniqueness check: maximize the potential from n_starts random
// interior starts and return the maximum pairwise L-infinity distance between
// the endpoints.
double verify_uniqueness(const GameContext& ctx, std::size_t n_starts,
                         std::uint64_t seed, const OracleOptions& opts = {});

// u_k at the profile (rate minus cost), used by the certification routines.
double user_utility(const GameContext& ctx, const PowerProfile& p, std::size_t k);

// Sample-average proxy of the ergodic potential over a frozen set of fading
// draws. Using common draws for the value, the maximizer and the vertex
// minimum makes the ergodic equilibration level a consistent ratio.
class SampledErgodicPotential {
 public:
  SampledErgodicPotential(GameContext base, FadingProcess process,
                          std::uint64_t n_draws);

  double value(const PowerProfile& p) const;
  Matrix gradient(const PowerProfile& p) const;  // averaged marginals

  // Projected-ascent maximum of the sample average (deterministic).
  double maximum(double tol = 1e-9, std::uint64_t max_iters = 5000) const;
  // Exact minimum over the (S+1)^K feasible-set vertices.
  double vertex_minimum() const;

  const GameContext& base() const { return base_; }

 private:
  GameContext base_;
  std::vector<Matrix> draws_;
};

}  // namespace cogpow
