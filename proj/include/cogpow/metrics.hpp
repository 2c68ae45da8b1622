#pragma once

// Reporting-layer quantities: the violation index, the equilibration level,
// the uniform full-power baseline, and the flat snapshot/record CSV schemas.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cogpow/game.hpp"
#include "cogpow/learning.hpp"

namespace cogpow {

struct ViolationIndex {
  std::vector<double> psi;  // w_s / I_max_s
  double mean = 0.0;
};

ViolationIndex violation_index(const std::vector<double>& w,
                               const std::vector<double>& i_max);

// (v_n - v_min) / (v_max - v_min); 1 at equilibrium
double eql(double v_n, double v_min, double v_max);

struct MetricReport {
  std::vector<double> psi;
  double psi_mean = 0.0;
  double su_sum_rate_nats = 0.0;
  double su_sum_rate_bits = 0.0;
  double pu_rate_nats = 0.0;
  double revenue = 0.0;
  double total_su_power = 0.0;
  double congestion_index = 0.0;  // K / S
};

MetricReport make_report(const GameContext& ctx, const PowerProfile& p);

// p_ks = P_k / S for every k, s: full power spread uniformly, ignoring the
// primary user's requirements.
std::pair<PowerProfile, MetricReport> uniform_baseline(const GameContext& ctx);

// Flat per-iteration record: iteration, V, per-user rate/cost/utility,
// per-subcarrier w and psi.
std::vector<std::string> snapshot_csv_header(std::size_t num_users,
                                             std::size_t num_subcarriers);
std::vector<double> snapshot_csv_row(std::uint64_t iteration, const GameContext& ctx,
                                     const GameSnapshot& snap);

void write_trajectory_csv(const std::string& path, const GameContext& ctx,
                          const RunRecord& rec);

}  // namespace cogpow
