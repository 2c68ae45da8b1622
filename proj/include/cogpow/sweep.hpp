#pragma once

// Sweep orchestration: grids over a pricing / tolerance / congestion / step
// parameter, independently seeded replications per grid point, optional
// oracle certification, and deterministic CSV emission.

#include <cstdint>
#include <string>
#include <vector>

#include "cogpow/config.hpp"
#include "cogpow/learning.hpp"
#include "cogpow/metrics.hpp"

namespace cogpow {

struct SweepSpec {
  enum class Param { Lambda0, LambdaK, IMaxDbm, NumUsers, Gamma };

  Param param = Param::Lambda0;
  std::vector<double> grid;
  std::size_t replications = 1;
  std::uint64_t base_seed = 1;
  NetworkConfig base;
  bool certify = false;      // per-row best-response gap via the oracle
  bool compute_eql = false;  // per-row final EQL (sampled V_min at scale)
};

struct SweepRow {
  double grid_value = 0.0;
  std::size_t replication = 0;
  std::uint64_t seed = 0;
  std::string status = "ok";  // or the error message
  TerminationReason reason = TerminationReason::MaxIters;
  std::uint64_t iterations = 0;
  std::uint64_t first_convergence_iteration = 0;
  MetricReport report;
  double max_psi = 0.0;
  double final_potential = 0.0;
  double br_gap_max = 0.0;  // certify only
  double eql_final = 0.0;   // compute_eql only
  bool eql_v_min_exact = false;
};

NetworkConfig apply_sweep_param(const NetworkConfig& base, SweepSpec::Param param,
                                double value);

// Stable per-(grid point, replication) seed derivation.
std::uint64_t sweep_seed(std::uint64_t base_seed, std::size_t grid_index,
                         std::size_t replication);

// Individual run failures are recorded in the row status; the sweep continues.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

void write_sweep_csv(const std::string& path, const SweepSpec& spec,
                     const std::vector<SweepRow>& rows);

// JSON sweep description for the CLI (see README for the schema).
SweepSpec parse_sweep_spec(const std::string& json_text);

}  // namespace cogpow
