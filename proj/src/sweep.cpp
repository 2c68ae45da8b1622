#include "cogpow/sweep.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "cogpow/channel.hpp"
#include "cogpow/csv.hpp"
#include "cogpow/oracle.hpp"
#include "cogpow/units.hpp"

namespace cogpow {

using nlohmann::json;

NetworkConfig apply_sweep_param(const NetworkConfig& base, SweepSpec::Param param,
                                double value) {
  NetworkConfig cfg = base;
  switch (param) {
    case SweepSpec::Param::Lambda0:
      cfg.pricing.lambda0 = value;
      break;
    case SweepSpec::Param::LambdaK:
      cfg.pricing.lambda_k.assign(cfg.num_users, value);
      break;
    case SweepSpec::Param::IMaxDbm:
      cfg.i_max.assign(cfg.num_subcarriers, dbm_to_watt(value));
      break;
    case SweepSpec::Param::NumUsers: {
      auto k = static_cast<std::size_t>(value);
      if (k < 1) throw ConfigError("sweep.grid", "user counts must be >= 1");
      cfg.num_users = k;
      cfg.max_power.assign(k, base.max_power.front());
      cfg.pricing.lambda_k.assign(k, base.pricing.lambda_k.front());
      break;
    }
    case SweepSpec::Param::Gamma:
      cfg.run.schedule.gamma0 = value;
      break;
  }
  cfg.validate();
  return cfg;
}

std::uint64_t sweep_seed(std::uint64_t base_seed, std::size_t grid_index,
                         std::size_t replication) {
  std::uint64_t s = base_seed ^ (0x9E3779B97F4A7C15ull * (grid_index + 1)) ^
                    (0xC2B2AE3D27D4EB4Full * (replication + 1));
  return splitmix64(s);
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  if (spec.grid.empty()) throw ConfigError("sweep.grid", "must be nonempty");
  if (spec.replications < 1)
    throw ConfigError("sweep.replications", "must be >= 1");

  std::vector<SweepRow> rows;
  for (std::size_t gi = 0; gi < spec.grid.size(); ++gi) {
    for (std::size_t rep = 0; rep < spec.replications; ++rep) {
      SweepRow row;
      row.grid_value = spec.grid[gi];
      row.replication = rep;
      row.seed = sweep_seed(spec.base_seed, gi, rep);
      try {
        NetworkConfig cfg = apply_sweep_param(spec.base, spec.param, spec.grid[gi]);
        cfg.rng_seed = row.seed;
        Rng rng(cfg.rng_seed);

        RunRecord rec;
        GameContext ctx;
        if (cfg.channel.model == ChannelModel::FastFading) {
          FadingProcess process = make_fading_process(cfg, rng);
          ChannelRealization mean_ch{process.mean_gains(), process.pu_gain()};
          ctx = make_context(cfg, mean_ch);
          rec = run_learning(ctx, cfg.run, RunMode::Ergodic, &process);
        } else {
          ChannelRealization ch = make_static_channel(cfg, rng);
          ctx = make_context(cfg, ch);
          rec = run_learning(ctx, cfg.run, RunMode::Static);
        }

        row.reason = rec.reason;
        row.iterations = rec.iterations_run;
        row.first_convergence_iteration = rec.first_convergence_iteration;
        row.report = make_report(ctx, rec.final_powers);
        row.max_psi = row.report.psi.empty()
                          ? 0.0
                          : *std::max_element(row.report.psi.begin(),
                                              row.report.psi.end());
        row.final_potential = rec.final_potential;

        if (spec.certify) {
          auto gaps = best_response_gap(ctx, rec.final_powers);
          row.br_gap_max = *std::max_element(gaps.begin(), gaps.end());
        }
        if (spec.compute_eql) {
          PotentialExtrema ext = potential_extrema(ctx);
          row.eql_final = eql(rec.final_potential, ext.v_min, ext.v_max);
          row.eql_v_min_exact = ext.v_min_exact;
        }
      } catch (const std::exception& e) {
        row.status = std::string("error: ") + e.what();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_sweep_csv(const std::string& path, const SweepSpec& spec,
                     const std::vector<SweepRow>& rows) {
  CsvWriter csv(path);
  std::vector<std::string> header{
      "param_value", "replication",  "seed",
      "status",      "reason",       "iterations",
      "first_convergence_iteration", "psi_mean",
      "max_psi",     "su_sum_rate_nats", "su_sum_rate_bits",
      "pu_rate_nats", "revenue",     "total_su_power",
      "congestion_index", "final_potential"};
  if (spec.certify) header.push_back("br_gap_max");
  if (spec.compute_eql) {
    header.push_back("eql_final");
    header.push_back("eql_v_min_exact");
  }
  csv.raw_row(header);
  for (const auto& r : rows) {
    std::vector<std::string> cells{
        fmt_g(r.grid_value),
        std::to_string(r.replication),
        std::to_string(r.seed),
        r.status,
        r.reason == TerminationReason::Converged ? "converged" : "max_iters",
        std::to_string(r.iterations),
        std::to_string(r.first_convergence_iteration),
        fmt_g(r.report.psi_mean),
        fmt_g(r.max_psi),
        fmt_g(r.report.su_sum_rate_nats),
        fmt_g(r.report.su_sum_rate_bits),
        fmt_g(r.report.pu_rate_nats),
        fmt_g(r.report.revenue),
        fmt_g(r.report.total_su_power),
        fmt_g(r.report.congestion_index),
        fmt_g(r.final_potential)};
    if (spec.certify) cells.push_back(fmt_g(r.br_gap_max));
    if (spec.compute_eql) {
      cells.push_back(fmt_g(r.eql_final));
      cells.push_back(r.eql_v_min_exact ? "1" : "0");
    }
    csv.raw_row(cells);
  }
}

SweepSpec parse_sweep_spec(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("(sweep)", std::string("not valid JSON: ") + e.what());
  }
  SweepSpec spec;
  std::string param = doc.value("param", "");
  if (param == "lambda0")
    spec.param = SweepSpec::Param::Lambda0;
  else if (param == "lambda_k")
    spec.param = SweepSpec::Param::LambdaK;
  else if (param == "i_max_dbm")
    spec.param = SweepSpec::Param::IMaxDbm;
  else if (param == "num_users")
    spec.param = SweepSpec::Param::NumUsers;
  else if (param == "gamma")
    spec.param = SweepSpec::Param::Gamma;
  else
    throw ConfigError("sweep.param",
                      "expected lambda0 | lambda_k | i_max_dbm | num_users | gamma");

  if (!doc.contains("grid") || !doc["grid"].is_array() || doc["grid"].empty())
    throw ConfigError("sweep.grid", "must be a nonempty array");
  for (const auto& v : doc["grid"]) {
    if (!v.is_number()) throw ConfigError("sweep.grid", "entries must be numbers");
    spec.grid.push_back(v.get<double>());
  }
  spec.replications = doc.value("replications", 1u);
  spec.base_seed = doc.value("base_seed", 1u);
  spec.certify = doc.value("certify", false);
  spec.compute_eql = doc.value("compute_eql", false);

  if (doc.contains("scenario_file"))
    spec.base = load_scenario_file(doc["scenario_file"].get<std::string>());
  else if (doc.contains("scenario"))
    spec.base = load_scenario(doc["scenario"].dump());
  else
    throw ConfigError("sweep.scenario", "missing (inline object or scenario_file)");
  return spec;
}

}  // namespace cogpow
