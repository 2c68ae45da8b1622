// Command-line front end: single runs, parameter sweeps, oracle
// certification, the uniform baseline and the figure presets. Errors are
// reported as a JSON record on stderr with a nonzero exit code.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cogpow/channel.hpp"
#include "cogpow/csv.hpp"
#include "cogpow/figures.hpp"
#include "cogpow/metrics.hpp"
#include "cogpow/oracle.hpp"
#include "cogpow/sweep.hpp"
#include "cogpow/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace cogpow;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;  // 0 = keep the scenario seed
  std::string mode;        // "", "static" or "ergodic"
};

NetworkConfig load_with_overrides(const CommonArgs& args) {
  NetworkConfig cfg = load_scenario_file(args.config_path);
  if (args.seed != 0) cfg.rng_seed = args.seed;
  if (args.mode == "static") cfg.channel.model = ChannelModel::StaticPathLoss;
  if (args.mode == "ergodic") cfg.channel.model = ChannelModel::FastFading;
  return cfg;
}

void write_manifest(const std::string& out_dir, const std::string& command,
                    const NetworkConfig& cfg, std::vector<std::string> files) {
  json j;
  j["command"] = command;
  j["version"] = kVersion;
  j["seed"] = cfg.rng_seed;
  j["scenario_hash"] = scenario_hash(cfg);
  j["files"] = files;
  std::ofstream out(fs::path(out_dir) / "manifest.json");
  out << j.dump(2) << "\n";
}

void write_metrics_csv(const std::string& path, const MetricReport& rep,
                       const RunRecord* rec) {
  CsvWriter csv(path);
  std::vector<std::string> header{"psi_mean",        "max_psi",
                                  "su_sum_rate_nats", "su_sum_rate_bits",
                                  "pu_rate_nats",    "revenue",
                                  "total_su_power",  "congestion_index"};
  if (rec) {
    header.push_back("iterations");
    header.push_back("reason");
    header.push_back("first_convergence_iteration");
  }
  csv.raw_row(header);
  double max_psi = 0.0;
  for (double v : rep.psi) max_psi = std::max(max_psi, v);
  std::vector<std::string> cells{
      fmt_g(rep.psi_mean),         fmt_g(max_psi),
      fmt_g(rep.su_sum_rate_nats), fmt_g(rep.su_sum_rate_bits),
      fmt_g(rep.pu_rate_nats),     fmt_g(rep.revenue),
      fmt_g(rep.total_su_power),   fmt_g(rep.congestion_index)};
  if (rec) {
    cells.push_back(std::to_string(rec->iterations_run));
    cells.push_back(rec->reason == TerminationReason::Converged ? "converged"
                                                                : "max_iters");
    cells.push_back(std::to_string(rec->first_convergence_iteration));
  }
  csv.raw_row(cells);
}

json certificate_json(const GameContext& ctx, const EquilibriumCertificate& cert) {
  json j;
  j["v_star"] = cert.v_star;
  j["br_gap"] = cert.br_gap;
  j["kkt_residual"] = cert.kkt_residual;
  j["method"] = cert.method;
  j["converged"] = cert.converged;
  j["iterations"] = cert.iterations;
  PotentialExtrema ext = potential_extrema(ctx);
  j["v_min"] = ext.v_min;
  j["v_max"] = ext.v_max;
  j["v_min_exact"] = ext.v_min_exact;
  j["eql_of_p_star"] = eql(cert.v_star, ext.v_min, ext.v_max);
  return j;
}

int cmd_run(const CommonArgs& args, const std::string& channel_csv, bool certify) {
  NetworkConfig cfg = load_with_overrides(args);
  fs::create_directories(args.out_dir);
  Rng rng(cfg.rng_seed);

  std::vector<std::string> files;
  auto out = [&](const std::string& name) {
    std::string p = (fs::path(args.out_dir) / name).string();
    files.push_back(p);
    return p;
  };

  RunRecord rec;
  GameContext ctx;
  if (cfg.channel.model == ChannelModel::FastFading) {
    FadingProcess process = make_fading_process(cfg, rng);
    ChannelRealization mean_ch{process.mean_gains(), process.pu_gain()};
    ctx = make_context(cfg, mean_ch);
    write_channel_csv_file(out("channel.csv"), mean_ch);
    rec = run_learning(ctx, cfg.run, RunMode::Ergodic, &process);
  } else {
    ChannelRealization ch = channel_csv.empty() ? make_static_channel(cfg, rng)
                                                : read_channel_csv_file(channel_csv);
    ctx = make_context(cfg, ch);
    write_channel_csv_file(out("channel.csv"), ch);
    rec = run_learning(ctx, cfg.run, RunMode::Static);
  }

  write_trajectory_csv(out("trajectory.csv"), ctx, rec);
  write_matrix_csv(out("final_profile.csv"), rec.final_powers);
  write_metrics_csv(out("metrics.csv"), make_report(ctx, rec.final_powers), &rec);
  if (certify) {
    EquilibriumCertificate cert = maximize_potential(ctx);
    json j = certificate_json(ctx, cert);
    auto gaps = best_response_gap(ctx, rec.final_powers);
    j["run_br_gap"] = gaps;
    j["run_potential"] = rec.final_potential;
    std::ofstream cout_(out("certificate.json"));
    cout_ << j.dump(2) << "\n";
  }
  write_manifest(args.out_dir, "run", cfg, files);
  std::cout << "run: " << rec.iterations_run << " iterations, "
            << (rec.reason == TerminationReason::Converged ? "converged"
                                                           : "max_iters")
            << ", V = " << fmt_g(rec.final_potential) << "\n";
  return 0;
}

int cmd_sweep(const std::string& spec_path, const std::string& out_dir) {
  std::ifstream in(spec_path);
  if (!in) throw std::runtime_error("cannot open '" + spec_path + "'");
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  SweepSpec spec = parse_sweep_spec(text);
  fs::create_directories(out_dir);
  auto rows = run_sweep(spec);
  std::string csv_path = (fs::path(out_dir) / "sweep.csv").string();
  write_sweep_csv(csv_path, spec, rows);
  write_manifest(out_dir, "sweep", spec.base, {csv_path});
  std::size_t failed = 0;
  for (const auto& r : rows)
    if (r.status != "ok") ++failed;
  std::cout << "sweep: " << rows.size() << " rows, " << failed << " failed\n";
  return 0;
}

int cmd_oracle(const CommonArgs& args, const std::string& profile_csv) {
  NetworkConfig cfg = load_with_overrides(args);
  fs::create_directories(args.out_dir);
  Rng rng(cfg.rng_seed);
  ChannelRealization ch = make_static_channel(cfg, rng);
  GameContext ctx = make_context(cfg, ch);

  EquilibriumCertificate cert = maximize_potential(ctx);
  json j = certificate_json(ctx, cert);
  if (!profile_csv.empty()) {
    PowerProfile profile = read_matrix_csv<PowerProfile>(profile_csv);
    auto gaps = best_response_gap(ctx, profile);
    j["profile_br_gap"] = gaps;
    j["profile_potential"] = potential(ctx, profile);
    j["profile_kkt_residual"] = kkt_residual(ctx, profile);
  }
  std::string cert_path = (fs::path(args.out_dir) / "certificate.json").string();
  std::ofstream out(cert_path);
  out << j.dump(2) << "\n";
  write_matrix_csv((fs::path(args.out_dir) / "p_star.csv").string(), cert.p_star);
  write_manifest(args.out_dir, "oracle", cfg, {cert_path});
  std::cout << "oracle: V* = " << fmt_g(cert.v_star)
            << ", kkt_residual = " << fmt_g(cert.kkt_residual)
            << (cert.converged ? " (converged)" : " (NOT converged)") << "\n";
  return 0;
}

int cmd_baseline(const CommonArgs& args) {
  NetworkConfig cfg = load_with_overrides(args);
  fs::create_directories(args.out_dir);
  Rng rng(cfg.rng_seed);
  ChannelRealization ch = make_static_channel(cfg, rng);
  GameContext ctx = make_context(cfg, ch);
  auto [p, rep] = uniform_baseline(ctx);
  std::string metrics_path = (fs::path(args.out_dir) / "baseline.csv").string();
  write_metrics_csv(metrics_path, rep, nullptr);
  write_matrix_csv((fs::path(args.out_dir) / "baseline_profile.csv").string(), p);
  write_manifest(args.out_dir, "baseline", cfg, {metrics_path});
  std::cout << "baseline: sum rate " << fmt_g(rep.su_sum_rate_nats) << " nats, psi "
            << fmt_g(rep.psi_mean) << "\n";
  return 0;
}

int cmd_reproduce(const std::string& preset, const std::string& out_dir,
                  std::uint64_t seed, double scale) {
  FigureOutput out = reproduce_figure(preset, out_dir, seed, scale);
  std::cout << "reproduce " << preset << ": " << out.files.size()
            << " files in " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cost-aware power allocation over shared multi-carrier uplinks"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  CommonArgs args;
  std::string channel_csv, profile_csv, spec_path, preset;
  bool certify = false;
  double scale = 1.0;

  auto add_common = [&](CLI::App* sub, bool needs_config = true) {
    if (needs_config)
      sub->add_option("--config", args.config_path, "scenario JSON file")
          ->required();
    sub->add_option("--seed", args.seed, "override the scenario seed");
    sub->add_option("--out", args.out_dir, "output directory");
    sub->add_option("--mode", args.mode, "static or ergodic")
        ->check(CLI::IsMember({"static", "ergodic"}));
  };

  CLI::App* run = app.add_subcommand("run", "run the learning dynamics once");
  add_common(run);
  run->add_option("--channel-csv", channel_csv, "replay a saved channel matrix");
  run->add_flag("--certify", certify, "attach an oracle certificate");

  CLI::App* sweep = app.add_subcommand("sweep", "run a parameter sweep");
  sweep->add_option("--spec", spec_path, "sweep JSON file")->required();
  sweep->add_option("--out", args.out_dir, "output directory");

  CLI::App* oracle = app.add_subcommand("oracle", "certify a scenario / profile");
  add_common(oracle);
  oracle->add_option("--profile", profile_csv, "profile CSV to certify");

  CLI::App* baseline = app.add_subcommand("baseline", "uniform full-power baseline");
  add_common(baseline);

  CLI::App* reproduce =
      app.add_subcommand("reproduce", "run a figure preset (fig1..fig9)");
  reproduce->add_option("preset", preset, "fig1..fig9")->required();
  reproduce->add_option("--seed", args.seed, "preset seed");
  reproduce->add_option("--out", args.out_dir, "output directory");
  reproduce->add_option("--scale", scale, "shrink factor for CI runs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(args, channel_csv, certify);
    if (sweep->parsed()) return cmd_sweep(spec_path, args.out_dir);
    if (oracle->parsed()) return cmd_oracle(args, profile_csv);
    if (baseline->parsed()) return cmd_baseline(args);
    if (reproduce->parsed())
      return cmd_reproduce(preset, args.out_dir, args.seed ? args.seed : 42, scale);
  } catch (const std::exception& e) {
    json err;
    err["error"] = {{"type", "runtime"}, {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    return 1;
  }
  return 0;
}
