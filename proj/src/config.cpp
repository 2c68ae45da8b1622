#include "cogpow/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cogpow/units.hpp"

namespace cogpow {

using nlohmann::json;

namespace {

constexpr double kSpeedOfLight = 299792458.0;

const json& require_field(const json& obj, const std::string& path,
                          const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(path + "." + key, "missing");
  return *it;
}

double require_number(const json& obj, const std::string& path, const char* key) {
  const json& v = require_field(obj, path, key);
  if (!v.is_number()) throw ConfigError(path + "." + key, "expected a number");
  return v.get<double>();
}

double optional_number(const json& obj, const std::string& path, const char* key,
                       double fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number()) throw ConfigError(path + "." + key, "expected a number");
  return it->get<double>();
}

// numeric field that is either a scalar (uniform) or an array of length n
std::vector<double> broadcast_field(const json& v, const std::string& field,
                                    std::size_t n) {
  std::vector<double> out;
  if (v.is_number()) {
    out.assign(n, v.get<double>());
  } else if (v.is_array()) {
    if (v.size() != n)
      throw ConfigError(field, "array length " + std::to_string(v.size()) +
                                   " does not match expected " + std::to_string(n));
    for (const auto& e : v) {
      if (!e.is_number()) throw ConfigError(field, "expected numeric entries");
      out.push_back(e.get<double>());
    }
  } else {
    throw ConfigError(field, "expected a number or an array");
  }
  return out;
}

PriceModel parse_price_model(const json& v, const std::string& field) {
  if (!v.is_string()) throw ConfigError(field, "expected \"none\", \"lp\" or \"vp\"");
  std::string s = v.get<std::string>();
  if (s == "none") return PriceModel::None;
  if (s == "lp") return PriceModel::Lp;
  if (s == "vp") return PriceModel::Vp;
  throw ConfigError(field, "unknown pricing model '" + s + "'");
}

const char* price_model_name(PriceModel m) {
  switch (m) {
    case PriceModel::None: return "none";
    case PriceModel::Lp: return "lp";
    default: return "vp";
  }
}

StepSchedule parse_schedule(const json& v, const std::string& field) {
  StepSchedule s;
  if (!v.is_object()) throw ConfigError(field, "expected an object");
  std::string kind = v.value("kind", "power_law");
  if (kind == "constant") {
    s = StepSchedule::constant(optional_number(v, field, "gamma0", 0.5));
  } else if (kind == "power_law") {
    s = StepSchedule::power_law(optional_number(v, field, "gamma0", 0.5),
                                optional_number(v, field, "beta", 0.6));
  } else if (kind == "stc") {
    s = StepSchedule::stc(
        optional_number(v, field, "gamma_explore", 1.0),
        optional_number(v, field, "beta_converge", 0.6),
        static_cast<int>(optional_number(v, field, "window", 6)),
        static_cast<int>(optional_number(v, field, "alternations", 3)));
  } else {
    throw ConfigError(field + ".kind", "unknown schedule '" + kind + "'");
  }
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(field, e.what());
  }
  return s;
}

json schedule_to_json(const StepSchedule& s) {
  json j;
  switch (s.kind) {
    case StepSchedule::Kind::Constant:
      j["kind"] = "constant";
      j["gamma0"] = s.gamma0;
      break;
    case StepSchedule::Kind::PowerLaw:
      j["kind"] = "power_law";
      j["gamma0"] = s.gamma0;
      j["beta"] = s.beta;
      break;
    case StepSchedule::Kind::Stc:
      j["kind"] = "stc";
      j["gamma_explore"] = s.gamma0;
      j["beta_converge"] = s.stc_beta;
      j["window"] = s.stc_window;
      j["alternations"] = s.stc_alternations;
      break;
  }
  return j;
}

}  // namespace

void PricingSpec::validate(std::size_t num_users) const {
  if (lambda0 < 0.0) throw ConfigError("pricing.lambda0", "must be >= 0");
  if (lambda_k.size() != num_users)
    throw ConfigError("pricing.lambda_k", "needs one entry per user");
  for (double l : lambda_k)
    if (l < 0.0 || !std::isfinite(l))
      throw ConfigError("pricing.lambda_k", "entries must be finite and >= 0");
  if (user_model == PriceModel::Vp && user_basis == UserPriceBasis::Power)
    throw ConfigError("pricing.user_basis",
                      "violation pricing needs the interference basis (the "
                      "tolerance is an interference level, not a power)");
}

double ChannelParams::effective_reference_gain() const {
  if (reference_gain > 0.0) return reference_gain;
  // free-space gain at 1 m reference distance
  double wavelength = kSpeedOfLight / carrier_frequency_hz;
  double a = wavelength / (4.0 * M_PI);
  return a * a;
}

void NetworkConfig::validate() const {
  if (num_users < 1) throw ConfigError("network.users", "must be >= 1");
  if (num_subcarriers < 1) throw ConfigError("network.subcarriers", "must be >= 1");
  if (!(area_edge > 0.0)) throw ConfigError("network.area_m", "must be > 0");
  if (max_power.size() != num_users)
    throw ConfigError("radio.max_power_dbm", "needs one entry per user");
  for (double p : max_power)
    if (!(p > 0.0) || !std::isfinite(p))
      throw ConfigError("radio.max_power_dbm", "powers must be positive and finite");
  if (noise_power.size() != num_subcarriers)
    throw ConfigError("radio.noise_psd_dbm_hz", "needs one noise entry per subcarrier");
  for (double s : noise_power)
    if (!(s > 0.0) || !std::isfinite(s))
      throw ConfigError("radio.noise_psd_dbm_hz", "noise must be positive and finite");
  if (i_max.size() != num_subcarriers)
    throw ConfigError("pu.i_max_dbm", "needs one entry per subcarrier");
  for (double t : i_max)
    if (!(t > 0.0) || !std::isfinite(t))
      throw ConfigError("pu.i_max_dbm", "tolerances must be positive and finite");
  if (!(pu_power > 0.0)) throw ConfigError("pu.power_dbm", "must convert to > 0 W");
  if (pu_gain == 0.0 && !(pu_distance > 0.0))
    throw ConfigError("pu.distance_m", "must be > 0 when no explicit gain is given");
  if (!(channel.path_loss_exponent > 0.0))
    throw ConfigError("channel.path_loss_exponent", "must be > 0");
  if (channel.reference_gain < 0.0)
    throw ConfigError("channel.reference_gain", "must be >= 0");
  if (!(channel.carrier_frequency_hz > 0.0))
    throw ConfigError("channel.carrier_frequency_hz", "must be > 0");
  pricing.validate(num_users);
}

double NetworkConfig::effective_pu_gain() const {
  if (pu_gain > 0.0) return pu_gain;
  return channel.effective_reference_gain() *
         std::pow(pu_distance, -channel.path_loss_exponent);
}

NetworkConfig load_scenario(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("(document)", std::string("not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("(document)", "top level must be an object");

  NetworkConfig cfg;

  const json& network = require_field(doc, "", "network");
  cfg.num_users = static_cast<std::size_t>(require_number(network, "network", "users"));
  cfg.num_subcarriers =
      static_cast<std::size_t>(require_number(network, "network", "subcarriers"));
  cfg.area_edge = require_number(network, "network", "area_m");
  if (cfg.num_users < 1) throw ConfigError("network.users", "must be >= 1");
  if (cfg.num_subcarriers < 1) throw ConfigError("network.subcarriers", "must be >= 1");

  const json& radio = require_field(doc, "", "radio");
  {
    const json& p = require_field(radio, "radio", "max_power_dbm");
    auto dbm = broadcast_field(p, "radio.max_power_dbm", cfg.num_users);
    for (double d : dbm) cfg.max_power.push_back(dbm_to_watt(d));
  }
  {
    double psd = require_number(radio, "radio", "noise_psd_dbm_hz");
    double bw = require_number(radio, "radio", "bandwidth_hz");
    if (!(bw > 0.0)) throw ConfigError("radio.bandwidth_hz", "must be > 0");
    double noise_w = noise_power_watt(psd, bw);
    cfg.noise_power.assign(cfg.num_subcarriers, noise_w);
    if (auto it = radio.find("noise_total_dbm_override"); it != radio.end()) {
      auto dbm = broadcast_field(*it, "radio.noise_total_dbm_override",
                                 cfg.num_subcarriers);
      for (std::size_t s = 0; s < dbm.size(); ++s)
        cfg.noise_power[s] = dbm_to_watt(dbm[s]);
    }
  }

  const json& pu = require_field(doc, "", "pu");
  cfg.pu_power = dbm_to_watt(require_number(pu, "pu", "power_dbm"));
  cfg.pu_distance = optional_number(pu, "pu", "distance_m", 0.0);
  cfg.pu_gain = optional_number(pu, "pu", "gain", 0.0);
  {
    const json& t = require_field(pu, "pu", "i_max_dbm");
    auto dbm = broadcast_field(t, "pu.i_max_dbm", cfg.num_subcarriers);
    for (double d : dbm) cfg.i_max.push_back(dbm_to_watt(d));
  }

  cfg.pricing.lambda_k.assign(cfg.num_users, 0.0);
  if (auto it = doc.find("pricing"); it != doc.end()) {
    const json& pr = *it;
    if (auto f = pr.find("flat"); f != pr.end())
      cfg.pricing.flat_model = parse_price_model(*f, "pricing.flat");
    if (auto u = pr.find("user"); u != pr.end())
      cfg.pricing.user_model = parse_price_model(*u, "pricing.user");
    if (auto b = pr.find("user_basis"); b != pr.end()) {
      std::string s = b->is_string() ? b->get<std::string>() : "";
      if (s == "interference")
        cfg.pricing.user_basis = UserPriceBasis::Interference;
      else if (s == "power")
        cfg.pricing.user_basis = UserPriceBasis::Power;
      else
        throw ConfigError("pricing.user_basis", "expected \"interference\" or \"power\"");
    }
    cfg.pricing.lambda0 = optional_number(pr, "pricing", "lambda0", 0.0);
    if (auto l = pr.find("lambda_k"); l != pr.end())
      cfg.pricing.lambda_k = broadcast_field(*l, "pricing.lambda_k", cfg.num_users);
  }

  if (auto it = doc.find("channel"); it != doc.end()) {
    const json& ch = *it;
    if (auto m = ch.find("model"); m != ch.end()) {
      std::string s = m->is_string() ? m->get<std::string>() : "";
      if (s == "static_path_loss")
        cfg.channel.model = ChannelModel::StaticPathLoss;
      else if (s == "fast_fading")
        cfg.channel.model = ChannelModel::FastFading;
      else
        throw ConfigError("channel.model",
                          "expected \"static_path_loss\" or \"fast_fading\"");
    }
    cfg.channel.path_loss_exponent =
        optional_number(ch, "channel", "path_loss_exponent", 3.0);
    cfg.channel.reference_gain = optional_number(ch, "channel", "reference_gain", 0.0);
    cfg.channel.carrier_frequency_hz =
        optional_number(ch, "channel", "carrier_frequency_hz", 2.4e9);
    if (auto f = ch.find("static_fading"); f != ch.end()) {
      if (!f->is_boolean()) throw ConfigError("channel.static_fading", "expected a bool");
      cfg.channel.static_fading = f->get<bool>();
    }
  }

  if (auto it = doc.find("run"); it != doc.end()) {
    const json& run = *it;
    cfg.rng_seed = static_cast<std::uint64_t>(optional_number(run, "run", "seed", 1));
    cfg.run.max_iterations =
        static_cast<std::uint64_t>(optional_number(run, "run", "iterations", 20000));
    cfg.run.log_stride =
        static_cast<std::uint64_t>(optional_number(run, "run", "log_stride", 1));
    if (cfg.run.log_stride < 1) throw ConfigError("run.log_stride", "must be >= 1");
    cfg.run.power_change_tol =
        optional_number(run, "run", "power_change_tol", cfg.run.power_change_tol);
    cfg.run.br_gap_tol = optional_number(run, "run", "br_gap_tol", cfg.run.br_gap_tol);
    if (auto st = run.find("stop_on_convergence"); st != run.end()) {
      if (!st->is_boolean())
        throw ConfigError("run.stop_on_convergence", "expected a bool");
      cfg.run.stop_on_convergence = st->get<bool>();
    }
    if (auto sc = run.find("step_schedule"); sc != run.end())
      cfg.run.schedule = parse_schedule(*sc, "run.step_schedule");
  }

  cfg.validate();
  return cfg;
}

NetworkConfig load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("(document)", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_scenario(ss.str());
}

std::string canonical_scenario(const NetworkConfig& cfg) {
  json j;
  j["network"] = {{"users", cfg.num_users},
                  {"subcarriers", cfg.num_subcarriers},
                  {"area_m", cfg.area_edge}};
  j["max_power_w"] = cfg.max_power;
  j["noise_power_w"] = cfg.noise_power;
  j["i_max_w"] = cfg.i_max;
  j["pu"] = {{"power_w", cfg.pu_power},
             {"distance_m", cfg.pu_distance},
             {"gain", cfg.effective_pu_gain()}};
  j["pricing"] = {{"flat", price_model_name(cfg.pricing.flat_model)},
                  {"user", price_model_name(cfg.pricing.user_model)},
                  {"user_basis", cfg.pricing.user_basis == UserPriceBasis::Interference
                                     ? "interference"
                                     : "power"},
                  {"lambda0", cfg.pricing.lambda0},
                  {"lambda_k", cfg.pricing.lambda_k}};
  j["channel"] = {
      {"model", cfg.channel.model == ChannelModel::StaticPathLoss ? "static_path_loss"
                                                                  : "fast_fading"},
      {"path_loss_exponent", cfg.channel.path_loss_exponent},
      {"reference_gain", cfg.channel.effective_reference_gain()},
      {"static_fading", cfg.channel.static_fading}};
  j["run"] = {{"seed", cfg.rng_seed},
              {"iterations", cfg.run.max_iterations},
              {"log_stride", cfg.run.log_stride},
              {"power_change_tol", cfg.run.power_change_tol},
              {"br_gap_tol", cfg.run.br_gap_tol},
              {"stop_on_convergence", cfg.run.stop_on_convergence},
              {"step_schedule", schedule_to_json(cfg.run.schedule)}};
  return j.dump();
}

std::uint64_t scenario_hash(const NetworkConfig& cfg) {
  std::string s = canonical_scenario(cfg);
  std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string default_scenario_json() {
  return R"({
  "network": {"users": 10, "subcarriers": 10, "area_m": 200.0},
  "radio": {"max_power_dbm": 21.03, "noise_psd_dbm_hz": -173.0, "bandwidth_hz": 10930.0},
  "pu": {"power_dbm": 30.0, "distance_m": 50.0, "i_max_dbm": -70.0},
  "pricing": {"flat": "vp", "user": "none", "lambda0": 2.0, "lambda_k": 0.0},
  "channel": {"model": "static_path_loss", "path_loss_exponent": 3.0, "static_fading": true},
  "run": {"seed": 42, "iterations": 20000, "log_stride": 1, "power_change_tol": 0.005,
          "step_schedule": {"kind": "power_law", "gamma0": 0.005, "beta": 0.6}}
})";
}

}  // namespace cogpow
