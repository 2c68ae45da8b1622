#pragma once

// Scenario loading and validation. The scenario document is JSON with nested
// sections (network / radio / pu / pricing / channel / run); the full schema
// is documented in the README. load_scenario converts every dB-domain field
// to linear watts and validates invariants, so downstream modules never see
// mixed units.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cogpow/schedule.hpp"

namespace cogpow {

struct ConfigError : std::runtime_error {
  ConfigError(const std::string& field, const std::string& what)
      : std::runtime_error("scenario field '" + field + "': " + what),
        field_name(field) {}
  std::string field_name;
};

enum class PriceModel { None, Lp, Vp };

// Per-user prices can be charged on the interference the user causes
// (lambda_k * g_ks * p_ks / I_max_s, mirroring the flat-rate structure) or on
// raw radiated power (lambda_k * p_ks / P_k).
enum class UserPriceBasis { Interference, Power };

struct PricingSpec {
  PriceModel flat_model = PriceModel::None;
  PriceModel user_model = PriceModel::None;
  UserPriceBasis user_basis = UserPriceBasis::Interference;
  double lambda0 = 0.0;
  std::vector<double> lambda_k;  // one entry per user

  void validate(std::size_t num_users) const;
};

enum class ChannelModel { StaticPathLoss, FastFading };

struct ChannelParams {
  ChannelModel model = ChannelModel::StaticPathLoss;
  double path_loss_exponent = 3.0;
  double reference_gain = 0.0;  // 0 = derive from carrier frequency
  double carrier_frequency_hz = 2.4e9;
  bool static_fading = true;  // multiply static gains by a unit-mean draw

  double effective_reference_gain() const;
};

struct RunSettings {
  std::uint64_t max_iterations = 20000;
  std::uint64_t log_stride = 1;
  double power_change_tol = 1e-2;   // convergence proxy on max |gamma * v|
  double br_gap_tol = 1e-3;         // certification tolerance
  bool stop_on_convergence = true;  // otherwise run to max_iterations
  StepSchedule schedule;
};

struct NetworkConfig {
  std::size_t num_users = 0;
  std::size_t num_subcarriers = 0;
  std::vector<double> max_power;    // W, per user
  std::vector<double> noise_power;  // W, per subcarrier
  std::vector<double> i_max;        // W, per subcarrier
  PricingSpec pricing;
  double pu_power = 0.0;     // W
  double pu_distance = 0.0;  // m
  double pu_gain = 0.0;      // 0 = derive from distance and path loss
  double area_edge = 0.0;    // m
  ChannelParams channel;
  std::uint64_t rng_seed = 1;
  RunSettings run;

  void validate() const;
  double effective_pu_gain() const;
};

// Parse and validate a scenario document. Throws ConfigError with the
// offending field name on any schema or invariant violation.
NetworkConfig load_scenario(const std::string& json_text);
NetworkConfig load_scenario_file(const std::string& path);

// Canonical serialization (linear units) and a stable content hash of it,
// used by the output manifests.
std::string canonical_scenario(const NetworkConfig& cfg);
std::uint64_t scenario_hash(const NetworkConfig& cfg);

// The stock scenario shipped with the repository: 10 users, 10 subcarriers,
// 200 m square area, 21.03 dBm user power cap, -173 dBm/Hz noise over
// 10.93 kHz, 30 dBm primary transmitter at 50 m, -70 dBm interference cap.
std::string default_scenario_json();

}  // namespace cogpow
