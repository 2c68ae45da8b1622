#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>

#include "cogpow/config.hpp"
#include "cogpow/units.hpp"

using namespace cogpow;
using doctest::Approx;

TEST_CASE("dbm to watt conversions") {
  CHECK(dbm_to_watt(30.0) == Approx(1.0).epsilon(1e-15));
  CHECK(dbm_to_watt(0.0) == Approx(1e-3).epsilon(1e-15));
  // hand oracle: 10^(21.03/10) * 1e-3
  CHECK(dbm_to_watt(21.03) == Approx(0.12676518658578456).epsilon(1e-12));
  CHECK(dbm_to_watt(-70.0) == Approx(1e-10).epsilon(1e-12));
  CHECK_THROWS(dbm_to_watt(std::nan("")));
  CHECK_THROWS(dbm_to_watt(std::numeric_limits<double>::infinity()));
}

TEST_CASE("watt to dbm round trip") {
  for (double expo = -20.0; expo <= 3.0; expo += 0.37) {
    double w = std::pow(10.0, expo);
    CHECK(dbm_to_watt(watt_to_dbm(w)) == Approx(w).epsilon(1e-12));
  }
  CHECK_THROWS(watt_to_dbm(0.0));
  CHECK_THROWS(watt_to_dbm(-1.0));
}

TEST_CASE("noise power from spectral density") {
  // hand oracle: -173 + 10 log10(10930) = -132.6138 dBm
  CHECK(noise_power_watt(-173.0, 10930.0) ==
        Approx(5.477976463546086e-17).epsilon(1e-12));
  CHECK(noise_power_watt(-173.0, 1.0) == Approx(dbm_to_watt(-173.0)).epsilon(1e-15));
  CHECK(noise_power_watt(0.0, 10.0) == Approx(1e-2).epsilon(1e-14));
  CHECK_THROWS(noise_power_watt(-173.0, 0.0));
  CHECK_THROWS(noise_power_watt(-173.0, -5.0));
}

TEST_CASE("stock scenario carries the documented defaults") {
  NetworkConfig cfg = load_scenario(default_scenario_json());
  CHECK(cfg.num_users == 10);
  CHECK(cfg.num_subcarriers == 10);
  CHECK(cfg.area_edge == 200.0);
  CHECK(cfg.max_power.size() == 10);
  CHECK(cfg.max_power[0] == Approx(0.12676518658578456).epsilon(1e-12));
  CHECK(cfg.noise_power[0] == Approx(5.477976463546086e-17).epsilon(1e-12));
  for (double t : cfg.i_max) CHECK(t == Approx(1e-10).epsilon(1e-12));
  CHECK(cfg.pu_power == Approx(1.0).epsilon(1e-15));
  CHECK(cfg.pu_distance == 50.0);
  CHECK(cfg.rng_seed == 42);
  CHECK(cfg.pricing.flat_model == PriceModel::Vp);
  CHECK(cfg.pricing.lambda0 == 2.0);
}

TEST_CASE("missing noise field is reported by name") {
  std::string doc = R"({
    "network": {"users": 2, "subcarriers": 2, "area_m": 100.0},
    "radio": {"max_power_dbm": 20.0, "bandwidth_hz": 1000.0},
    "pu": {"power_dbm": 30.0, "distance_m": 50.0, "i_max_dbm": -70.0}
  })";
  try {
    load_scenario(doc);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.field_name).find("noise") != std::string::npos);
  }
}

TEST_CASE("validation rejects bad values with field names") {
  auto doc = [](const std::string& network, const std::string& extra) {
    return std::string(R"({"network": )") + network +
           R"(, "radio": {"max_power_dbm": 20.0, "noise_psd_dbm_hz": -173.0,
               "bandwidth_hz": 1000.0},
             "pu": {"power_dbm": 30.0, "distance_m": 50.0, "i_max_dbm": -70.0})" +
           extra + "}";
  };
  CHECK_THROWS_AS(load_scenario(doc(R"({"users": 0, "subcarriers": 2, "area_m": 10.0})", "")),
                  ConfigError);
  CHECK_THROWS_AS(load_scenario(doc(R"({"users": 2, "subcarriers": 0, "area_m": 10.0})", "")),
                  ConfigError);
  CHECK_THROWS_AS(
      load_scenario(doc(R"({"users": 2, "subcarriers": 2, "area_m": 10.0})",
                        R"(, "pricing": {"lambda0": -1.0})")),
      ConfigError);
  // malformed JSON
  CHECK_THROWS_AS(load_scenario("{nope"), ConfigError);
}

TEST_CASE("per-index overrides") {
  std::string doc = R"({
    "network": {"users": 3, "subcarriers": 2, "area_m": 100.0},
    "radio": {"max_power_dbm": [20.0, 21.0, 22.0], "noise_psd_dbm_hz": -173.0,
              "bandwidth_hz": 1000.0},
    "pu": {"power_dbm": 30.0, "distance_m": 50.0, "i_max_dbm": [-70.0, -75.6]},
    "pricing": {"flat": "lp", "lambda0": 1.5, "lambda_k": [0.1, 0.2, 0.3]}
  })";
  NetworkConfig cfg = load_scenario(doc);
  CHECK(cfg.max_power[1] == Approx(dbm_to_watt(21.0)));
  CHECK(cfg.i_max[1] == Approx(dbm_to_watt(-75.6)));
  CHECK(cfg.pricing.lambda_k[2] == 0.3);

  // wrong length
  std::string bad = doc;
  bad.replace(bad.find("[20.0, 21.0, 22.0]"), 18, "[20.0, 21.0]");
  CHECK_THROWS_AS(load_scenario(bad), ConfigError);
}

TEST_CASE("scenario loading is deterministic") {
  NetworkConfig a = load_scenario(default_scenario_json());
  NetworkConfig b = load_scenario(default_scenario_json());
  CHECK(canonical_scenario(a) == canonical_scenario(b));
  CHECK(scenario_hash(a) == scenario_hash(b));
  // a changed field changes the hash
  b.pricing.lambda0 += 1.0;
  CHECK(scenario_hash(a) != scenario_hash(b));
}

TEST_CASE("schedule parsing and validation") {
  std::string doc = R"({
    "network": {"users": 1, "subcarriers": 1, "area_m": 100.0},
    "radio": {"max_power_dbm": 20.0, "noise_psd_dbm_hz": -173.0, "bandwidth_hz": 1000.0},
    "pu": {"power_dbm": 30.0, "distance_m": 50.0, "i_max_dbm": -70.0},
    "run": {"seed": 7, "iterations": 100,
            "step_schedule": {"kind": "stc", "gamma_explore": 2.0,
                              "beta_converge": 0.7, "window": 8}}
  })";
  NetworkConfig cfg = load_scenario(doc);
  CHECK(cfg.run.schedule.kind == StepSchedule::Kind::Stc);
  CHECK(cfg.run.schedule.gamma0 == 2.0);
  CHECK(cfg.run.schedule.stc_beta == 0.7);
  CHECK(cfg.run.schedule.stc_window == 8);

  StepSchedule bad = StepSchedule::power_law(1.0, 0.4);  // beta below 1/2
  CHECK_THROWS(bad.validate());
  CHECK_THROWS(StepSchedule::power_law(-1.0, 0.6).validate());
}

TEST_CASE("derived reference gain and pu gain") {
  NetworkConfig cfg = load_scenario(default_scenario_json());
  // free-space gain at 1 m for 2.4 GHz, then d^-3 to the primary receiver
  double lambda_w = 299792458.0 / 2.4e9;
  double c0 = std::pow(lambda_w / (4.0 * M_PI), 2.0);
  CHECK(cfg.channel.effective_reference_gain() == Approx(c0).epsilon(1e-14));
  CHECK(cfg.effective_pu_gain() == Approx(c0 * std::pow(50.0, -3.0)).epsilon(1e-14));
}

TEST_CASE("nats to bits") {
  CHECK(nats_to_bits(std::log(2.0)) == Approx(1.0).epsilon(1e-14));
}
