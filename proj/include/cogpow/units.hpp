#pragma once

// dB-domain units appear only at the configuration and reporting boundaries;
// everything past load_scenario computes in linear watts.

#include <cmath>
#include <stdexcept>

namespace cogpow {

inline double dbm_to_watt(double dbm) {
  if (!std::isfinite(dbm)) throw std::invalid_argument("dbm_to_watt: non-finite input");
  return std::pow(10.0, dbm / 10.0) * 1e-3;
}

inline double watt_to_dbm(double watt) {
  if (!(watt > 0.0)) throw std::invalid_argument("watt_to_dbm: input must be positive");
  return 10.0 * std::log10(watt * 1e3);
}

// total noise power over a band from a spectral density in dBm/Hz
inline double noise_power_watt(double psd_dbm_hz, double bandwidth_hz) {
  if (!(bandwidth_hz > 0.0))
    throw std::invalid_argument("noise_power_watt: bandwidth must be positive");
  return dbm_to_watt(psd_dbm_hz + 10.0 * std::log10(bandwidth_hz));
}

inline double nats_to_bits(double nats) { return nats / std::log(2.0); }

}  // namespace cogpow
