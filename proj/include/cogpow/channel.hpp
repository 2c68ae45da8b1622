#pragma once

// Channel gain generation: uniform user placement over a square area with the
// receiver at the center, log-distance path loss with optional unit-mean
// exponential (Rayleigh-power) fading, and an i.i.d. fast-fading process for
// the ergodic regime. Everything is a pure function of (seed, config).

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "cogpow/config.hpp"
#include "cogpow/matrix.hpp"
#include "cogpow/rng.hpp"

namespace cogpow {

struct ChannelRealization {
  Matrix gains;        // K x S power gains g_ks = |h_ks|^2
  double pu_gain = 0;  // primary-user link gain at the receiver
};

struct Point {
  double x = 0;
  double y = 0;
};

struct PathLossParams {
  double exponent = 3.0;
  double reference_gain = 1.0;
  bool fading = true;
};

// K points i.i.d. uniform on [0, L]^2
std::vector<Point> place_users(Rng& rng, std::size_t num_users, double area_edge);

// g = reference_gain * d^(-exponent)
double path_loss_gain(double distance, const PathLossParams& params);

// Per-user, per-subcarrier gains for users at the given positions, receiver at
// the area center. With fading on, each entry carries an independent unit-mean
// exponential factor.
Matrix static_gains(const std::vector<Point>& positions, std::size_t num_subcarriers,
                    double area_edge, const PathLossParams& params, Rng& rng);

double pu_link_gain(double distance, const PathLossParams& params);

// Stationary i.i.d. fast fading around fixed large-scale mean gains.
class FadingProcess {
 public:
  enum class Distribution { RayleighIID, Degenerate };

  FadingProcess(Matrix mean_gains, double pu_gain, Distribution dist, Rng rng);

  ChannelRealization sample();
  const Matrix& mean_gains() const { return mean_gains_; }
  double pu_gain() const { return pu_gain_; }

 private:
  Matrix mean_gains_;
  double pu_gain_;
  Distribution dist_;
  Rng rng_;
};

// Scenario-level factories: placement, path loss and PU link derived from the
// config, all randomness drawn from `rng`.
ChannelRealization make_static_channel(const NetworkConfig& cfg, Rng& rng);
FadingProcess make_fading_process(const NetworkConfig& cfg, Rng& rng);

// CSV replay format: a "# pu_gain,<value>" comment line followed by one row
// per user, one column per subcarrier.
void write_channel_csv(std::ostream& out, const ChannelRealization& ch);
ChannelRealization read_channel_csv(std::istream& in);
void write_channel_csv_file(const std::string& path, const ChannelRealization& ch);
ChannelRealization read_channel_csv_file(const std::string& path);

}  // namespace cogpow
