#include "cogpow/channel.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cogpow {

std::vector<Point> place_users(Rng& rng, std::size_t num_users, double area_edge) {
  if (!(area_edge > 0.0))
    throw std::invalid_argument("place_users: area edge must be > 0");
  std::vector<Point> pts(num_users);
  for (auto& p : pts) {
    p.x = rng.uniform(0.0, area_edge);
    p.y = rng.uniform(0.0, area_edge);
  }
  return pts;
}

double path_loss_gain(double distance, const PathLossParams& params) {
  if (!(distance > 0.0))
    throw std::invalid_argument("path_loss_gain: distance must be > 0");
  return params.reference_gain * std::pow(distance, -params.exponent);
}

Matrix static_gains(const std::vector<Point>& positions, std::size_t num_subcarriers,
                    double area_edge, const PathLossParams& params, Rng& rng) {
  const double cx = area_edge / 2.0, cy = area_edge / 2.0;
  Matrix g(positions.size(), num_subcarriers);
  for (std::size_t k = 0; k < positions.size(); ++k) {
    double d = std::hypot(positions[k].x - cx, positions[k].y - cy);
    double base = path_loss_gain(d, params);
    for (std::size_t s = 0; s < num_subcarriers; ++s)
      g(k, s) = params.fading ? base * rng.exponential() : base;
  }
  return g;
}

double pu_link_gain(double distance, const PathLossParams& params) {
  return path_loss_gain(distance, params);
}

FadingProcess::FadingProcess(Matrix mean_gains, double pu_gain, Distribution dist,
                             Rng rng)
    : mean_gains_(std::move(mean_gains)), pu_gain_(pu_gain), dist_(dist), rng_(rng) {
  for (std::size_t i = 0; i < mean_gains_.size(); ++i) {
    double g = mean_gains_.data()[i];
    if (!(g >= 0.0) || !std::isfinite(g))
      throw std::invalid_argument("FadingProcess: mean gains must be finite and >= 0");
  }
}

ChannelRealization FadingProcess::sample() {
  ChannelRealization ch;
  ch.pu_gain = pu_gain_;
  ch.gains = mean_gains_;
  if (dist_ == Distribution::RayleighIID) {
    double* g = ch.gains.data();
    for (std::size_t i = 0; i < ch.gains.size(); ++i) g[i] *= rng_.exponential();
  }
  return ch;
}

ChannelRealization make_static_channel(const NetworkConfig& cfg, Rng& rng) {
  PathLossParams params{cfg.channel.path_loss_exponent,
                        cfg.channel.effective_reference_gain(),
                        cfg.channel.static_fading};
  auto pts = place_users(rng, cfg.num_users, cfg.area_edge);
  ChannelRealization ch;
  ch.gains = static_gains(pts, cfg.num_subcarriers, cfg.area_edge, params, rng);
  ch.pu_gain = cfg.effective_pu_gain();
  return ch;
}

FadingProcess make_fading_process(const NetworkConfig& cfg, Rng& rng) {
  PathLossParams params{cfg.channel.path_loss_exponent,
                        cfg.channel.effective_reference_gain(),
                        /*fading=*/false};  // large-scale component only
  auto pts = place_users(rng, cfg.num_users, cfg.area_edge);
  Matrix mean = static_gains(pts, cfg.num_subcarriers, cfg.area_edge, params, rng);
  return FadingProcess(std::move(mean), cfg.effective_pu_gain(),
                       FadingProcess::Distribution::RayleighIID, rng.spawn(0x66611));
}

void write_channel_csv(std::ostream& out, const ChannelRealization& ch) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", ch.pu_gain);
  out << "# pu_gain," << buf << "\n";
  for (std::size_t k = 0; k < ch.gains.rows(); ++k) {
    for (std::size_t s = 0; s < ch.gains.cols(); ++s) {
      std::snprintf(buf, sizeof buf, "%.17g", ch.gains(k, s));
      out << (s ? "," : "") << buf;
    }
    out << "\n";
  }
}

ChannelRealization read_channel_csv(std::istream& in) {
  std::string line;
  double pu_gain = 0.0;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# pu_gain,", 0) == 0) {
      pu_gain = std::strtod(line.c_str() + 10, nullptr);
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::runtime_error("channel csv: ragged rows");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("channel csv: no gain rows");
  ChannelRealization ch;
  ch.pu_gain = pu_gain;
  ch.gains = Matrix(rows.size(), rows.front().size());
  for (std::size_t k = 0; k < rows.size(); ++k)
    for (std::size_t s = 0; s < rows[k].size(); ++s) ch.gains(k, s) = rows[k][s];
  return ch;
}

void write_channel_csv_file(const std::string& path, const ChannelRealization& ch) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_channel_csv(out, ch);
}

ChannelRealization read_channel_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_channel_csv(in);
}

}  // namespace cogpow
