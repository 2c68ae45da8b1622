#include "cogpow/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "cogpow/csv.hpp"
#include "cogpow/kernels.hpp"
#include "cogpow/units.hpp"

namespace cogpow {

ViolationIndex violation_index(const std::vector<double>& w,
                               const std::vector<double>& i_max) {
  ViolationIndex out;
  out.psi.resize(w.size());
  for (std::size_t s = 0; s < w.size(); ++s) {
    if (!(i_max[s] > 0.0))
      throw std::invalid_argument("violation_index: tolerance must be > 0");
    out.psi[s] = w[s] / i_max[s];
  }
  out.mean = kern::sum(out.psi.data(), out.psi.size()) /
             static_cast<double>(out.psi.size());
  return out;
}

double eql(double v_n, double v_min, double v_max) {
  if (!(v_max > v_min))
    throw std::invalid_argument("eql: potential extrema are degenerate");
  return (v_n - v_min) / (v_max - v_min);
}

MetricReport make_report(const GameContext& ctx, const PowerProfile& p) {
  GameSnapshot snap = snapshot(ctx, p);
  MetricReport rep;
  ViolationIndex vi = violation_index(snap.w, ctx.i_max);
  rep.psi = std::move(vi.psi);
  rep.psi_mean = vi.mean;
  rep.su_sum_rate_nats = kern::sum(snap.rates.data(), snap.rates.size());
  rep.su_sum_rate_bits = nats_to_bits(rep.su_sum_rate_nats);
  rep.pu_rate_nats = pu_rate(snap.w, ctx.pu_gain, ctx.pu_power);
  rep.revenue = operator_revenue(ctx, p);
  rep.total_su_power = kern::sum(p.data(), p.size());
  rep.congestion_index = static_cast<double>(ctx.num_users()) /
                         static_cast<double>(ctx.num_subcarriers());
  return rep;
}

std::pair<PowerProfile, MetricReport> uniform_baseline(const GameContext& ctx) {
  PowerProfile p(ctx.num_users(), ctx.num_subcarriers());
  for (std::size_t k = 0; k < p.rows(); ++k)
    for (std::size_t s = 0; s < p.cols(); ++s)
      p(k, s) = ctx.max_power[k] / static_cast<double>(p.cols());
  MetricReport rep = make_report(ctx, p);
  return {std::move(p), std::move(rep)};
}

std::vector<std::string> snapshot_csv_header(std::size_t num_users,
                                             std::size_t num_subcarriers) {
  std::vector<std::string> h{"iteration", "potential"};
  for (std::size_t k = 0; k < num_users; ++k) {
    h.push_back("rate_" + std::to_string(k));
    h.push_back("cost_" + std::to_string(k));
    h.push_back("utility_" + std::to_string(k));
  }
  for (std::size_t s = 0; s < num_subcarriers; ++s) {
    h.push_back("w_" + std::to_string(s));
    h.push_back("psi_" + std::to_string(s));
  }
  return h;
}

std::vector<double> snapshot_csv_row(std::uint64_t iteration, const GameContext& ctx,
                                     const GameSnapshot& snap) {
  std::vector<double> r{static_cast<double>(iteration), snap.potential};
  for (std::size_t k = 0; k < snap.rates.size(); ++k) {
    r.push_back(snap.rates[k]);
    r.push_back(snap.costs[k]);
    r.push_back(snap.utilities[k]);
  }
  for (std::size_t s = 0; s < snap.w.size(); ++s) {
    r.push_back(snap.w[s]);
    r.push_back(snap.w[s] / ctx.i_max[s]);
  }
  return r;
}

void write_trajectory_csv(const std::string& path, const GameContext& ctx,
                          const RunRecord& rec) {
  CsvWriter csv(path);
  csv.raw_row(snapshot_csv_header(ctx.num_users(), ctx.num_subcarriers()));
  for (const auto& tp : rec.trajectory) {
    GameSnapshot snap = snapshot(ctx, tp.powers);
    csv.row(snapshot_csv_row(tp.iteration, ctx, snap));
  }
}

}  // namespace cogpow
