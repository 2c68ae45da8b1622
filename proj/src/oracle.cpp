#include "cogpow/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cogpow/kernels.hpp"
#include "cogpow/rng.hpp"

namespace cogpow {

void project_corner_of_cube(double* x, std::size_t n, double cap) {
  double clamped_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) clamped_sum += std::max(x[i], 0.0);
  if (clamped_sum <= cap) {
    for (std::size_t i = 0; i < n; ++i) x[i] = std::max(x[i], 0.0);
    return;
  }
  // budget binds: project onto the simplex {x >= 0, sum = cap}
  std::vector<double> sorted(x, x + n);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double running = 0.0, tau = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    running += sorted[j];
    double t = (running - cap) / static_cast<double>(j + 1);
    if (sorted[j] - t > 0.0)
      tau = t;
    else
      break;
  }
  for (std::size_t i = 0; i < n; ++i) x[i] = std::max(x[i] - tau, 0.0);
}

double user_utility(const GameContext& ctx, const PowerProfile& p, std::size_t k) {
  auto w = aggregate_interference(ctx.gains, p);
  double rate = 0.0;
  for (std::size_t s = 0; s < w.size(); ++s) {
    double own = ctx.gains(k, s) * p(k, s);
    rate += std::log1p(own / (ctx.noise[s] + w[s] - own));
  }
  double cost = flat_price(ctx.pricing, w, ctx.i_max).value +
                user_price(ctx.pricing, k, p.row(k), ctx.gains.row(k), ctx.i_max).value;
  return rate - cost;
}

namespace {

PowerProfile uniform_interior(const GameContext& ctx) {
  PowerProfile p(ctx.num_users(), ctx.num_subcarriers());
  for (std::size_t k = 0; k < p.rows(); ++k)
    for (std::size_t s = 0; s < p.cols(); ++s)
      p(k, s) = ctx.max_power[k] / static_cast<double>(p.cols() + 1);
  return p;
}

// max_k,s |proj(p_k + v_k) - p_k| / P_k
double natural_map_residual(const GameContext& ctx, const PowerProfile& p,
                            const Matrix& v) {
  double res = 0.0;
  std::vector<double> q(p.cols());
  for (std::size_t k = 0; k < p.rows(); ++k) {
    for (std::size_t s = 0; s < p.cols(); ++s) q[s] = p(k, s) + v(k, s);
    project_corner_of_cube(q.data(), q.size(), ctx.max_power[k]);
    for (std::size_t s = 0; s < p.cols(); ++s)
      res = std::max(res, std::abs(q[s] - p(k, s)) / ctx.max_power[k]);
  }
  return res;
}

// One-sided derivative of user k's separable per-subcarrier objective
//   f_s(x) = log(sigma^2 + w_other + g x) - flat-charge(w_other + g x) -
//            user-charge(x)
// evaluated with the below-kink subgradient; strictly decreasing in x apart
// from downward jumps at violation kinks.
struct SeparableObjective {
  const GameContext* ctx;
  std::size_t k;
  std::vector<double> w_other;

  double slope(std::size_t s, double x) const {
    double g = ctx->gains(k, s);
    double total = ctx->noise[s] + w_other[s] + g * x;
    double d = g / total;
    const PricingSpec& pr = ctx->pricing;
    if (pr.flat_model == PriceModel::Lp)
      d -= g * pr.lambda0 / ctx->i_max[s];
    else if (pr.flat_model == PriceModel::Vp && w_other[s] + g * x > ctx->i_max[s])
      d -= g * pr.lambda0 / ctx->i_max[s];
    if (pr.user_model != PriceModel::None && pr.lambda_k[k] > 0.0) {
      if (pr.user_basis == UserPriceBasis::Power) {
        d -= pr.lambda_k[k];
      } else if (pr.user_model == PriceModel::Lp) {
        d -= pr.lambda_k[k] * g / ctx->i_max[s];
      } else if (g * x > ctx->i_max[s]) {
        d -= pr.lambda_k[k] * g / ctx->i_max[s];
      }
    }
    return d;
  }

  // argmax_x f_s(x) - lambda x over [0, cap]
  double coordinate_argmax(std::size_t s, double lambda, double cap) const {
    if (slope(s, 0.0) <= lambda) return 0.0;
    if (slope(s, cap) >= lambda) return cap;
    double lo = 0.0, hi = cap;
    for (int it = 0; it < 64; ++it) {
      double mid = 0.5 * (lo + hi);
      if (slope(s, mid) > lambda)
        lo = mid;
      else
        hi = mid;
    }
    return 0.5 * (lo + hi);
  }
};

}  // namespace

PowerProfile best_response(const GameContext& ctx, const PowerProfile& p,
                           std::size_t k) {
  const std::size_t S = ctx.num_subcarriers();
  SeparableObjective obj{&ctx, k, std::vector<double>(S, 0.0)};
  for (std::size_t l = 0; l < ctx.num_users(); ++l) {
    if (l == k) continue;
    kern::mul_acc(obj.w_other.data(), ctx.gains.row(l), p.row(l), S);
  }
  const double cap = ctx.max_power[k];

  auto allocate = [&](double lambda, std::vector<double>& out) {
    double total = 0.0;
    for (std::size_t s = 0; s < S; ++s) {
      out[s] = obj.coordinate_argmax(s, lambda, cap);
      total += out[s];
    }
    return total;
  };

  std::vector<double> best(S, 0.0);
  if (allocate(0.0, best) > cap) {
    double lambda_hi = 0.0;
    for (std::size_t s = 0; s < S; ++s)
      lambda_hi = std::max(lambda_hi, obj.slope(s, 0.0));
    double lo = 0.0, hi = lambda_hi;
    std::vector<double> trial(S);
    for (int it = 0; it < 64; ++it) {
      double mid = 0.5 * (lo + hi);
      if (allocate(mid, trial) > cap)
        lo = mid;
      else
        hi = mid;
    }
    double total = allocate(hi, best);
    if (total > cap)
      for (auto& x : best) x *= cap / total;
  }

  PowerProfile out = p;
  for (std::size_t s = 0; s < S; ++s) out(k, s) = best[s];
  return out;
}

std::vector<double> best_response_gap(const GameContext& ctx,
                                      const PowerProfile& p) {
  std::vector<double> gaps(ctx.num_users());
  for (std::size_t k = 0; k < ctx.num_users(); ++k) {
    PowerProfile q = best_response(ctx, p, k);
    gaps[k] = user_utility(ctx, q, k) - user_utility(ctx, p, k);
  }
  return gaps;
}

double kkt_residual(const GameContext& ctx, const PowerProfile& p,
                    double active_tol, double kink_tol) {
  Matrix lo, hi;
  marginal_utility_intervals(ctx, p, kink_tol, lo, hi);
  const std::size_t S = ctx.num_subcarriers();
  double worst = 0.0;
  for (std::size_t k = 0; k < ctx.num_users(); ++k) {
    double cap = ctx.max_power[k];
    double total = kern::sum(p.row(k), S);
    bool budget_active = (cap - total) <= active_tol * cap;

    std::vector<double> candidates{0.0};
    if (budget_active) {
      for (std::size_t s = 0; s < S; ++s) {
        if (lo(k, s) > 0.0) candidates.push_back(lo(k, s));
        if (hi(k, s) > 0.0) candidates.push_back(hi(k, s));
      }
    }
    double best = std::numeric_limits<double>::infinity();
    for (double lambda : candidates) {
      double viol = 0.0;
      for (std::size_t s = 0; s < S; ++s) {
        bool active = p(k, s) > active_tol * cap;
        if (active) {
          double d = 0.0;
          if (lambda < lo(k, s)) d = lo(k, s) - lambda;
          if (lambda > hi(k, s)) d = lambda - hi(k, s);
          viol = std::max(viol, p(k, s) * d);
        } else {
          viol = std::max(viol, cap * std::max(0.0, lo(k, s) - lambda));
        }
      }
      best = std::min(best, viol);
    }
    worst = std::max(worst, best);
  }
  return worst;
}

EquilibriumCertificate maximize_potential(const GameContext& ctx,
                                          const OracleOptions& opts,
                                          const PowerProfile* start) {
  const std::size_t K = ctx.num_users();
  const std::size_t S = ctx.num_subcarriers();
  PowerProfile p = start ? *start : uniform_interior(ctx);
  double v_cur = potential(ctx, p);

  double p_scale = *std::max_element(ctx.max_power.begin(), ctx.max_power.end());
  double step = 0.0;
  bool hit_tol = false;
  std::uint64_t iter = 0;
  PowerProfile q(K, S);
  for (; iter < opts.max_iters; ++iter) {
    Matrix grad = marginal_utilities(ctx, p);
    if (natural_map_residual(ctx, p, grad) <= opts.tol) {
      hit_tol = true;
      break;
    }
    double gnorm = 0.0;
    for (std::size_t i = 0; i < grad.size(); ++i)
      gnorm = std::max(gnorm, std::abs(grad.data()[i]));
    if (step == 0.0) step = p_scale / (gnorm + 1e-300);

    bool accepted = false;
    double step_floor = 1e-16 * p_scale / (gnorm + 1e-300);
    while (step > step_floor) {
      q = p;
      kern::axpy(step, grad.data(), q.data(), q.size());
      double descent = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        project_corner_of_cube(q.row(k), S, ctx.max_power[k]);
        for (std::size_t s = 0; s < S; ++s)
          descent += grad(k, s) * (q(k, s) - p(k, s));
      }
      double v_new = potential(ctx, q);
      if (v_new >= v_cur + 1e-4 * descent && v_new >= v_cur) {
        p = q;
        v_cur = v_new;
        step *= 2.0;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // stalled (typically on a violation-price kink)
  }

  EquilibriumCertificate cert;
  cert.method = "projected_ascent";
  cert.iterations = iter;

  if (opts.br_polish && !hit_tol) {
    cert.method += "+br_polish";
    for (std::uint64_t sweep = 0; sweep < opts.polish_sweeps; ++sweep) {
      double v_before = v_cur;
      for (std::size_t k = 0; k < K; ++k) {
        PowerProfile r = best_response(ctx, p, k);
        double v_new = potential(ctx, r);
        if (v_new > v_cur) {
          p = std::move(r);
          v_cur = v_new;
        }
      }
      if (v_cur - v_before <= 1e-14 * (1.0 + std::abs(v_cur))) break;
    }
  }

  cert.p_star = p;
  cert.v_star = v_cur;
  cert.br_gap = best_response_gap(ctx, p);
  cert.kkt_residual = kkt_residual(ctx, p);
  cert.converged = cert.kkt_residual <= opts.certify_tol;
  return cert;
}

namespace {

struct UserGrid {
  std::vector<std::vector<double>> candidates;  // candidate power vectors
  std::vector<double> user_prices;              // pi_k per candidate
};

void enumerate_user_grid(const GameContext& ctx, std::size_t k,
                         const std::vector<double>& levels, double cap,
                         std::vector<double>& current, std::size_t s,
                         double used, UserGrid& out) {
  if (s == current.size()) {
    out.candidates.push_back(current);
    out.user_prices.push_back(
        user_price(ctx.pricing, k, current.data(), ctx.gains.row(k), ctx.i_max)
            .value);
    return;
  }
  for (double lv : levels) {
    if (used + lv > cap * (1.0 + 1e-12)) break;
    current[s] = lv;
    enumerate_user_grid(ctx, k, levels, cap, current, s + 1, used + lv, out);
  }
  current[s] = 0.0;
}

}  // namespace

PowerProfile brute_force_ne(const GameContext& ctx, double grid_step,
                            std::uint64_t max_evaluations) {
  if (!(grid_step > 0.0))
    throw std::invalid_argument("brute_force_ne: grid_step must be > 0");
  const std::size_t K = ctx.num_users();
  const std::size_t S = ctx.num_subcarriers();

  // candidate count per user is at most C(M+1+S, S) (levels 0..M h plus the
  // cap); bound the joint grid before materializing anything
  double joint_bound = 1.0;
  std::vector<std::uint64_t> steps(K);
  for (std::size_t k = 0; k < K; ++k) {
    double cap = ctx.max_power[k];
    steps[k] = static_cast<std::uint64_t>(std::floor(cap / grid_step + 1e-9));
    double count = 1.0;
    for (std::size_t j = 1; j <= S; ++j)
      count *= static_cast<double>(steps[k] + 1 + j) / static_cast<double>(j);
    joint_bound *= count;
  }
  if (joint_bound > static_cast<double>(max_evaluations))
    throw std::invalid_argument(
        "brute_force_ne: joint grid needs up to about " +
        std::to_string(joint_bound) + " evaluations, above the cap of " +
        std::to_string(max_evaluations));

  std::vector<UserGrid> grids(K);
  for (std::size_t k = 0; k < K; ++k) {
    double cap = ctx.max_power[k];
    std::vector<double> levels;
    for (std::uint64_t i = 0; i <= steps[k]; ++i) levels.push_back(grid_step * i);
    if (levels.back() < cap * (1.0 - 1e-12)) levels.push_back(cap);
    std::vector<double> current(S, 0.0);
    enumerate_user_grid(ctx, k, levels, cap, current, 0, 0.0, grids[k]);
  }

  double best_v = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_idx(K, 0), idx(K, 0);

  // batch buffers for the innermost user
  const UserGrid& inner = grids[K - 1];
  const std::size_t n_inner = inner.candidates.size();
  std::vector<double> buf(n_inner * S);
  std::vector<double> flat_vals(n_inner);

  std::vector<double> w_partial(S, 0.0);
  double price_partial = 0.0;

  auto eval_inner = [&]() {
    const double* g_last = ctx.gains.row(K - 1);
    for (std::size_t i = 0; i < n_inner; ++i) {
      const double* cand = inner.candidates[i].data();
      double flat = 0.0;
      for (std::size_t s = 0; s < S; ++s) {
        double w = w_partial[s] + g_last[s] * cand[s];
        buf[i * S + s] = ctx.noise[s] + w;
        if (ctx.pricing.flat_model == PriceModel::Lp)
          flat += ctx.pricing.lambda0 * w / ctx.i_max[s];
        else if (ctx.pricing.flat_model == PriceModel::Vp)
          flat += ctx.pricing.lambda0 * std::max(w / ctx.i_max[s] - 1.0, 0.0);
      }
      flat_vals[i] = flat;
    }
    kern::log(buf.data(), buf.data(), n_inner * S);
    for (std::size_t i = 0; i < n_inner; ++i) {
      double logsum = 0.0;
      for (std::size_t s = 0; s < S; ++s) logsum += buf[i * S + s];
      double v = logsum - flat_vals[i] - price_partial - inner.user_prices[i];
      if (v > best_v) {
        best_v = v;
        best_idx = idx;
        best_idx[K - 1] = i;
      }
    }
  };

  // depth-first sweep over the outer users' candidates
  auto recurse = [&](auto&& self, std::size_t k) -> void {
    if (k == K - 1) {
      eval_inner();
      return;
    }
    const UserGrid& grid = grids[k];
    const double* g_row = ctx.gains.row(k);
    for (std::size_t i = 0; i < grid.candidates.size(); ++i) {
      idx[k] = i;
      const double* cand = grid.candidates[i].data();
      for (std::size_t s = 0; s < S; ++s) w_partial[s] += g_row[s] * cand[s];
      price_partial += grid.user_prices[i];
      self(self, k + 1);
      for (std::size_t s = 0; s < S; ++s) w_partial[s] -= g_row[s] * cand[s];
      price_partial -= grid.user_prices[i];
    }
  };
  recurse(recurse, 0);

  PowerProfile p(K, S);
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t s = 0; s < S; ++s) p(k, s) = grids[k].candidates[best_idx[k]][s];
  return p;
}

PotentialExtrema potential_extrema(const GameContext& ctx,
                                   std::uint64_t exact_budget,
                                   std::uint64_t sample_count,
                                   std::uint64_t seed) {
  const std::size_t K = ctx.num_users();
  const std::size_t S = ctx.num_subcarriers();
  PotentialExtrema ext;
  ext.v_max = maximize_potential(ctx).v_star;

  // vertices of each user's polytope: the zero row or P_k on one subcarrier
  PowerProfile vertex(K, S);
  auto eval_vertex = [&](const std::vector<std::size_t>& digits) {
    for (std::size_t k = 0; k < K; ++k) {
      for (std::size_t s = 0; s < S; ++s) vertex(k, s) = 0.0;
      if (digits[k] > 0) vertex(k, digits[k] - 1) = ctx.max_power[k];
    }
    return potential(ctx, vertex);
  };

  double count_log = static_cast<double>(K) * std::log2(static_cast<double>(S + 1));
  double v_min = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> digits(K, 0);
  if (count_log <= std::log2(static_cast<double>(exact_budget)) + 1e-9) {
    // exact mixed-radix enumeration over (S+1)^K vertices
    bool done = false;
    while (!done) {
      v_min = std::min(v_min, eval_vertex(digits));
      ++ext.vertices_evaluated;
      std::size_t k = 0;
      while (k < K) {
        if (++digits[k] <= S) break;
        digits[k] = 0;
        ++k;
      }
      done = (k == K);
    }
    ext.v_min_exact = true;
  } else {
    Rng rng(seed);
    for (std::uint64_t i = 0; i < sample_count; ++i) {
      for (std::size_t k = 0; k < K; ++k)
        digits[k] = static_cast<std::size_t>(rng.below(S + 1));
      v_min = std::min(v_min, eval_vertex(digits));
      ++ext.vertices_evaluated;
    }
    ext.v_min_exact = false;
  }
  ext.v_min = v_min;
  return ext;
}

SampledErgodicPotential::SampledErgodicPotential(GameContext base,
                                                 FadingProcess process,
                                                 std::uint64_t n_draws)
    : base_(std::move(base)) {
  draws_.reserve(n_draws);
  for (std::uint64_t i = 0; i < n_draws; ++i)
    draws_.push_back(process.sample().gains);
}

double SampledErgodicPotential::value(const PowerProfile& p) const {
  double acc = 0.0;
  for (const Matrix& g : draws_) acc += potential_with_gains(base_, g, p);
  return acc / static_cast<double>(draws_.size());
}

Matrix SampledErgodicPotential::gradient(const PowerProfile& p) const {
  Matrix acc(p.rows(), p.cols());
  for (const Matrix& g : draws_) {
    Matrix v = marginal_utilities_with_gains(base_, g, p);
    kern::axpy(1.0, v.data(), acc.data(), acc.size());
  }
  double inv = 1.0 / static_cast<double>(draws_.size());
  for (std::size_t i = 0; i < acc.size(); ++i) acc.data()[i] *= inv;
  return acc;
}

double SampledErgodicPotential::maximum(double tol, std::uint64_t max_iters) const {
  PowerProfile p = uniform_interior(base_);
  double v_cur = value(p);
  double p_scale =
      *std::max_element(base_.max_power.begin(), base_.max_power.end());
  double step = 0.0;
  PowerProfile q = p;
  for (std::uint64_t iter = 0; iter < max_iters; ++iter) {
    Matrix grad = gradient(p);
    if (natural_map_residual(base_, p, grad) <= tol) break;
    double gnorm = 0.0;
    for (std::size_t i = 0; i < grad.size(); ++i)
      gnorm = std::max(gnorm, std::abs(grad.data()[i]));
    if (step == 0.0) step = p_scale / (gnorm + 1e-300);
    bool accepted = false;
    double step_floor = 1e-16 * p_scale / (gnorm + 1e-300);
    while (step > step_floor) {
      q = p;
      kern::axpy(step, grad.data(), q.data(), q.size());
      double ascent = 0.0;
      for (std::size_t k = 0; k < q.rows(); ++k) {
        project_corner_of_cube(q.row(k), q.cols(), base_.max_power[k]);
        for (std::size_t s = 0; s < q.cols(); ++s)
          ascent += grad(k, s) * (q(k, s) - p(k, s));
      }
      double v_new = value(q);
      if (v_new >= v_cur + 1e-4 * ascent && v_new >= v_cur) {
        p = q;
        v_cur = v_new;
        step *= 2.0;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
  }
  return v_cur;
}

double SampledErgodicPotential::vertex_minimum() const {
  const std::size_t K = base_.num_users();
  const std::size_t S = base_.num_subcarriers();
  double total_vertices = std::pow(static_cast<double>(S + 1),
                                   static_cast<double>(K));
  if (total_vertices > static_cast<double>(std::uint64_t{1} << 22))
    throw std::invalid_argument(
        "SampledErgodicPotential::vertex_minimum: vertex set too large for "
        "exact enumeration");
  PowerProfile vertex(K, S);
  std::vector<std::size_t> digits(K, 0);
  double v_min = std::numeric_limits<double>::infinity();
  bool done = false;
  while (!done) {
    for (std::size_t k = 0; k < K; ++k) {
      for (std::size_t s = 0; s < S; ++s) vertex(k, s) = 0.0;
      if (digits[k] > 0) vertex(k, digits[k] - 1) = base_.max_power[k];
    }
    v_min = std::min(v_min, value(vertex));
    std::size_t k = 0;
    while (k < K) {
      if (++digits[k] <= S) break;
      digits[k] = 0;
      ++k;
    }
    done = (k == K);
  }
  return v_min;
}

double verify_uniqueness(const GameContext& ctx, std::size_t n_starts,
                         std::uint64_t seed, const OracleOptions& opts) {
  if (n_starts < 2)
    throw std::invalid_argument("verify_uniqueness: need at least 2 starts");
  const std::size_t K = ctx.num_users();
  const std::size_t S = ctx.num_subcarriers();
  Rng rng(seed);
  std::vector<PowerProfile> endpoints;
  endpoints.reserve(n_starts);
  for (std::size_t i = 0; i < n_starts; ++i) {
    // uniform draw over each corner-of-cube via Dirichlet(1,...,1) weights
    PowerProfile p0(K, S);
    for (std::size_t k = 0; k < K; ++k) {
      double total = 0.0;
      std::vector<double> e(S + 1);
      for (auto& x : e) {
        x = rng.exponential();
        total += x;
      }
      for (std::size_t s = 0; s < S; ++s)
        p0(k, s) = ctx.max_power[k] * e[s] / total;
    }
    endpoints.push_back(maximize_potential(ctx, opts, &p0).p_star);
  }
  double dist = 0.0;
  for (std::size_t a = 0; a < endpoints.size(); ++a)
    for (std::size_t b = a + 1; b < endpoints.size(); ++b)
      for (std::size_t i = 0; i < endpoints[a].size(); ++i)
        dist = std::max(dist,
                        std::abs(endpoints[a].data()[i] - endpoints[b].data()[i]));
  return dist;
}

}  // namespace cogpow
