#include "cogpow/pricing.hpp"

#include <cmath>
#include <stdexcept>

namespace cogpow {

PriceEvaluation flat_price(const PricingSpec& spec, const std::vector<double>& w,
                           const std::vector<double>& i_max) {
  PriceEvaluation ev;
  ev.grad.assign(w.size(), 0.0);
  if (spec.flat_model == PriceModel::None) return ev;
  for (std::size_t s = 0; s < w.size(); ++s) {
    if (w[s] < 0.0) throw std::invalid_argument("flat_price: negative interference");
    double unit = spec.lambda0 / i_max[s];
    if (spec.flat_model == PriceModel::Lp) {
      ev.value += unit * w[s];
      ev.grad[s] = unit;
    } else {  // Vp
      double excess = w[s] / i_max[s] - 1.0;
      if (excess > 0.0) {
        ev.value += spec.lambda0 * excess;
        ev.grad[s] = unit;
      }
    }
  }
  return ev;
}

PriceEvaluation user_price(const PricingSpec& spec, std::size_t k,
                           const double* p_k, const double* g_k,
                           const std::vector<double>& i_max) {
  PriceEvaluation ev;
  ev.grad.assign(i_max.size(), 0.0);
  if (spec.user_model == PriceModel::None) return ev;
  double lambda = spec.lambda_k[k];
  if (lambda == 0.0) return ev;
  for (std::size_t s = 0; s < i_max.size(); ++s) {
    if (spec.user_basis == UserPriceBasis::Power) {
      ev.value += lambda * p_k[s];
      ev.grad[s] = lambda;
      continue;
    }
    double z = g_k[s] * p_k[s];  // user k's own interference
    double unit = lambda * g_k[s] / i_max[s];
    if (spec.user_model == PriceModel::Lp) {
      ev.value += lambda * z / i_max[s];
      ev.grad[s] = unit;
    } else {
      double excess = z / i_max[s] - 1.0;
      if (excess > 0.0) {
        ev.value += lambda * excess;
        ev.grad[s] = unit;
      }
    }
  }
  return ev;
}

double total_cost(const PricingSpec& spec, std::size_t k, const Matrix& p,
                  const Matrix& gains, const std::vector<double>& w,
                  const std::vector<double>& i_max) {
  return flat_price(spec, w, i_max).value +
         user_price(spec, k, p.row(k), gains.row(k), i_max).value;
}

void flat_price_grad_interval(const PricingSpec& spec, double w_s, double i_max_s,
                              double kink_tol, double& lo, double& hi) {
  lo = hi = 0.0;
  if (spec.flat_model == PriceModel::None) return;
  double unit = spec.lambda0 / i_max_s;
  if (spec.flat_model == PriceModel::Lp) {
    lo = hi = unit;
    return;
  }
  double ratio = w_s / i_max_s;
  if (ratio > 1.0 + kink_tol) {
    lo = hi = unit;
  } else if (ratio >= 1.0 - kink_tol) {
    lo = 0.0;
    hi = unit;
  }
}

void user_price_grad_interval(const PricingSpec& spec, std::size_t k, double p_ks,
                              double g_ks, double i_max_s, double kink_tol,
                              double& lo, double& hi) {
  lo = hi = 0.0;
  if (spec.user_model == PriceModel::None) return;
  double lambda = spec.lambda_k[k];
  if (lambda == 0.0) return;
  if (spec.user_basis == UserPriceBasis::Power) {
    lo = hi = lambda;
    return;
  }
  double unit = lambda * g_ks / i_max_s;
  if (spec.user_model == PriceModel::Lp) {
    lo = hi = unit;
    return;
  }
  double ratio = g_ks * p_ks / i_max_s;
  if (ratio > 1.0 + kink_tol) {
    lo = hi = unit;
  } else if (ratio >= 1.0 - kink_tol) {
    lo = 0.0;
    hi = unit;
  }
}

PriceConditionReport check_uniqueness_conditions(const PricingSpec& spec,
                                                 const std::vector<double>& noise,
                                                 const std::vector<double>& i_max,
                                                 const std::vector<double>& max_power,
                                                 const Matrix& gains) {
  PriceConditionReport rep;

  // C1: pi_k strictly increasing in each argument. Linear user pricing with a
  // positive rate qualifies; violation pricing is flat below the tolerance.
  if (spec.user_model == PriceModel::Lp) {
    rep.c1 = true;
    for (std::size_t k = 0; k < gains.rows() && rep.c1; ++k) {
      if (!(spec.lambda_k[k] > 0.0)) rep.c1 = false;
      if (spec.user_basis == UserPriceBasis::Interference)
        for (std::size_t s = 0; s < gains.cols(); ++s)
          if (!(gains(k, s) > 0.0)) rep.c1 = false;
    }
  }

  // C2: d pi_0 / d w_s below 1/(sigma^2_s + sum_k g_ks P_k) for every
  // reachable w (gentle) or above 1/sigma^2_s (steep).
  auto grad_bounds = [&](std::size_t s, double& gmin, double& gmax) {
    switch (spec.flat_model) {
      case PriceModel::None: gmin = gmax = 0.0; break;
      case PriceModel::Lp: gmin = gmax = spec.lambda0 / i_max[s]; break;
      case PriceModel::Vp: gmin = 0.0; gmax = spec.lambda0 / i_max[s]; break;
    }
  };
  rep.c2_gentle = true;
  rep.c2_steep = spec.flat_model != PriceModel::None;
  for (std::size_t s = 0; s < i_max.size(); ++s) {
    double reach = noise[s];
    for (std::size_t k = 0; k < gains.rows(); ++k)
      reach += gains(k, s) * max_power[k];
    double gmin = 0.0, gmax = 0.0;
    grad_bounds(s, gmin, gmax);
    if (!(gmax < 1.0 / reach)) rep.c2_gentle = false;
    if (!(gmin > 1.0 / noise[s])) rep.c2_steep = false;
  }
  return rep;
}

}  // namespace cogpow
