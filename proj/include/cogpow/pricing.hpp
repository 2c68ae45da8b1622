#pragma once

// Spectrum access price functions and their (sub)gradients. The flat price
// charges the aggregate interference profile w; the per-user price charges
// each user's individual contribution. Both come in a linear flavor (charged
// from the first watt) and a violation flavor (charged only above the
// tolerance). At the violation kink the subgradient 0 is used, so no marginal
// cost is signalled before an actual violation.

#include <cstddef>
#include <vector>

#include "cogpow/config.hpp"
#include "cogpow/matrix.hpp"

namespace cogpow {

struct PriceEvaluation {
  double value = 0.0;
  std::vector<double> grad;  // per subcarrier
};

// pi_0(w); grad entries are d pi_0 / d w_s
PriceEvaluation flat_price(const PricingSpec& spec, const std::vector<double>& w,
                           const std::vector<double>& i_max);

// pi_k(p_k); grad entries are d pi_k / d p_ks
PriceEvaluation user_price(const PricingSpec& spec, std::size_t k,
                           const double* p_k, const double* g_k,
                           const std::vector<double>& i_max);

// C_k(p) = pi_0(w(p)) + pi_k(p_k)
double total_cost(const PricingSpec& spec, std::size_t k, const Matrix& p,
                  const Matrix& gains, const std::vector<double>& w,
                  const std::vector<double>& i_max);

// Subgradient interval of d pi_0 / d w_s at a point; lo == hi away from kinks.
// |w_s/I_s - 1| <= kink_tol marks the kink.
void flat_price_grad_interval(const PricingSpec& spec, double w_s, double i_max_s,
                              double kink_tol, double& lo, double& hi);
void user_price_grad_interval(const PricingSpec& spec, std::size_t k, double p_ks,
                              double g_ks, double i_max_s, double kink_tol,
                              double& lo, double& hi);

// Empirical check of the equilibrium uniqueness conditions: C1 (every
// user-specific price strictly increasing in each argument) or C2 (flat price
// uniformly gentle or uniformly steep relative to the interference regime).
struct PriceConditionReport {
  bool c1 = false;
  bool c2_gentle = false;
  bool c2_steep = false;
  bool holds() const { return c1 || c2_gentle || c2_steep; }
};

PriceConditionReport check_uniqueness_conditions(const PricingSpec& spec,
                                                 const std::vector<double>& noise,
                                                 const std::vector<double>& i_max,
                                                 const std::vector<double>& max_power,
                                                 const Matrix& gains);

}  // namespace cogpow
