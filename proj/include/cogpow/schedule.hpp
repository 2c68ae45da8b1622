#pragma once

// Step-size schedules for the exponential learning iteration. PowerLaw with
// beta in (1/2, 1] satisfies the summability conditions required for
// convergence (sum gamma = inf, sum gamma^2 / sum gamma -> 0); STC runs a
// constant exploration step until the driver reports oscillation, then decays.

#include <stdexcept>

namespace cogpow {

struct StepSchedule {
  enum class Kind { Constant, PowerLaw, Stc };

  Kind kind = Kind::PowerLaw;
  double gamma0 = 0.5;         // Constant value, or PowerLaw/STC scale
  double beta = 0.6;           // PowerLaw exponent, in (1/2, 1]
  double stc_beta = 0.6;       // STC decay exponent after the switch
  int stc_window = 6;          // oscillation detector window
  int stc_alternations = 3;    // alternations within the window that trigger

  static StepSchedule constant(double gamma) {
    StepSchedule s;
    s.kind = Kind::Constant;
    s.gamma0 = gamma;
    return s;
  }
  static StepSchedule power_law(double gamma0, double beta) {
    StepSchedule s;
    s.kind = Kind::PowerLaw;
    s.gamma0 = gamma0;
    s.beta = beta;
    return s;
  }
  static StepSchedule stc(double gamma_explore, double beta_converge,
                          int window = 6, int alternations = 3) {
    StepSchedule s;
    s.kind = Kind::Stc;
    s.gamma0 = gamma_explore;
    s.stc_beta = beta_converge;
    s.stc_window = window;
    s.stc_alternations = alternations;
    return s;
  }

  void validate() const {
    if (!(gamma0 > 0.0)) throw std::invalid_argument("step schedule: gamma0 must be > 0");
    if (kind == Kind::PowerLaw && !(beta > 0.5 && beta <= 1.0))
      throw std::invalid_argument("step schedule: beta must lie in (1/2, 1]");
    if (kind == Kind::Stc && !(stc_beta > 0.5 && stc_beta <= 1.0))
      throw std::invalid_argument("step schedule: stc beta must lie in (1/2, 1]");
    if (kind == Kind::Stc && stc_window < 4)
      throw std::invalid_argument("step schedule: stc window must be >= 4");
  }
};

}  // namespace cogpow
