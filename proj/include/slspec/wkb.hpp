#pragma once

#include <string>
#include <vector>

#include "slspec/potential.hpp"

namespace slspec {

struct WkbProfile {
  double epsilon = 1.0;
  double action_zero = 0.0;          // Phi(0)
  std::vector<double> eta;           // decreasing in j
  std::vector<double> x_plus;
  std::vector<double> action_values;
  std::vector<double> theta_plus;
  std::vector<double> log_s;         // theta_plus / epsilon
  int predicted_count = 0;
  std::vector<std::string> failures; // per-index root failures
  double s(std::size_t j) const;     // may be +inf
};

double turning_point(const Potential& p, double eta);
double action(const Potential& p, double eta);
double theta_plus(const Potential& p, double eta);

WkbProfile wkb_spectrum(const Potential& p, double omega);

// Levels odd under x -> -x (even j in the whole-line numbering), i.e. the
// ones that survive the Dirichlet condition at 0.  Returned as xi = omega eta,
// increasing.
std::vector<double> wkb_dirichlet_levels(const WkbProfile& prof);

struct SpacingReport {
  bool sufficient = false;
  std::string message;
  double min_eta_gap = 0.0;
  double min_xi_gap = 0.0;
  bool xi_gap_floor_ok = false;      // min xi gap >= 1/(5 omega)
  double max_action_gap_error = 0.0; // max |Phi(eta_{l+1}) - Phi(eta_l) - pi/omega|... signed as gap
  double empirical_exponent = 0.0;   // b' with min eta gap = omega^{-b'}
};

SpacingReport spacing_check(const WkbProfile& prof, double omega);

}  // namespace slspec
