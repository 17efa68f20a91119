#pragma once

#include <string>
#include <utility>
#include <vector>

#include "slspec/forward.hpp"

namespace slspec {

// [l] taken as ceil(l) - 1, so [l] + 1 = ceil(l).
int holder_floor(double l);

double vitushkin_c_inf(double l, int s);
double vitushkin_c_l1(double l, int s);

enum class EnvelopeCase { m1, mp1 };
// (omega ln omega)^-3 for m1, (omega ln omega)^-(m+1) for mp1.
double lower_envelope(double omega, int m, EnvelopeCase c);

struct CompactClass {
  double a = 1.0;
  double k1 = 4.0;
  double k2 = 4.0;
  double q_mass = 0.0;  // int_0^inf (1+t) sqrt(Q), informational
};

struct SpectralEstimateReport {
  bool pass = true;
  double xi_lower = 0.0;                 // a / omega^{k1/(k2-2)}
  double xi_upper = 0.0;                 // omega sqrt(Q(0))
  std::vector<double> lower_margin;      // xi_j / xi_lower
  std::vector<double> upper_margin;      // xi_upper / xi_j
  double a_fit = 0.0;                    // largest a for which the lower bound holds
  double beta_fit = 0.0;                 // max |ln(4 xi^2 / C)| / omega^2 (alpha = 1)
  std::vector<double> log_norming;       // ln(4 xi_j^2 / C_j)
  std::string message;
};

SpectralEstimateReport spectral_estimate_check(const SpectralData& sd, const CompactClass& cls);

// ln of the bracket [1/(45 w^9 e^{26 w^2}), 22 w^2 e^{15 w^2}] on 4 xi^2 / C for q1.
std::pair<double, double> q1_norming_log_bracket(double omega);
// 4 xi^2 / C <= 220 omega^2 for the unit square well.
double squarewell_norming_bound(double omega);

// gamma in alpha exp(beta omega^gamma): slope of ln max_j |ln(4 xi^2/C)| against ln omega.
double fit_gamma(const std::vector<std::pair<double, double>>& omega_maxlog);

enum class EnvelopeKind { neg_lower_bound, gl0_rate, glm_rate };
std::string to_string(EnvelopeKind k);

struct RateReport {
  std::vector<std::pair<double, double>> samples;  // (omega, error)
  EnvelopeKind envelope_kind = EnvelopeKind::gl0_rate;
  int m = 1;
  double fitted_exponent = 0.0;    // decay exponent after removing the envelope's log factor
  double fitted_log_factor = 0.0;  // coefficient of ln ln omega in the two-regressor fit
  double prefactor = 0.0;          // K = error / envelope at the smallest omega
  double fit_residual = 0.0;       // rms orthogonal residual of the line fit
  double required_exponent = 0.0;
  bool below_envelope = false;
  bool pass = false;
  std::string message;
};

// Envelope value at omega for the given kind.
double rate_envelope(EnvelopeKind k, double omega, int m = 1);

RateReport convergence_report(const std::vector<std::pair<double, double>>& samples, EnvelopeKind kind, int m = 1);

// Total-least-squares line y = intercept + slope x; returns {slope, intercept, rms residual}.
struct LineFit {
  double slope = 0.0, intercept = 0.0, residual = 0.0;
};
LineFit tls_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace slspec
