#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "slspec/potential.hpp"

namespace slspec {

struct SpectralData {
  double omega = 1.0;
  std::string potential_id;
  std::vector<double> xi;  // increasing
  std::vector<double> C;
  double q0 = 1.0;
  std::vector<double> q0_derivatives;
  int count() const { return static_cast<int>(xi.size()); }
};

struct ShootOptions {
  double tol = 1e-12;         // root tolerance on xi (relative)
  double ode_rtol = 1e-12;
  double ode_atol = 1e-14;
  double tail_ratio = 1e-10;  // omega^2 Q(X) <= tail_ratio * xi^2 at the truncation radius
  double xi_floor = 0.0;      // 0: derived from omega
  bool sensitivity_check = true;
  double sensitivity_tol = 1e-8;
};

std::pair<double, double> calogero_bounds(const Potential& p, double omega);

// Number of eigen-parameters strictly above xi (oscillation count).
int eigen_count(const Potential& p, double omega, double xi, const ShootOptions& opt = {});

std::vector<double> eigenvalues(const Potential& p, double omega, const ShootOptions& opt = {});

std::vector<double> characteristic_values(const Potential& p, double omega, const std::vector<double>& xi,
                                          const ShootOptions& opt = {});

SpectralData forward_spectrum(const Potential& p, double omega, const ShootOptions& opt = {});

// Eigenfunction data at one eigen-parameter: C, the norming coefficient s
// (phi(x) ~ s e^{-xi x}) and the shooting diagnostics.
struct EigenState {
  double xi = 0.0;
  double C = 0.0;
  double log_abs_s = 0.0;  // ln |s|
  double x_match = 0.0;
  double x_inf = 0.0;
};
EigenState eigen_state(const Potential& p, double omega, double xi, const ShootOptions& opt = {});

// Transcendental condition of the unit square well and its closed-form spectrum.
double squarewell_condition(double omega, double xi);
SpectralData squarewell_oracle(double omega);
// |omega - pi/2 - pi n| >= 1/5 for every integer n
bool squarewell_phase_guard(double omega);

struct JostSample {
  std::complex<double> k;
  std::complex<double> F;
  int iterations_used = 0;
  double tail_truncation = 0.0;  // bound on the omitted series terms
  double quad_tail = 0.0;        // bound on the truncated x-range contribution
};

struct JostOptions {
  int n_max = 400;
  double tol = 1e-13;
  double h0 = 0.02;           // phase advance per cell, h (omega sqrt(Q) + |k| + 1) <= h0
  double growth = 0.01;       // cells may grow to growth * x
  bool richardson = true;
  double x_inf = 0.0;         // 0: derived from the decay
  bool zero_potential = false;
};

JostSample jost(const Potential& p, double omega, std::complex<double> k, const JostOptions& opt = {});

// Jost solution sampled at x0 as well as F(k) (used for norming coefficients).
std::complex<double> jost_solution(const Potential& p, double omega, std::complex<double> k, double x0,
                                   const JostOptions& opt = {});

struct JostIdentity {
  double residual = 0.0;
  double lhs = 0.0;       // 4 xi^2 / C
  double rhs = 0.0;       // -s^2 Fdot^2
  double F_at_root = 0.0; // |F(i xi)|
  double F_scale = 0.0;
  double Fdot = 0.0;      // dF(i tau)/dtau at xi (Fdot = -i times this)
  double step = 0.0;
};

JostIdentity jost_identity_check(const Potential& p, double omega, int j, const SpectralData& sd,
                                 const JostOptions& opt = {});

}  // namespace slspec
