#include "slspec/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>
#include <boost/math/constants/constants.hpp>

#include "slspec/error.hpp"

namespace slspec {

namespace {

Error berr(const std::string& op, const std::string& msg) { return Error("bounds_rates", op, msg); }

void check_ls(double l, int s, const char* op) {
  if (!(l > 0.0)) throw berr(op, "l must be positive");
  if (s < 1) throw berr(op, "s must be >= 1");
}

}  // namespace

int holder_floor(double l) { return static_cast<int>(std::ceil(l)) - 1; }

double vitushkin_c_inf(double l, int s) {
  check_ls(l, s, "vitushkin_c_inf");
  const double L1 = holder_floor(l) + 1.0;
  const double e = boost::math::constants::e<double>();
  const double lg = 0.5 * std::log(s) + (l + 1) * std::log(2.0) + l / s * std::log(8.0) + L1 * std::log(L1) +
                    s * L1 * std::log(4.0 * (1.0 + e));
  return std::exp(-lg);
}

double vitushkin_c_l1(double l, int s) {
  check_ls(l, s, "vitushkin_c_l1");
  const int L = holder_floor(l);
  const double L1 = L + 1.0;
  const double e = boost::math::constants::e<double>();
  const double num = 2.0 * s * std::lgamma(L1 + 1.0);
  const double den = std::log(5.0) + 0.5 * std::log(s) + (l + 2) * std::log(2.0) + l / s * std::log(18.0) +
                     L1 * std::log(L1) + s * std::lgamma(2.0 * L + 4.0) + s * L1 * std::log(1.0 + e);
  return std::exp(num - den);
}

double lower_envelope(double omega, int m, EnvelopeCase c) {
  if (!(omega > boost::math::constants::e<double>())) throw berr("lower_envelope", "omega must exceed e");
  const double p = c == EnvelopeCase::m1 ? 3.0 : m + 1.0;
  return std::pow(omega * std::log(omega), -p);
}

SpectralEstimateReport spectral_estimate_check(const SpectralData& sd, const CompactClass& cls) {
  SpectralEstimateReport r;
  const double w = sd.omega;
  if (!(cls.k2 > 2.0)) throw berr("spectral_estimate_check", "k2 must exceed 2");
  const double b = cls.k1 / (cls.k2 - 2.0);
  r.xi_lower = cls.a / std::pow(w, b);
  r.xi_upper = w * std::sqrt(sd.q0);
  r.a_fit = std::numeric_limits<double>::infinity();
  for (int j = 0; j < sd.count(); ++j) {
    const double xi = sd.xi[j];
    r.lower_margin.push_back(xi / r.xi_lower);
    r.upper_margin.push_back(r.xi_upper / xi);
    r.a_fit = std::min(r.a_fit, xi * std::pow(w, b));
    const double ln = std::log(4.0 * xi * xi) - std::log(sd.C[j]);
    r.log_norming.push_back(ln);
    r.beta_fit = std::max(r.beta_fit, std::abs(ln) / (w * w));
    if (xi < r.xi_lower || xi > r.xi_upper) r.pass = false;
  }
  std::ostringstream os;
  if (sd.count() == 0) {
    r.a_fit = 0.0;
    os << "no eigenvalues: vacuous pass";
  } else {
    os << "xi in [" << r.xi_lower << ", " << r.xi_upper << "]: " << (r.pass ? "ok" : "violated") << "; a_fit "
       << r.a_fit << ", beta_fit " << r.beta_fit;
  }
  r.message = os.str();
  return r;
}

std::pair<double, double> q1_norming_log_bracket(double omega) {
  const double w2 = omega * omega;
  return {-(std::log(45.0) + 9.0 * std::log(omega) + 26.0 * w2), std::log(22.0) + 2.0 * std::log(omega) + 15.0 * w2};
}

double squarewell_norming_bound(double omega) { return 220.0 * omega * omega; }

LineFit tls_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw berr("tls_fit", "need matching samples, at least two");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) mx += x[i], my += y[i];
  mx /= n;
  my /= n;
  Eigen::Matrix2d S = Eigen::Matrix2d::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    S(0, 0) += dx * dx;
    S(0, 1) += dx * dy;
    S(1, 1) += dy * dy;
  }
  S(1, 0) = S(0, 1);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(S);
  const Eigen::Vector2d v = es.eigenvectors().col(0);  // normal of the fitted line
  LineFit f;
  if (v(1) == 0.0) throw berr("tls_fit", "vertical fit");
  f.slope = -v(0) / v(1);
  f.intercept = my - f.slope * mx;
  f.residual = std::sqrt(std::max(0.0, es.eigenvalues()(0)) / n);
  return f;
}

double fit_gamma(const std::vector<std::pair<double, double>>& omega_maxlog) {
  std::vector<double> x, y;
  for (const auto& [w, m] : omega_maxlog) {
    if (!(w > 0.0) || !(m > 0.0)) throw berr("fit_gamma", "samples must be positive");
    x.push_back(std::log(w));
    y.push_back(std::log(m));
  }
  return tls_fit(x, y).slope;
}

std::string to_string(EnvelopeKind k) {
  switch (k) {
    case EnvelopeKind::neg_lower_bound: return "neg_lower_bound";
    case EnvelopeKind::gl0_rate: return "gl0_rate";
    case EnvelopeKind::glm_rate: return "glm_rate";
  }
  return "?";
}

double rate_envelope(EnvelopeKind k, double omega, int m) {
  switch (k) {
    case EnvelopeKind::neg_lower_bound: return std::pow(omega * std::log(omega), -(m + 1.0));
    case EnvelopeKind::gl0_rate: return std::log(omega) / std::sqrt(omega);
    case EnvelopeKind::glm_rate: return std::pow(omega, -static_cast<double>(m));
  }
  return 0.0;
}

RateReport convergence_report(const std::vector<std::pair<double, double>>& samples, EnvelopeKind kind, int m) {
  if (samples.size() < 3) throw berr("convergence_report", "insufficient samples");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!(samples[i].first > 1.0)) throw berr("convergence_report", "omega must exceed 1");
    if (!(samples[i].second > 0.0)) throw berr("convergence_report", "non-positive error");
    if (i > 0 && !(samples[i].first > samples[i - 1].first))
      throw berr("convergence_report", "omega not strictly increasing");
  }
  RateReport r;
  r.samples = samples;
  r.envelope_kind = kind;
  r.m = m;
  // log factor carried by the envelope, removed before the power-law fit
  const double log_power = kind == EnvelopeKind::gl0_rate ? -1.0 : kind == EnvelopeKind::neg_lower_bound ? m + 1.0 : 0.0;
  std::vector<double> x, y;
  for (const auto& [w, e] : samples) {
    x.push_back(std::log(w));
    y.push_back(std::log(e) + log_power * std::log(std::log(w)));
  }
  const LineFit f = tls_fit(x, y);
  r.fitted_exponent = -f.slope;
  r.fit_residual = f.residual;

  // ordinary least squares on [1, ln w, ln ln w] for the log factor
  Eigen::MatrixXd A(samples.size(), 3);
  Eigen::VectorXd b(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    A(i, 0) = 1.0;
    A(i, 1) = x[i];
    A(i, 2) = std::log(std::log(samples[i].first));
    b(i) = std::log(samples[i].second);
  }
  r.fitted_log_factor = A.colPivHouseholderQr().solve(b)(2);

  r.prefactor = samples.front().second / rate_envelope(kind, samples.front().first, m);
  r.below_envelope = true;
  for (const auto& [w, e] : samples)
    if (e > r.prefactor * rate_envelope(kind, w, m) * (1 + 1e-12)) r.below_envelope = false;

  std::ostringstream os;
  switch (kind) {
    case EnvelopeKind::gl0_rate:
      r.required_exponent = 0.5;
      r.pass = r.below_envelope && r.fitted_exponent >= r.required_exponent;
      break;
    case EnvelopeKind::glm_rate:
      r.required_exponent = m;
      r.pass = r.below_envelope && r.fitted_exponent >= r.required_exponent;
      break;
    case EnvelopeKind::neg_lower_bound:
      // worst-case bound over a class: informational only
      r.required_exponent = m + 1.0;
      r.pass = true;
      os << "informational: ";
      break;
  }
  os << to_string(kind) << " fitted exponent " << r.fitted_exponent << " (required " << r.required_exponent
     << "), samples " << (r.below_envelope ? "within" : "above") << " K*envelope";
  r.message = os.str();
  return r;
}

}  // namespace slspec
