#include "slspec/wkb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/constants/constants.hpp>
#include <boost/math/tools/roots.hpp>

#include "slspec/error.hpp"
#include "slspec/quadrature.hpp"

namespace slspec {

namespace {

const double kPi = boost::math::constants::pi<double>();

Error werr(const std::string& op, const std::string& msg) { return Error("wkb", op, msg); }

double action_zero(const Potential& p) {
  auto f = [&](double x) { return std::sqrt(std::max(0.0, p.eval(x))); };
  if (p.compact_support()) {
    std::vector<double> cuts{0.0};
    for (double b : p.breakpoints())
      if (b < p.support_end()) cuts.push_back(b);
    cuts.push_back(p.support_end());
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) s += quad::adaptive(f, cuts[i], cuts[i + 1], 1e-13);
    return 2.0 * s;
  }
  const double h = 0.5 * p.decay().k2;
  if (h <= 1.0) throw werr("action", "sqrt(Q) not integrable for the declared decay");
  const auto split = quad::half_line(f, std::min(1e3, p.table_end()), h, p.breakpoints(), 1e-13);
  return 2.0 * split.total();
}

}  // namespace

double WkbProfile::s(std::size_t j) const { return std::exp(log_s.at(j)); }

double turning_point(const Potential& p, double eta) {
  if (!(eta > 0.0)) throw werr("turning_point", "eta must be positive");
  if (eta * eta > p.q0() * (1.0 + 1e-15)) throw werr("turning_point", "eta^2 > Q(0): no turning point");
  return p.level_crossing(eta * eta);
}

double action(const Potential& p, double eta) {
  if (eta < 0.0 || eta * eta > p.q0() * (1.0 + 1e-15)) throw werr("action", "eta outside [0, sqrt(Q(0))]");
  if (eta == 0.0) return action_zero(p);
  const double xp = turning_point(p, eta);
  if (xp == 0.0) return 0.0;
  const double e2 = eta * eta;
  // y = x+ sin(t) removes the square-root zero at the turning point
  auto f = [&](double t) {
    const double y = xp * std::sin(t);
    return std::sqrt(std::max(0.0, p.eval(y) - e2)) * xp * std::cos(t);
  };
  std::vector<double> cuts{0.0};
  for (double b : p.breakpoints())
    if (b < xp) cuts.push_back(std::asin(b / xp));
  // resolve the O(1) structure near the origin when x+ is large
  for (double y = 1.0; y < 0.5 * xp; y *= 4.0)
    if (std::asin(y / xp) > cuts.back()) cuts.push_back(std::asin(y / xp));
  cuts.push_back(0.5 * kPi);
  double s = 0.0, err = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double e = 0.0;
    s += quad::adaptive(f, cuts[i], cuts[i + 1], 1e-13, &e);
    err += e;
  }
  if (!std::isfinite(s) || err > 1e-8 * std::max(1.0, std::abs(s))) throw werr("action", "quadrature did not converge");
  return 2.0 * s;
}

double theta_plus(const Potential& p, double eta) {
  if (!(eta > 0.0)) throw werr("theta_plus", "eta must be positive");
  const double xp = turning_point(p, eta);
  const double e2 = eta * eta;
  auto g = [&](double y) { return eta - std::sqrt(std::max(0.0, e2 - p.eval(y))); };
  const double mid = 2.0 * xp + 1.0;
  // y = x+ + t^2 near the turning point
  auto f = [&](double t) { return g(xp + t * t) * 2.0 * t; };
  double s = 0.0;
  std::vector<double> cuts{0.0};
  for (double b : p.breakpoints())
    if (b > xp && b < mid) cuts.push_back(std::sqrt(b - xp));
  cuts.push_back(std::sqrt(mid - xp));
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) s += quad::adaptive(f, cuts[i], cuts[i + 1], 1e-13);
  if (p.compact_support()) {
    if (p.support_end() > mid) s += quad::adaptive(g, mid, p.support_end(), 1e-13);
  } else {
    // beyond mid the integrand behaves like Q/(2 eta)
    const double h = p.decay().k2;
    const double X = std::max(mid, 1e3);
    if (X > mid) {
      for (double a = mid; a < X;) {
        const double b = std::min(X, 4.0 * a);
        s += quad::adaptive(g, a, b, 1e-13);
        a = b;
      }
    }
    s += g(X) * X / (h - 1.0);
  }
  return eta * xp + s;
}

WkbProfile wkb_spectrum(const Potential& p, double omega) {
  if (!(omega >= 1.0)) throw werr("wkb_spectrum", "omega must be >= 1");
  WkbProfile prof;
  prof.epsilon = 1.0 / omega;
  prof.action_zero = action(p, 0.0);
  prof.predicted_count = static_cast<int>(std::floor(prof.action_zero * omega / kPi + 1e-7));
  const double top = std::sqrt(p.q0());
  for (int j = 1; j <= prof.predicted_count; ++j) {
    const double target = (j - 0.5) * kPi / omega;
    auto f = [&](double eta) { return action(p, eta) - target; };
    const double fa = prof.action_zero - target, fb = -target;
    try {
      boost::math::tools::eps_tolerance<double> tol(50);
      std::uintmax_t it = 200;
      auto r = boost::math::tools::toms748_solve(f, 0.0, top, fa, fb, tol, it);
      const double eta = 0.5 * (r.first + r.second);
      prof.eta.push_back(eta);
      prof.x_plus.push_back(eta > 0 ? turning_point(p, eta) : std::numeric_limits<double>::infinity());
      prof.action_values.push_back(action(p, eta));
      const double th = eta > 0 ? theta_plus(p, eta) : 0.0;
      prof.theta_plus.push_back(th);
      prof.log_s.push_back(th * omega);
    } catch (const std::exception& e) {
      std::ostringstream os;
      os << "j = " << j << ": " << e.what();
      prof.failures.push_back(os.str());
    }
  }
  return prof;
}

std::vector<double> wkb_dirichlet_levels(const WkbProfile& prof) {
  std::vector<double> out;
  for (std::size_t i = 1; i < prof.eta.size(); i += 2) out.push_back(prof.eta[i] / prof.epsilon);
  std::sort(out.begin(), out.end());
  return out;
}

SpacingReport spacing_check(const WkbProfile& prof, double omega) {
  SpacingReport r;
  if (prof.eta.size() < 2) {
    r.message = "insufficient levels";
    return r;
  }
  r.sufficient = true;
  r.min_eta_gap = std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l + 1 < prof.eta.size(); ++l) {
    r.min_eta_gap = std::min(r.min_eta_gap, prof.eta[l] - prof.eta[l + 1]);
    const double gap = prof.action_values[l + 1] - prof.action_values[l];
    r.max_action_gap_error = std::max(r.max_action_gap_error, std::abs(gap - kPi / omega));
  }
  r.min_xi_gap = omega * r.min_eta_gap;
  r.xi_gap_floor_ok = r.min_xi_gap >= 1.0 / (5.0 * omega);
  r.empirical_exponent = -std::log(r.min_eta_gap) / std::log(omega);
  std::ostringstream os;
  os << "min eta gap " << r.min_eta_gap << " (omega^-" << r.empirical_exponent << ")";
  r.message = os.str();
  return r;
}

}  // namespace slspec
