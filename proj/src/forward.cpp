#include "slspec/forward.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <sstream>

#include <boost/math/constants/constants.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

#include "slspec/error.hpp"
#include "slspec/log.hpp"
#include "slspec/quadrature.hpp"

namespace slspec {

namespace odeint = boost::numeric::odeint;

namespace {

const double kPi = boost::math::constants::pi<double>();

Error ferr(const std::string& op, const std::string& msg) { return Error("forward_spectral", op, msg); }

// Integrate sys from x0 to x1 (either direction), restarting at every
// breakpoint of the potential that lies strictly inside.
template <std::size_t N, class Sys>
void integrate(Sys&& sys, std::array<double, N>& y, double x0, double x1, const Potential& p,
               const ShootOptions& opt) {
  if (x0 == x1) return;
  std::vector<double> cuts{x0};
  const double lo = std::min(x0, x1), hi = std::max(x0, x1);
  std::vector<double> inner;
  for (double b : p.breakpoints())
    if (b > lo && b < hi) inner.push_back(b);
  if (x1 < x0) std::reverse(inner.begin(), inner.end());
  cuts.insert(cuts.end(), inner.begin(), inner.end());
  cuts.push_back(x1);
  auto stepper = odeint::make_controlled(opt.ode_atol, opt.ode_rtol,
                                         odeint::runge_kutta_fehlberg78<std::array<double, N>>());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    const double dt = (b - a) * 1e-3;
    odeint::integrate_adaptive(stepper, sys, y, a, b, dt);
  }
}

struct Shooter {
  const Potential& p;
  double omega;
  ShootOptions opt;
  double w2;  // omega^2
  double S;   // Pruefer scale

  Shooter(const Potential& pot, double om, const ShootOptions& o)
      : p(pot), omega(om), opt(o), w2(om * om), S(std::max(1.0, om * std::sqrt(pot.q0()))) {}

  double turning(double xi) const { return p.level_crossing(xi * xi / w2); }

  double radius(double xi) const {
    if (p.compact_support()) return p.support_end();
    return p.level_crossing(opt.tail_ratio * xi * xi / w2);
  }

  double theta_left(double xi, double xm) const {
    std::array<double, 1> th{0.0};
    const double xi2 = xi * xi;
    auto sys = [&](const std::array<double, 1>& y, std::array<double, 1>& dy, double x) {
      const double c = std::cos(y[0]), s = std::sin(y[0]);
      dy[0] = S * c * c + (w2 * p.eval(x) - xi2) / S * s * s;
    };
    integrate(sys, th, 0.0, xm, p, opt);
    return th[0];
  }

  // Backward Riccati for the decaying solution: (u, J, L) at xm.
  std::array<double, 3> right(double xi, double xm, double X) const {
    std::array<double, 3> y{-xi, 0.5 / xi, 0.0};
    const double xi2 = xi * xi;
    auto sys = [&](const std::array<double, 3>& s, std::array<double, 3>& ds, double x) {
      ds[0] = -s[0] * s[0] + xi2 - w2 * p.eval(x);
      ds[1] = -2.0 * s[0] * s[1] - 1.0;
      ds[2] = s[0];
    };
    integrate(sys, y, X, xm, p, opt);
    return y;
  }

  double mismatch(double xi, double xm, double X) const {
    const double tl = theta_left(xi, xm);
    const double u = right(xi, xm, X)[0];
    return tl - std::atan2(S, u);
  }

  int count(double xi) const {
    if (xi >= omega * std::sqrt(p.q0())) return 0;
    const double xm = turning(xi);
    const double X = std::max(radius(xi), xm);
    const double m = mismatch(xi, xm, X);
    if (m <= 0.0) return 0;
    return static_cast<int>(std::ceil(m / kPi - 1e-12));
  }

  double refine(double a, double b, int n, double X) const {
    const double xm = turning(a);
    X = std::max(X, xm);
    auto f = [&](double xi) { return mismatch(xi, xm, X) - n * kPi; };
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (!std::isfinite(fa) || !std::isfinite(fb) || fa * fb > 0.0) {
      std::ostringstream os;
      os << "bracket failure on [" << a << ", " << b << "] for node count " << n << ": mismatch " << fa << ", "
         << fb;
      throw ferr("eigenvalues", os.str());
    }
    const int bits = std::max(20, static_cast<int>(-std::log2(opt.tol)) + 2);
    boost::math::tools::eps_tolerance<double> tol(std::min(bits, 52));
    std::uintmax_t iters = 200;
    auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, iters);
    return 0.5 * (r.first + r.second);
  }
};

}  // namespace

std::pair<double, double> calogero_bounds(const Potential& p, double omega) {
  double int_q = 0.0, int_sq = 0.0;
  if (p.compact_support()) {
    std::vector<double> br{0.0};
    for (double b : p.breakpoints())
      if (b < p.support_end()) br.push_back(b);
    br.push_back(p.support_end());
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
      int_q += quad::adaptive([&](double x) { return p.eval(x); }, br[i], br[i + 1], 1e-13);
      int_sq += quad::adaptive([&](double x) { return std::sqrt(p.eval(x)); }, br[i], br[i + 1], 1e-13);
    }
  } else {
    const double k2 = p.decay().k2;
    if (k2 <= 2.0) throw ferr("calogero_bounds", "sqrt(Q) is not integrable for decay exponent <= 2");
    const double xc = std::min(1e3, p.table_end());
    auto a = quad::half_line([&](double x) { return p.eval(x); }, xc, k2, p.breakpoints(), 1e-13);
    auto b = quad::half_line([&](double x) { return std::sqrt(p.eval(x)); }, xc, 0.5 * k2, p.breakpoints(), 1e-13);
    if (!a.tail_finite || !b.tail_finite) throw ferr("calogero_bounds", "divergent quadrature");
    int_q = a.total();
    int_sq = b.total();
  }
  const double lower = omega / (kPi * std::sqrt(p.q0())) * int_q - 0.5;
  const double upper = 2.0 * omega / kPi * int_sq;
  return {lower, upper};
}

int eigen_count(const Potential& p, double omega, double xi, const ShootOptions& opt) {
  return Shooter(p, omega, opt).count(xi);
}

std::vector<double> eigenvalues(const Potential& p, double omega, const ShootOptions& opt) {
  if (!(omega > 0.0)) throw ferr("eigenvalues", "omega must be positive");
  Shooter sh(p, omega, opt);
  const double top = omega * std::sqrt(p.q0());
  const double floor = opt.xi_floor > 0.0 ? opt.xi_floor : 1e-6 / omega;
  const int total = sh.count(floor);
  log::debug("eigenvalues: count " + std::to_string(total) + " above floor " + std::to_string(floor));
  std::vector<double> out;
  if (total == 0) return out;

  struct Bracket {
    double a, b;
    int n;  // node count = eigen-parameters above b
  };
  std::vector<Bracket> brackets;
  std::function<void(double, double, int, int)> isolate = [&](double a, double b, int ca, int cb) {
    if (ca == cb) return;
    if (ca < cb) {
      std::ostringstream os;
      os << "oscillation count not monotone: N(" << a << ") = " << ca << " < N(" << b << ") = " << cb;
      throw ferr("eigenvalues", os.str());
    }
    if (ca - cb == 1) {
      brackets.push_back({a, b, cb});
      return;
    }
    if (b - a <= 1e-14 * b) {
      std::ostringstream os;
      os << "bracket failure: " << ca - cb << " levels within [" << a << ", " << b << "]";
      throw ferr("eigenvalues", os.str());
    }
    const double mid = b / a > 4.0 ? std::sqrt(a * b) : 0.5 * (a + b);
    const int cm = sh.count(mid);
    isolate(a, mid, ca, cm);
    isolate(mid, b, cm, cb);
  };
  isolate(floor, top, total, 0);

  // Narrow wide brackets by counting first: the truncation radius follows the
  // lower end, which for near-threshold levels can sit far below the root.
  for (auto& br : brackets)
    while (br.b > 1.5 * br.a) {
      const double mid = std::sqrt(br.a * br.b);
      (sh.count(mid) > br.n ? br.a : br.b) = mid;
    }
  for (const auto& br : brackets) out.push_back(sh.refine(br.a, br.b, br.n, sh.radius(br.a)));
  std::sort(out.begin(), out.end());

  if (opt.sensitivity_check && !p.compact_support()) {
    const auto& br = brackets.front().a < brackets.back().a ? brackets.front() : brackets.back();
    const double again = sh.refine(br.a, br.b, br.n, 2.0 * sh.radius(br.a));
    if (std::abs(again - out.front()) > opt.sensitivity_tol * std::max(out.front(), 1e-300) + 1e-15) {
      std::ostringstream os;
      os << "truncation radius too small: smallest xi moved from " << out.front() << " to " << again
         << " when the radius doubled";
      throw ferr("eigenvalues", os.str());
    }
  }
  return out;
}

EigenState eigen_state(const Potential& p, double omega, double xi, const ShootOptions& opt) {
  Shooter sh(p, omega, opt);
  EigenState st;
  st.xi = xi;
  st.x_match = sh.turning(xi);
  st.x_inf = std::max(sh.radius(xi), st.x_match);
  const double xi2 = xi * xi, w2 = sh.w2;
  std::array<double, 3> left{0.0, 1.0, 0.0};
  auto sys = [&](const std::array<double, 3>& y, std::array<double, 3>& dy, double x) {
    dy[0] = y[1];
    dy[1] = (xi2 - w2 * p.eval(x)) * y[0];
    dy[2] = y[0] * y[0];
  };
  integrate(sys, left, 0.0, st.x_match, p, opt);
  const auto right = sh.right(xi, st.x_match, st.x_inf);
  const double psi_m = left[0];
  const double tail = psi_m * psi_m * right[1];
  const double norm = left[2] + tail;
  if (!(norm > 0.0) || !std::isfinite(norm)) throw ferr("characteristic_values", "normalization integral not finite");
  // the analytic tail beyond X is exp(-2 xi X)/(2 xi) relative to the value there
  if (right[1] * 2.0 * xi < 1.0 - 1e-12 && tail > 0.5 * norm && st.x_inf == st.x_match && !p.compact_support())
    throw ferr("characteristic_values", "normalization dominated by the tail: increase the truncation radius");
  st.C = 1.0 / norm;
  st.log_abs_s = std::log(std::abs(psi_m) / std::sqrt(norm)) - right[2] + xi * st.x_inf;
  return st;
}

std::vector<double> characteristic_values(const Potential& p, double omega, const std::vector<double>& xi,
                                          const ShootOptions& opt) {
  std::vector<double> C;
  C.reserve(xi.size());
  for (double x : xi) C.push_back(eigen_state(p, omega, x, opt).C);
  return C;
}

SpectralData forward_spectrum(const Potential& p, double omega, const ShootOptions& opt) {
  SpectralData sd;
  sd.omega = omega;
  sd.potential_id = p.id();
  sd.q0 = p.q0();
  sd.q0_derivatives = p.q0_derivatives();
  sd.xi = eigenvalues(p, omega, opt);
  sd.C = characteristic_values(p, omega, sd.xi, opt);
  return sd;
}

double squarewell_condition(double omega, double xi) {
  const double k = std::sqrt(std::max(0.0, omega * omega - xi * xi));
  return xi * std::sin(k) + k * std::cos(k);
}

bool squarewell_phase_guard(double omega) {
  const double t = omega - 0.5 * kPi;
  const double d = std::abs(t - kPi * std::round(t / kPi));
  return d >= 0.2;
}

SpectralData squarewell_oracle(double omega) {
  if (!(omega >= 1.0)) throw ferr("squarewell_oracle", "omega must be >= 1");
  SpectralData sd;
  sd.omega = omega;
  sd.potential_id = "square_well";
  sd.q0 = 1.0;
  // scan in kappa = sqrt(omega^2 - xi^2) on (0, omega)
  auto g = [&](double k) {
    const double xi = std::sqrt(std::max(0.0, omega * omega - k * k));
    return xi * std::sin(k) + k * std::cos(k);
  };
  const int M = 4000 + static_cast<int>(200 * omega);
  double k0 = omega * 1e-9, g0 = g(k0);
  for (int i = 1; i <= M; ++i) {
    const double k1 = omega * (i == M ? 1.0 - 1e-12 : static_cast<double>(i) / M);
    const double g1 = g(k1);
    if (g0 * g1 < 0.0) {
      boost::math::tools::eps_tolerance<double> tol(52);
      std::uintmax_t it = 200;
      auto r = boost::math::tools::toms748_solve(g, k0, k1, g0, g1, tol, it);
      const double k = 0.5 * (r.first + r.second);
      const double xi = std::sqrt(omega * omega - k * k);
      if (xi > 0.0) {
        sd.xi.push_back(xi);
        sd.C.push_back(2.0 * xi / (1.0 + xi) * k * k);
      }
    }
    k0 = k1;
    g0 = g1;
  }
  std::vector<std::size_t> idx(sd.xi.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return sd.xi[a] < sd.xi[b]; });
  SpectralData s2 = sd;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    s2.xi[i] = sd.xi[idx[i]];
    s2.C[i] = sd.C[idx[i]];
  }
  return s2;
}

}  // namespace slspec
