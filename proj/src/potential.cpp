#include "slspec/potential.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/math/constants/constants.hpp>
#include <boost/math/differentiation/autodiff.hpp>
#include <boost/math/interpolators/pchip.hpp>

#include "slspec/error.hpp"
#include "slspec/quadrature.hpp"

namespace slspec {

namespace {

constexpr int kAutodiffOrder = 6;

Error perr(const std::string& op, const std::string& msg) { return Error("potentials", op, msg); }

template <class T>
T closed_form_value(const ClosedForm& c, const T& x) {
  using std::pow;
  using std::sin;
  if (c.family == ClosedForm::Family::smooth_step) {
    const double xv = static_cast<double>(x);
    if (xv <= 1.0 - c.delta) return T(1.0);
    if (xv >= 1.0 + c.delta) return T(0.0);
    const double pi = boost::math::constants::pi<double>();
    return 0.5 * (1.0 - sin(pi * (x - 1.0) / (2.0 * c.delta)));
  }
  T u = x / c.scale;
  T up = u;
  for (int i = 1; i < static_cast<int>(c.power); ++i) up = up * u;
  return c.amplitude * pow(1.0 + up, -c.exponent / c.power) + c.offset;
}

}  // namespace

struct Potential::Table {
  std::vector<double> x, q;
  boost::math::interpolators::pchip<std::vector<double>> spline;
  Table(std::vector<double> xs, std::vector<double> qs)
      : x(xs), q(qs), spline(std::move(xs), std::move(qs)) {}
};

std::string to_string(PotentialKind k) {
  switch (k) {
    case PotentialKind::q1_rational: return "q1_rational";
    case PotentialKind::square_well: return "square_well";
    case PotentialKind::tabulated: return "tabulated";
    case PotentialKind::user_closed_form: return "user_closed_form";
  }
  return "unknown";
}

Potential Potential::q1(double offset) {
  Potential p;
  p.kind_ = PotentialKind::q1_rational;
  p.id_ = offset == 0.0 ? "q1" : "q1_offset";
  p.cf_ = ClosedForm{};
  p.cf_.offset = offset;
  p.decay_ = Decay{2.0, 4, 4};
  p.m_smooth_ = kAutodiffOrder;
  p.q0_ = p.eval(0.0);
  p.fill_origin_derivatives(4);
  return p;
}

Potential Potential::square_well() {
  Potential p;
  p.kind_ = PotentialKind::square_well;
  p.id_ = "square_well";
  // compact support: the decay record only matters for the tail machinery
  p.decay_ = Decay{1.0, 4, 4};
  p.m_smooth_ = 0;
  p.q0_ = 1.0;
  p.support_end_ = 1.0;
  p.breaks_ = {1.0};
  return p;
}

Potential Potential::closed_form(const ClosedForm& cf, Decay decay, std::string id) {
  if (cf.family == ClosedForm::Family::rational_power) {
    if (cf.power < 2 || std::floor(cf.power) != cf.power)
      throw perr("make_potential", "rational_power needs an integer power >= 2");
    if (cf.amplitude <= 0 || cf.scale <= 0) throw perr("make_potential", "amplitude and scale must be positive");
  } else if (cf.delta <= 0 || cf.delta >= 1) {
    throw perr("make_potential", "smooth_step needs 0 < delta < 1");
  }
  if (decay.k1 < decay.k2) throw perr("make_potential", "decay requires k1 >= k2");
  Potential p;
  p.kind_ = PotentialKind::user_closed_form;
  p.id_ = std::move(id);
  p.cf_ = cf;
  p.decay_ = decay;
  if (cf.family == ClosedForm::Family::smooth_step) {
    p.m_smooth_ = 1;
    p.support_end_ = 1.0 + cf.delta;
  } else {
    p.m_smooth_ = kAutodiffOrder;
  }
  p.q0_ = p.eval(0.0);
  p.fill_origin_derivatives(std::min(p.m_smooth_, 4));
  return p;
}

Potential Potential::tabulated(std::vector<double> x, std::vector<double> q, Decay decay, int m_smoothness,
                               bool extrapolate, std::string id) {
  if (x.size() < 4 || x.size() != q.size()) throw perr("make_potential", "table needs at least 4 (x,Q) rows");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(q[i] > 0.0)) throw perr("make_potential", "table values must be strictly positive");
    if (i > 0 && !(x[i] > x[i - 1])) throw perr("make_potential", "table x must be strictly increasing");
  }
  if (x.front() != 0.0) throw perr("make_potential", "table must start at x = 0");
  if (m_smoothness > 1)
    throw perr("make_potential", "monotone cubic interpolation is C^1; m_smoothness must be <= 1");
  if (decay.k1 < decay.k2) throw perr("make_potential", "decay requires k1 >= k2");
  Potential p;
  p.kind_ = PotentialKind::tabulated;
  p.id_ = std::move(id);
  p.decay_ = decay;
  p.m_smooth_ = m_smoothness;
  p.extrapolate_ = extrapolate;
  p.table_ = std::make_shared<const Table>(std::move(x), std::move(q));
  p.q0_ = p.table_->q.front();
  p.fill_origin_derivatives(m_smoothness);
  return p;
}

void Potential::fill_origin_derivatives(int count) {
  q0_derivs_.clear();
  for (int s = 1; s <= count; ++s) q0_derivs_.push_back(eval(0.0, s));
}

double Potential::table_end() const {
  return table_ ? table_->x.back() : std::numeric_limits<double>::infinity();
}

double Potential::eval(double x, int d) const {
  if (x < 0.0 || std::isnan(x)) throw perr("eval", "x must be >= 0");
  if (d < 0 || d > m_smooth_) throw perr("eval", "derivative order " + std::to_string(d) + " exceeds smoothness " +
                                                    std::to_string(m_smooth_));
  switch (kind_) {
    case PotentialKind::square_well:
      return x <= 1.0 ? 1.0 : 0.0;
    case PotentialKind::tabulated: {
      const double xe = table_->x.back();
      if (x <= xe) return d == 0 ? table_->spline(x) : table_->spline.prime(x);
      if (!extrapolate_) throw perr("eval", "x beyond table range and extrapolation disabled");
      const double qe = table_->q.back(), k = decay_.k2;
      const double v = qe * std::pow(xe / x, k);
      return d == 0 ? v : -k * v / x;
    }
    default:
      break;
  }
  if (d == 0) return closed_form_value(cf_, x);
  using boost::math::differentiation::make_fvar;
  auto xv = make_fvar<double, kAutodiffOrder>(x);
  auto v = closed_form_value(cf_, xv);
  return v.derivative(d);
}

double Potential::level_crossing(double level) const {
  if (level >= q0_) return 0.0;
  double lo = 0.0, hi = 1.0;
  if (compact_support()) {
    hi = support_end_;
    if (eval(hi) >= level) return hi;
  } else {
    while (eval(hi) >= level) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e300) throw perr("level_crossing", "profile does not decay below requested level");
    }
  }
  for (int it = 0; it < 2000 && hi - lo > 4e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (eval(mid) >= level)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::pair<std::vector<double>, std::vector<double>> read_table_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw perr("make_potential", "cannot read table " + path);
  std::vector<double> xs, qs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double x, q;
    if (!(ss >> x >> q)) continue;  // header row
    xs.push_back(x);
    qs.push_back(q);
  }
  return {xs, qs};
}

Potential make_potential(const nlohmann::json& spec) {
  const std::string kind = spec.value("kind", "");
  const nlohmann::json params = spec.value("params", nlohmann::json::object());
  auto decay_from = [&](bool required, Decay dflt) {
    if (!spec.contains("decay")) {
      if (required) throw perr("make_potential", "missing decay metadata");
      return dflt;
    }
    const auto& d = spec["decay"];
    Decay out;
    out.a = d.at("a").get<double>();
    out.k1 = d.at("k1").get<int>();
    out.k2 = d.at("k2").get<int>();
    if (out.a < 1.0 || out.k2 < 4 || out.k1 < out.k2) throw perr("make_potential", "decay needs a >= 1, k1 >= k2 >= 4");
    return out;
  };
  if (kind == "q1_rational" || kind == "q1") return Potential::q1(params.value("offset", 0.0));
  if (kind == "square_well") return Potential::square_well();
  if (kind == "user_closed_form") {
    ClosedForm cf;
    const std::string fam = params.value("family", "rational_power");
    if (fam == "smooth_step") {
      cf.family = ClosedForm::Family::smooth_step;
      cf.delta = params.value("delta", 0.1);
      return Potential::closed_form(cf, decay_from(false, Decay{1.0, 4, 4}), spec.value("id", "smooth_step"));
    }
    if (fam != "rational_power") throw perr("make_potential", "unknown closed-form family " + fam);
    cf.amplitude = params.value("amplitude", 1.0);
    cf.scale = params.value("scale", 1.0);
    cf.power = params.value("power", 2.0);
    cf.exponent = params.value("exponent", 4.0);
    cf.offset = params.value("offset", 0.0);
    const int k = static_cast<int>(std::floor(cf.exponent));
    Decay dflt{2.0 * std::max(1.0, cf.amplitude * std::pow(cf.scale, cf.exponent)), std::max(k, 4), std::max(k, 4)};
    return Potential::closed_form(cf, decay_from(false, dflt), spec.value("id", "closed_form"));
  }
  if (kind == "tabulated") {
    Decay d = decay_from(true, {});
    if (!spec.contains("table_path")) throw perr("make_potential", "tabulated kind needs table_path");
    auto [xs, qs] = read_table_csv(spec["table_path"].get<std::string>());
    return Potential::tabulated(std::move(xs), std::move(qs), d, spec.value("m_smoothness", 1),
                                spec.value("extrapolate", true), spec.value("id", "tabulated"));
  }
  throw perr("make_potential", "unknown potential kind '" + kind + "'");
}

Potential make_potential_by_name(const std::string& name) {
  if (name == "q1" || name == "q1_rational") return Potential::q1();
  if (name == "square_well") return Potential::square_well();
  if (name == "smooth_step") {
    ClosedForm cf;
    cf.family = ClosedForm::Family::smooth_step;
    return Potential::closed_form(cf, Decay{1.0, 4, 4}, "smooth_step");
  }
  if (name == "rational8") {
    ClosedForm cf;
    cf.power = 8;
    cf.exponent = 8;
    return Potential::closed_form(cf, Decay{2.0, 8, 8}, "rational8");
  }
  std::ifstream in(name);
  if (!in) throw perr("make_potential", "unknown potential '" + name + "' (not a built-in name or readable config)");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw perr("make_potential", std::string("config parse error: ") + e.what());
  }
  return make_potential(j.contains("potential") ? j["potential"] : j);
}

bool ClassReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const ClassCheck& c) { return c.pass; });
}

const ClassCheck* ClassReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

ClassReport validate_class(const Potential& p, int m, const ValidateOptions& opt) {
  ClassReport rep;
  std::vector<double> xs(opt.n_probe), qs(opt.n_probe);
  for (int i = 0; i < opt.n_probe; ++i) {
    xs[i] = opt.x_probe * i / (opt.n_probe - 1);
    qs[i] = p.eval(xs[i]);
  }

  {
    ClassCheck c{"positivity", true, ""};
    for (int i = 0; i < opt.n_probe; ++i)
      if (!(qs[i] > 0.0)) {
        c.pass = false;
        c.detail = "Q(" + std::to_string(xs[i]) + ") = " + std::to_string(qs[i]);
        break;
      }
    rep.checks.push_back(c);
  }

  {
    ClassCheck c{"monotone_decrease", true, ""};
    std::ostringstream why;
    const double jump_tol = 1e-3 * std::max(1.0, std::abs(p.q0()));
    for (int i = 0; i + 1 < opt.n_probe; ++i) {
      double a = xs[i], b = xs[i + 1], qa = qs[i], qb = qs[i + 1];
      if (!(qa > qb) && c.pass) {
        c.pass = false;
        why << "not strictly decreasing on [" << a << ", " << b << "]; ";
      }
      // a jump survives halving of the interval; a smooth slope does not
      if (std::abs(qa - qb) > jump_tol) {
        for (int it = 0; it < 60 && std::abs(qa - qb) > jump_tol; ++it) {
          double mid = 0.5 * (a + b), qm = p.eval(mid);
          if (std::abs(qa - qm) >= std::abs(qm - qb))
            b = mid, qb = qm;
          else
            a = mid, qa = qm;
        }
        if (std::abs(qa - qb) > jump_tol) {
          c.pass = false;
          why << "discontinuity at x = " << 0.5 * (a + b) << "; ";
        }
      }
      if (why.tellp() > 400) break;
    }
    c.detail = why.str();
    rep.checks.push_back(c);
  }

  {
    ClassCheck c{"origin_derivatives", true, ""};
    std::ostringstream why;
    for (int s = 1; s <= m; ++s) {
      if (s > p.m_smoothness()) {
        c.pass = false;
        why << "order " << s << " not available (smoothness " << p.m_smoothness() << "); ";
        continue;
      }
      const double v = p.eval(0.0, s);
      if (std::abs(v) > opt.deriv_tol) {
        c.pass = false;
        why << "Q^(" << s << ")(0) = " << v << "; ";
      }
    }
    c.detail = why.str();
    rep.checks.push_back(c);
  }

  {
    ClassCheck c{"decay_bounds", true, ""};
    const Decay& d = p.decay();
    for (int i = 0; i <= 200; ++i) {
      const double x = opt.x_decay * std::pow(100.0, i / 200.0);
      const double q = p.eval(x);
      const double lo = std::pow(x, -d.k1) / d.a, hi = d.a * std::pow(x, -d.k2);
      if (q < lo || q > hi) {
        c.pass = false;
        std::ostringstream why;
        why << "Q(" << x << ") = " << q << " outside [" << lo << ", " << hi << "]";
        c.detail = why.str();
        break;
      }
    }
    rep.checks.push_back(c);
  }

  {
    ClassCheck c{"integrability", false, ""};
    const auto split = quad::half_line([&](double t) { return (1.0 + t) * std::sqrt(std::max(0.0, p.eval(t))); },
                                       opt.x_tail, 0.0, p.breakpoints(), 1e-10);
    rep.integral_truncated = split.body;
    // analytic bound a * int_{x_tail}^inf x^{-k2/2} (1 + x) dx
    const double h = 0.5 * p.decay().k2, X = opt.x_tail, a = p.decay().a;
    if (p.compact_support() && p.support_end() <= X) {
      rep.tail_bound = 0.0;
    } else if (h > 2.0) {
      rep.tail_bound = a * (std::pow(X, 1.0 - h) / (h - 1.0) + std::pow(X, 2.0 - h) / (h - 2.0));
    } else {
      rep.tail_bound = std::numeric_limits<double>::infinity();
    }
    rep.tail_finite = std::isfinite(rep.tail_bound);
    c.pass = std::isfinite(split.body);
    std::ostringstream why;
    why << "truncated at " << X << ": " << split.body << ", tail bound " << rep.tail_bound;
    c.detail = why.str();
    rep.checks.push_back(c);
  }
  return rep;
}

}  // namespace slspec
