// Jost function by the Volterra equation for g = e^{-ikx} f:
//   g(x) = 1 + int_x^inf D(k, t-x) V(t) g(t) dt,  D(k,u) = (e^{2iku}-1)/(2ik).
// The discrete kernel is strictly triangular, so the successive
// approximations terminate and their sum equals the inward marching solution
// computed here.  Summing the iterates one by one is not an option for
// k = i tau: they alternate in sign and peak near e^{c} before cancelling.
#include <algorithm>
#include <cmath>
#include <complex>

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <sstream>

#include "slspec/error.hpp"
#include "slspec/forward.hpp"
#include "slspec/quadrature.hpp"

namespace slspec {

namespace {

using cd = std::complex<double>;

Error jerr(const std::string& op, const std::string& msg) { return Error("forward_spectral", op, msg); }

struct JostGrid;
void fill_potential(JostGrid& g, const Potential& p, double omega, const JostOptions& opt);

struct JostGrid {
  std::vector<double> x;
  std::vector<double> VL, VR;  // one-sided limits of V at each node
  double tail_bound = 0.0;
};

double tail_estimate(const Potential& p, double omega, double kmag, double X) {
  if (p.compact_support() && X >= p.support_end()) return 0.0;
  const double k2 = p.decay().k2;
  const double v = omega * omega * p.eval(X);
  // |D(k,u)| <= min(u, 1/|k|) with |V| ~ v (X/t)^k2 beyond X
  const double lin = v * X * X / (k2 - 2.0);
  const double flat = v * X / (k2 - 1.0) / std::max(kmag, 1e-300);
  return std::min(lin, flat);
}

JostGrid make_grid(const Potential& p, double omega, double kmag, const JostOptions& opt, double extra_node = -1.0) {
  JostGrid g;
  double X = opt.x_inf;
  if (X <= 0.0) {
    if (p.compact_support()) {
      X = p.support_end();
    } else {
      X = std::max(4.0, p.level_crossing(1e-8 / (omega * omega)));
      while (tail_estimate(p, omega, kmag, X) > 1e-11 && X < 1e7) X *= 1.5;
    }
  }
  g.tail_bound = opt.zero_potential ? 0.0 : tail_estimate(p, omega, kmag, X);
  std::vector<double> breaks;
  for (double b : p.breakpoints())
    if (b > 0 && b < X) breaks.push_back(b);
  if (extra_node > 0 && extra_node < X) breaks.push_back(extra_node);
  breaks.push_back(X);
  std::sort(breaks.begin(), breaks.end());
  double x = 0.0;
  g.x.push_back(0.0);
  std::size_t bi = 0;
  while (x < X) {
    const double local = omega * std::sqrt(std::max(0.0, p.eval(x))) + kmag + 1.0;
    const double h = std::max(opt.h0 / local, opt.growth * x);
    double nx = x + h;
    while (bi < breaks.size() && breaks[bi] <= x) ++bi;
    if (bi < breaks.size() && nx >= breaks[bi] - 1e-12 * breaks[bi]) nx = breaks[bi];
    g.x.push_back(nx);
    x = nx;
  }
  fill_potential(g, p, omega, opt);
  return g;
}

void fill_potential(JostGrid& g, const Potential& p, double omega, const JostOptions& opt) {
  const std::size_t n = g.x.size();
  g.VL.assign(n, 0.0);
  g.VR.assign(n, 0.0);
  if (!opt.zero_potential) {
    const double w2 = omega * omega;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = -w2 * p.eval(g.x[i]);
      g.VL[i] = g.VR[i] = v;
      for (double b : p.breakpoints())
        if (b == g.x[i]) g.VR[i] = -w2 * p.eval(b * (1.0 + 1e-14) + 1e-300);
    }
  }
}

JostGrid bisect_cells(const JostGrid& g, const Potential& p, double omega, const JostOptions& opt) {
  JostGrid f;
  f.tail_bound = g.tail_bound;
  for (std::size_t i = 0; i + 1 < g.x.size(); ++i) {
    f.x.push_back(g.x[i]);
    f.x.push_back(0.5 * (g.x[i] + g.x[i + 1]));
  }
  f.x.push_back(g.x.back());
  fill_potential(f, p, omega, opt);
  return f;
}

// int_0^d D(k,s) s^m ds for m = 0, 1
void cell_moments(cd beta, double d, cd& m0, cd& m1) {
  const cd z = beta * d;
  if (std::abs(z) < 0.5) {
    // D(k,s) = sum_{n>=1} beta^{n-1} s^n / n!
    m0 = m1 = 0.0;
    cd bp = 1.0;
    double fact = 1.0;
    for (int n = 1; n <= 30; ++n) {
      fact *= n;
      const cd term = bp / fact;
      m0 += term * std::pow(d, n + 1) / double(n + 1);
      m1 += term * std::pow(d, n + 2) / double(n + 2);
      bp *= beta;
      if (std::abs(bp) * std::pow(d, n) / fact < 1e-18) break;
    }
    return;
  }
  const cd ez = std::exp(z);
  const cd e0 = (ez - 1.0) / beta;
  const cd e1 = d * ez / beta - (ez - 1.0) / (beta * beta);
  m0 = (e0 - d) / beta;
  m1 = (e1 - 0.5 * d * d) / beta;
}

cd kernel_D(cd k, double u) {
  const cd z = 2.0 * cd(0, 1) * k * u;
  if (std::abs(z) < 1e-4) return u * (1.0 + z / 2.0 + z * z / 6.0);
  return (std::exp(z) - 1.0) / (2.0 * cd(0, 1) * k);
}

// Returns g on the grid (inward march).
std::vector<cd> march(const JostGrid& g, cd k) {
  const std::size_t n = g.x.size();
  std::vector<cd> G(n);
  const cd beta = 2.0 * cd(0, 1) * k;
  G[n - 1] = 1.0;
  cd I = 0.0, P = 0.0;
  for (std::size_t i = n - 1; i-- > 0;) {
    const double d = g.x[i + 1] - g.x[i];
    cd m0, m1;
    cell_moments(beta, d, m0, m1);
    const cd a = m0 - m1 / d, b = m1 / d;
    const cd h_next = g.VL[i + 1] * G[i + 1];
    const cd rest = b * h_next + std::exp(beta * d) * I + kernel_D(k, d) * P;
    const cd gi = (1.0 + rest) / (1.0 - a * g.VR[i]);
    G[i] = gi;
    const cd hi = g.VR[i] * gi;
    I = a * hi + rest;
    P += 0.5 * d * (hi + h_next);
  }
  return G;
}

// Trapezoid-Filon error is O(h^2); one Richardson step on nested grids.
struct GridPair {
  JostGrid coarse, fine;
  bool richardson;
  GridPair(const Potential& p, double omega, double kmag, const JostOptions& opt, double extra = -1.0)
      : coarse(make_grid(p, omega, kmag, opt, extra)), richardson(opt.richardson) {
    if (richardson) fine = bisect_cells(coarse, p, omega, opt);
  }
  cd value(cd k) const {
    const cd c = march(coarse, k)[0];
    if (!richardson) return c;
    return (4.0 * march(fine, k)[0] - c) / 3.0;
  }
};

double series_constant(const Potential& p, double omega, double kmag, const JostOptions& opt) {
  if (opt.zero_potential) return 0.0;
  const double w2 = omega * omega;
  auto f = [&](double t) { return 2.0 * std::sqrt(2.0) * t * w2 * p.eval(t) / (1.0 + kmag * t); };
  double s = 0.0;
  std::vector<double> cuts{0.0};
  for (double b : p.breakpoints()) cuts.push_back(b);
  const double end = p.compact_support() ? p.support_end() : 1e4;
  for (double c = 2.0; c < end; c *= 2.0)
    if (c > cuts.back()) cuts.push_back(c);
  cuts.push_back(end);
  const auto& r = slspec::quad::gauss_legendre(30);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    if (b <= a) continue;
    for (std::size_t q = 0; q < r.x.size(); ++q) s += 0.5 * (b - a) * r.w[q] * f(0.5 * (a + b) + 0.5 * (b - a) * r.x[q]);
  }
  return s;
}

}  // namespace

JostSample jost(const Potential& p, double omega, std::complex<double> k, const JostOptions& opt) {
  if (k.imag() < 0.0) throw jerr("jost", "Im k must be >= 0");
  if (k == 0.0) throw jerr("jost", "k = 0 is not supported");
  JostSample out;
  out.k = k;
  const double kmag = std::abs(k);
  // factorial bound on the omitted terms: sum_{n > N} c^n / n!
  const double c = series_constant(p, omega, kmag, opt);
  int N = 0;
  double term = 1.0, tail = 0.0;
  if (c > 0.0) {
    for (N = 1; N <= opt.n_max; ++N) {
      term *= c / N;
      const double rest = term * c / (N + 1) / std::max(1e-300, 1.0 - c / (N + 2));
      if (N + 2 > c && rest < opt.tol) {
        tail = rest;
        break;
      }
    }
    if (N > opt.n_max) {
      std::ostringstream os;
      os << "series not converged within n_max = " << opt.n_max << " (constant " << c << ")";
      throw jerr("jost", os.str());
    }
  }
  out.iterations_used = N;
  out.tail_truncation = tail;
  const GridPair g(p, omega, kmag, opt);
  out.quad_tail = g.coarse.tail_bound;
  out.F = g.value(k);
  return out;
}

std::complex<double> jost_solution(const Potential& p, double omega, std::complex<double> k, double x0,
                                   const JostOptions& opt) {
  const JostGrid g = make_grid(p, omega, std::abs(k), opt, x0);
  const auto G = march(g, k);
  auto it = std::lower_bound(g.x.begin(), g.x.end(), x0);
  if (it == g.x.end()) return std::exp(cd(0, 1) * k * x0);
  const std::size_t i = static_cast<std::size_t>(it - g.x.begin());
  return std::exp(cd(0, 1) * k * g.x[i]) * G[i];
}

JostIdentity jost_identity_check(const Potential& p, double omega, int j, const SpectralData& sd,
                                 const JostOptions& opt) {
  if (j < 0 || j >= sd.count()) throw jerr("jost_identity_check", "index out of range");
  JostIdentity r;
  const double xi = sd.xi[j];
  double gap = std::numeric_limits<double>::infinity();
  if (j > 0) gap = std::min(gap, xi - sd.xi[j - 1]);
  if (j + 1 < sd.count()) gap = std::min(gap, sd.xi[j + 1] - xi);
  gap = std::min(gap, xi);
  r.step = std::min(gap / 8.0, xi / 100.0);
  if (r.step > gap / 4.0) throw jerr("jost_identity_check", "difference step exceeds a quarter of the spectral gap");

  const GridPair g(p, omega, xi, opt);
  auto F = [&](double tau) { return g.value(cd(0, tau)).real(); };
  const double fp = F(xi + r.step), fm = F(xi - r.step);
  const double fp2 = F(xi + 2 * r.step), fm2 = F(xi - 2 * r.step);
  // fourth-order central difference
  r.Fdot = (8.0 * (fp - fm) - (fp2 - fm2)) / (12.0 * r.step);
  r.F_at_root = std::abs(F(xi));
  r.F_scale = std::max({std::abs(F(xi + 0.5 * gap)), std::abs(F(xi - 0.5 * gap)), std::abs(fp2), std::abs(fm2)});

  const EigenState st = eigen_state(p, omega, xi);
  r.lhs = 4.0 * xi * xi / sd.C[j];
  // -s^2 Fdot^2 with Fdot = -i dF(i tau)/dtau
  r.rhs = std::exp(2.0 * st.log_abs_s) * r.Fdot * r.Fdot;
  r.residual = std::abs(r.lhs - r.rhs) / r.lhs;
  return r;
}

}  // namespace slspec
