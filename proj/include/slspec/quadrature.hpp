#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace slspec::quad {

struct Rule {
  std::vector<double> x;  // nodes on [-1, 1]
  std::vector<double> w;
};

// Gauss-Legendre rule with n points, cached per n.
const Rule& gauss_legendre(int n);

// Fixed-order composite rule on the panels [b[i], b[i+1]].
template <class F>
auto panels(F&& f, const std::vector<double>& breaks, int order = 20) {
  const Rule& r = gauss_legendre(order);
  using R = decltype(f(0.0));
  R sum{};
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i], b = breaks[i + 1];
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    R part{};
    for (std::size_t k = 0; k < r.x.size(); ++k) part += r.w[k] * f(c + h * r.x[k]);
    sum += h * part;
  }
  return sum;
}

// Adaptive Gauss-Kronrod on [a, b] (b may be +inf).
double adaptive(const std::function<double(double)>& f, double a, double b, double tol = 1e-12,
                double* err = nullptr);

struct TailSplit {
  double body = 0.0;   // integral over [0, x_cut]
  double tail = 0.0;   // power-law tail estimate beyond x_cut
  bool tail_finite = true;
  double total() const { return body + tail; }
};

// Integral of f over [0, inf): adaptive quadrature on [0, x_cut], split at the
// given breakpoints, plus f(x_cut) * x_cut / (alpha - 1) assuming f ~ x^-alpha
// beyond x_cut.
TailSplit half_line(const std::function<double(double)>& f, double x_cut, double alpha,
                    const std::vector<double>& breaks = {}, double tol = 1e-12);

}  // namespace slspec::quad
