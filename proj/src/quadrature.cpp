#include "slspec/quadrature.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <mutex>

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace slspec::quad {

namespace {

Rule make_rule(int n) {
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  const double pi = boost::math::constants::pi<double>();
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    double p0 = 1.0, p1 = 0.0;
    for (int j = 1; j <= n; ++j) {
      double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
    }
    dp = n * (z * p0 - p1) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    r.x[i] = -z;
    r.x[n - 1 - i] = z;
    r.w[i] = w;
    r.w[n - 1 - i] = w;
  }
  return r;
}

}  // namespace

const Rule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, Rule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_rule(n)).first;
  return it->second;
}

double adaptive(const std::function<double(double)>& f, double a, double b, double tol, double* err) {
  using boost::math::quadrature::gauss_kronrod;
  double e = 0.0;
  double v = gauss_kronrod<double, 31>::integrate(f, a, b, 15, tol, &e);
  if (err) *err = e;
  return v;
}

TailSplit half_line(const std::function<double(double)>& f, double x_cut, double alpha,
                    const std::vector<double>& breaks, double tol) {
  TailSplit out;
  std::vector<double> cuts{0.0};
  for (double b : breaks)
    if (b > 0.0 && b < x_cut) cuts.push_back(b);
  // geometric cuts keep the relative resolution uniform on long ranges
  double last = cuts.back();
  for (double c = std::max(1.0, 2.0 * last); c < x_cut; c *= 4.0)
    if (c > last) cuts.push_back(c), last = c;
  cuts.push_back(x_cut);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) out.body += adaptive(f, cuts[i], cuts[i + 1], tol);
  const double fc = f(x_cut);
  if (fc == 0.0) {
    out.tail = 0.0;
  } else if (alpha > 1.0) {
    out.tail = fc * x_cut / (alpha - 1.0);
  } else {
    out.tail = std::numeric_limits<double>::infinity();
    out.tail_finite = false;
  }
  return out;
}

}  // namespace slspec::quad
