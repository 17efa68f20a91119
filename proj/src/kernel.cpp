#include "slspec/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <tuple>

#include <Eigen/Dense>
#include <boost/math/constants/constants.hpp>

#include "slspec/error.hpp"
#include "slspec/quadrature.hpp"

namespace slspec {

namespace {

const double kPi = boost::math::constants::pi<double>();
const cplx kI(0.0, 1.0);

Error kerr(const std::string& op, const std::string& msg) { return Error("gl_kernel", op, msg); }

// Both profile integrals share the same structure:
//   J(a) = int_0^inf (cos p - 1) h(p; a) dp
// with h1 = 1/(p (p+s)) (for g) and h3 = 1/(s (p+s)) (for g'), s = sqrt(p^2+a).
// [0,1]: graded Gauss panels.  [1,inf): the non-oscillatory part after p = 1/t,
// the oscillatory part on pi-panels up to K and an integration-by-parts
// series beyond K built from the expansion of h in powers of a/p^2.
struct ProfileIntegrals {
  cplx J1, J3;
};

ProfileIntegrals profile_integrals(cplx a) {
  const double ra = std::sqrt(std::abs(a));
  ProfileIntegrals out{0.0, 0.0};

  // [0, 1]
  {
    std::vector<double> br;
    for (double p = 1.0; p > 1e-9; p *= 0.5) br.push_back(p);
    if (ra < 1.0 && ra > 1e-9) br.push_back(ra);
    br.push_back(0.0);
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());
    const auto& r = quad::gauss_legendre(12);
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
      const double lo = br[i], hi = br[i + 1], c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
      for (std::size_t k = 0; k < r.x.size(); ++k) {
        const double p = c + h * r.x[k];
        const double sp = std::sin(0.5 * p);
        const double cm1 = -2.0 * sp * sp;
        const cplx s = std::sqrt(p * p + a);
        out.J1 += h * r.w[k] * cm1 / (p * (p + s));
        out.J3 += h * r.w[k] * cm1 / (s * (p + s));
      }
    }
  }

  // - int_1^inf h dp, with p = 1/t
  {
    std::vector<double> br{0.0};
    if (ra > 1.0)
      for (double t = 1e-3 / ra; t < 1.0; t *= 2.0) br.push_back(t);
    br.push_back(1.0);
    const auto& r = quad::gauss_legendre(16);
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
      const double lo = br[i], hi = br[i + 1], c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
      for (std::size_t k = 0; k < r.x.size(); ++k) {
        const double t = c + h * r.x[k];
        const cplx q = std::sqrt(1.0 + a * t * t);
        out.J1 -= h * r.w[k] / (1.0 + q);
        out.J3 -= h * r.w[k] / (q * (1.0 + q));
      }
    }
  }

  // int_1^inf cos(p) h dp = (I+ + I-)/2 with I+- = int e^{+-ip} h
  {
    const double Kmin = std::max(40.0, 10.0 * ra);
    const int panels = static_cast<int>(std::ceil((Kmin - 1.0) / kPi));
    const double K = 1.0 + panels * kPi;
    const auto& r = quad::gauss_legendre(16);
    cplx c1 = 0.0, c3 = 0.0;
    for (int m = 0; m < panels; ++m) {
      const double lo = 1.0 + m * kPi, c = lo + 0.5 * kPi, h = 0.5 * kPi;
      for (std::size_t k = 0; k < r.x.size(); ++k) {
        const double p = c + h * r.x[k];
        const cplx s = std::sqrt(p * p + a);
        const double cp = std::cos(p);
        c1 += h * r.w[k] * cp / (p * (p + s));
        c3 += h * r.w[k] * cp / (s * (p + s));
      }
    }
    // h1 = sum_n c_n a^{n-1} p^{-2n},  c_n = binom(1/2, n)
    // h3 = -sum_n d_n a^{n-1} p^{-2n}, d_n = binom(-1/2, n)
    constexpr int kTerms = 40, kDeriv = 12;
    cplx d1[kDeriv + 1], d3[kDeriv + 1];
    for (int m = 0; m <= kDeriv; ++m) d1[m] = d3[m] = 0.0;
    double cn = 1.0, dn = 1.0;
    cplx apow = 1.0;
    for (int n = 1; n <= kTerms; ++n) {
      cn *= (0.5 - (n - 1)) / n;
      dn *= (-0.5 - (n - 1)) / n;
      // derivatives of p^{-2n} at K
      double fall = 1.0;
      for (int m = 0; m <= kDeriv; ++m) {
        const double dm = fall * std::pow(K, -2.0 * n - m);
        d1[m] += cn * apow * dm;
        d3[m] -= dn * apow * dm;
        fall *= -2.0 * n - m;
      }
      apow *= a;
      if (std::abs(apow) * std::pow(K, -2.0 * n) < 1e-300) break;
    }
    const cplx ep = std::exp(kI * K), em = std::exp(-kI * K);
    cplx t1p = 0.0, t1m = 0.0, t3p = 0.0, t3m = 0.0;
    cplx ip = kI, im = -kI;
    for (int m = 0; m <= kDeriv; ++m) {
      t1p += ip * d1[m];
      t1m += im * d1[m];
      t3p += ip * d3[m];
      t3m += im * d3[m];
      ip *= kI;
      im *= -kI;
    }
    c1 += 0.5 * (ep * t1p + em * t1m);
    c3 += 0.5 * (ep * t3p + em * t3m);
    out.J1 += c1;
    out.J3 += c3;
  }
  return out;
}

void check_w(cplx w, const char* op) {
  if (!(w.real() > 0.0)) throw kerr(op, "Re w must be positive");
}

}  // namespace

std::pair<cplx, cplx> phi_profile(double u, cplx w) {
  if (u == 0.0) return {0.0, -0.25 * w};
  const cplx a = w * u * u;
  const auto J = profile_integrals(a);
  return {w * u / kPi * J.J1, w / kPi * J.J3};
}

cplx phi_kernel(double x, double y, cplx w, double /*tol*/) {
  check_w(w, "phi_kernel");
  if (x < 0.0 || y < 0.0) throw kerr("phi_kernel", "x, y must be >= 0");
  if (x == 0.0 || y == 0.0) return 0.0;
  return phi_profile(std::abs(x - y), w).first - phi_profile(x + y, w).first;
}

cplx phi_diag_derivative(double x, cplx w, double /*tol*/) {
  check_w(w, "phi_diag_derivative");
  if (x < 0.0) throw kerr("phi_diag_derivative", "x must be >= 0");
  return -2.0 * phi_profile(2.0 * x, w).second;
}

std::vector<double> simpson_weights(std::size_t i, double h) {
  std::vector<double> w(i + 1, 0.0);
  if (i == 0) return w;
  if (i == 1) {
    w[0] = w[1] = 0.5 * h;
    return w;
  }
  std::size_t simp = (i % 2 == 0) ? i : i - 3;
  for (std::size_t k = 0; k + 2 <= simp; k += 2) {
    w[k] += h / 3.0;
    w[k + 1] += 4.0 * h / 3.0;
    w[k + 2] += h / 3.0;
  }
  if (simp != i) {
    const std::size_t k = simp;
    w[k] += 3.0 * h / 8.0;
    w[k + 1] += 9.0 * h / 8.0;
    w[k + 2] += 9.0 * h / 8.0;
    w[k + 3] += 3.0 * h / 8.0;
  }
  return w;
}

std::vector<double> KernelField::weights(std::size_t i) const { return simpson_weights(i, h); }

KernelField solve_kernel(double X, cplx w, int n, double tol) {
  check_w(w, "solve_kernel");
  if (!(X > 0.0)) throw kerr("solve_kernel", "X must be positive");
  if (n < 16) throw kerr("solve_kernel", "need at least 16 intervals");
  KernelField kf;
  kf.w = w;
  kf.h = X / n;
  kf.grid.resize(n + 1);
  for (int i = 0; i <= n; ++i) kf.grid[i] = i * kf.h;

  // Phi and its x-derivative on the uniform grid only need g, g' at multiples of h
  std::vector<cplx> G(2 * n + 1), Gp(2 * n + 1);
  for (int m = 0; m <= 2 * n; ++m) std::tie(G[m], Gp[m]) = phi_profile(m * kf.h, w);
  auto Phi = [&](int i, int j) { return G[std::abs(i - j)] - G[i + j]; };
  // d/dx Phi(x_i, y_j) for j <= i (one-sided from y < x on the diagonal)
  auto dPhi = [&](int i, int j) { return Gp[i - j] - Gp[i + j]; };

  kf.A.assign(n + 1, {});
  kf.dA.assign(n + 1, {});
  kf.diag.assign(n + 1, 0.0);
  kf.diag_deriv.assign(n + 1, 0.0);
  kf.A[0] = {0.0};
  kf.dA[0] = {-dPhi(0, 0)};
  kf.diag_deriv[0] = 2.0 * Gp[0];  // -(d/dx Phi(x,x) at 0)
  kf.min_rcond = 1.0;

  using Mat = Eigen::MatrixXcd;
  using Vec = Eigen::VectorXcd;
  for (int i = 1; i <= n; ++i) {
    const auto wt = simpson_weights(i, kf.h);
    const int m = i + 1;
    Mat M(m, m);
    Vec rhs(m), rhs2(m);
    for (int j = 0; j < m; ++j) {
      for (int k = 0; k < m; ++k) M(j, k) = wt[k] * Phi(k, j);
      M(j, j) += 1.0;
      rhs(j) = -Phi(i, j);
    }
    Eigen::PartialPivLU<Mat> lu(M);
    kf.min_rcond = std::min(kf.min_rcond, lu.rcond());
    const Vec a = lu.solve(rhs);
    kf.A[i].assign(a.data(), a.data() + m);
    const cplx Axx = a(i);
    for (int j = 0; j < m; ++j) rhs2(j) = -(Axx * Phi(i, j) + dPhi(i, j));
    const Vec da = lu.solve(rhs2);
    kf.dA[i].assign(da.data(), da.data() + m);
    kf.diag[i] = Axx;
    // total derivative of A(x,x) from the equation evaluated at y = x
    cplx s1 = 0.0, s2 = 0.0;
    for (int k = 0; k < m; ++k) {
      s1 += wt[k] * da(k) * Phi(k, i);
      s2 += wt[k] * a(k) * dPhi(i, k);
    }
    const cplx dPhiDiag = -2.0 * Gp[2 * i];
    kf.diag_deriv[i] = -(dPhiDiag + Axx * Phi(i, i) + s1 + s2);
  }
  if (kf.min_rcond < tol * 1e-6) throw kerr("solve_kernel", "linear solve ill-conditioned");
  kf.residual = kernel_residual(kf);
  if (kf.residual > tol) throw kerr("solve_kernel", "residual above tolerance");
  return kf;
}

double kernel_residual(const KernelField& kf) {
  const std::size_t n = kf.n();
  std::vector<cplx> G(2 * n + 1);
  for (std::size_t m = 0; m <= 2 * n; ++m) G[m] = phi_profile(m * kf.h, kf.w).first;
  auto Phi = [&](std::size_t i, std::size_t j) { return G[i > j ? i - j : j - i] - G[i + j]; };
  double r = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const auto wt = kf.weights(i);
    for (std::size_t j = 0; j <= i; ++j) {
      cplx s = kf.A[i][j] + Phi(i, j);
      for (std::size_t k = 0; k <= i; ++k) s += wt[k] * kf.A[i][k] * Phi(k, j);
      r = std::max(r, std::abs(s));
    }
  }
  return r;
}

namespace {

struct SliceOperator {
  std::vector<double> wt;
  Eigen::MatrixXcd M;  // I + K on the slice [0, X]
  SliceOperator(double X, cplx w, int n) {
    const double h = X / n;
    wt = simpson_weights(n, h);
    std::vector<cplx> G(2 * n + 1);
    for (int m = 0; m <= 2 * n; ++m) G[m] = phi_profile(m * h, w).first;
    M.resize(n + 1, n + 1);
    for (int j = 0; j <= n; ++j) {
      for (int k = 0; k <= n; ++k) M(j, k) = wt[k] * (G[std::abs(j - k)] - G[j + k]);
      M(j, j) += 1.0;
    }
  }
  double ratio(const Eigen::VectorXcd& h) const {
    const Eigen::VectorXcd r = M * h;
    double nh = 0.0, nr = 0.0;
    for (int j = 0; j < h.size(); ++j) {
      nh += wt[j] * std::norm(h(j));
      nr += wt[j] * std::norm(r(j));
    }
    if (nh == 0.0) return 1.0;
    return std::sqrt(nr / nh);
  }
};

}  // namespace

double coercivity_check(double X, cplx w, int trials, int n, std::uint64_t seed) {
  check_w(w, "coercivity_check");
  SliceOperator op(X, w, n);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N01;
  double best = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXcd h(n + 1);
    for (int j = 0; j <= n; ++j) h(j) = cplx(N01(rng), N01(rng));
    best = std::min(best, op.ratio(h));
  }
  return trials > 0 ? best : 1.0;
}

double coercivity_ratio(double X, cplx w, const std::vector<cplx>& h) {
  check_w(w, "coercivity_check");
  const int n = static_cast<int>(h.size()) - 1;
  if (n < 1) return 1.0;
  SliceOperator op(X, w, n);
  Eigen::VectorXcd v(n + 1);
  for (int j = 0; j <= n; ++j) v(j) = h[j];
  return op.ratio(v);
}

GrowthFit kernel_growth_fit(double X, const std::vector<cplx>& ws, int n) {
  GrowthFit fit;
  if (ws.size() < 2) throw kerr("kernel_growth_fit", "need at least two w values");
  std::vector<double> lx, ly;
  for (cplx w : ws) {
    const KernelField kf = solve_kernel(X, w, n, 1e-6);
    double s = 0.0;
    for (const auto& row : kf.A)
      for (cplx v : row) s = std::max(s, std::abs(v));
    fit.sup.push_back(s);
    lx.push_back(std::log(1.0 + std::abs(w)));
    ly.push_back(std::log(s));
  }
  const double n_ = static_cast<double>(lx.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) mx += lx[i] / n_, my += ly[i] / n_;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) sxy += (lx[i] - mx) * (ly[i] - my), sxx += (lx[i] - mx) * (lx[i] - mx);
  fit.alpha = sxy / sxx;
  fit.C = std::exp(my - fit.alpha * mx);
  return fit;
}

}  // namespace slspec
