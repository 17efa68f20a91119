#include <cmath>
#include <complex>

#include <boost/math/quadrature/gauss.hpp>

#include "doctest.h"
#include "slspec/error.hpp"
#include "slspec/kernel.hpp"

using namespace slspec;
using cd = std::complex<double>;

namespace {

// g(u) by brute force: 20-point Gauss on panels [0,1], then pi-panels to
// P = 2e5, with the remainder replaced by its leading term -1/(2P)
// (integrand ~ (cos p - 1) / (2 p^2)).
cd brute_g(double u, cd w) {
  const cd a = w * u * u;
  auto f = [&](double p) -> cd {
    const cd s = std::sqrt(p * p + a);
    return (std::cos(p) - 1.0) / (p * (p + s));
  };
  using GL = boost::math::quadrature::gauss<double, 20>;
  cd acc = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double a0 = k / 20.0, b0 = (k + 1) / 20.0;
    acc += GL::integrate([&](double p) { return f(p).real(); }, a0, b0) +
           cd(0, 1) * GL::integrate([&](double p) { return f(p).imag(); }, a0, b0);
  }
  const double P = 2e5;
  for (double lo = 1.0; lo < P; lo += M_PI) {
    const double hi = std::min(lo + M_PI, P);
    acc += GL::integrate([&](double p) { return f(p).real(); }, lo, hi) +
           cd(0, 1) * GL::integrate([&](double p) { return f(p).imag(); }, lo, hi);
  }
  acc += -1.0 / (2.0 * P);
  return w * u / M_PI * acc;
}

}  // namespace

TEST_CASE("kernel profile against brute-force quadrature") {
  for (auto [u, w] : {std::pair{0.5, cd(1.0)}, std::pair{1.0, cd(4.0)}, std::pair{0.7, cd(1.0, 5.0)}}) {
    CAPTURE(u);
    CAPTURE(w);
    const cd g = phi_profile(u, w).first;
    CHECK(std::abs(g - brute_g(u, w)) < 1e-7 * std::max(1.0, std::abs(g)));
  }
  // Phi(1, 1, 1) = g(0) - g(2) = -g(2)
  CHECK(std::abs(phi_kernel(1.0, 1.0, 1.0) + brute_g(2.0, 1.0)) < 1e-7);
}

TEST_CASE("kernel symmetry and profile derivative") {
  const cd w(3.0, 1.0);
  CHECK(std::abs(phi_kernel(0.3, 1.1, w) - phi_kernel(1.1, 0.3, w)) < 1e-14);
  CHECK(std::abs(phi_kernel(0.0, 0.7, w)) < 1e-14);
  // g'(0) = -w/4
  CHECK(std::abs(phi_profile(0.0, w).second + w / 4.0) < 1e-12);
  for (double u : {0.2, 0.9, 2.5}) {
    const double h = 1e-5;
    const cd fd = (phi_profile(u + h, w).first - phi_profile(u - h, w).first) / (2 * h);
    CHECK(std::abs(fd - phi_profile(u, w).second) < 1e-7);
  }
}

TEST_CASE("self-similarity of the kernel") {
  // g(u, w) depends on w u^2 through J1, so Phi(x, y, w) = lambda Phi(lambda x, lambda y, w / lambda^2)
  const cd w(2.0, 0.5);
  for (double lam : {0.5, 2.0}) {
    const cd lhs = phi_kernel(0.4, 0.9, w);
    const cd rhs = lam * phi_kernel(lam * 0.4, lam * 0.9, w / (lam * lam));
    CHECK(std::abs(lhs - rhs) < 1e-9);
    const cd d = phi_diag_derivative(0.6, w);
    CHECK(std::abs(d - lam * lam * phi_diag_derivative(lam * 0.6, w / (lam * lam))) < 1e-9);
  }
}

TEST_CASE("diagonal derivative") {
  for (cd w : {cd(1.0), cd(4.0), cd(1.0, 5.0), cd(3.0, 1.0)}) {
    CHECK(std::abs(phi_diag_derivative(0.0, w) - w / 2.0) < 1e-8);
    const double x = 0.8, h = 1e-5;
    const cd fd = (phi_kernel(x + h, x + h, w) - phi_kernel(x - h, x - h, w)) / (2 * h);
    CHECK(std::abs(fd - phi_diag_derivative(x, w)) < 1e-7);
  }
}

TEST_CASE("Simpson weights integrate cubics exactly") {
  for (std::size_t i : {2u, 3u, 5u, 8u}) {
    const double h = 0.1;
    const auto wt = simpson_weights(i, h);
    REQUIRE(wt.size() == i + 1);
    double s = 0.0;
    for (std::size_t k = 0; k <= i; ++k) s += wt[k] * std::pow(k * h, 3);
    CHECK(s == doctest::Approx(std::pow(i * h, 4) / 4).epsilon(1e-12));
  }
  const auto t = simpson_weights(1, 0.5);
  CHECK(t[0] == 0.25);
  CHECK(t[1] == 0.25);
}

TEST_CASE("kernel equation residual") {
  for (cd w : {cd(1.0), cd(4.0), cd(1.0, 5.0)}) {
    CAPTURE(w);
    const KernelField kf = solve_kernel(2.0, w, 128);
    CHECK(kf.residual <= 1e-6);
    CHECK(kernel_residual(kf) == doctest::Approx(kf.residual));
    CHECK(kf.min_rcond > 1e-3);
    CHECK(std::abs(kf.diag_deriv[0] + w / 2.0) < 1e-8);
  }
}

TEST_CASE("small w: A = -Phi + Phi*Phi to second order") {
  // Neumann series; the cubic term is below 1e-9 for |w| = 1e-3
  const cd w(1e-3, 5e-4);
  const KernelField kf = solve_kernel(1.0, w, 64);
  const std::size_t i = 64, j = 32;
  const auto wt = kf.weights(i);
  cd conv = 0.0;
  for (std::size_t k = 0; k <= i; ++k) conv += wt[k] * phi_kernel(kf.grid[i], kf.grid[k], w) * phi_kernel(kf.grid[k], kf.grid[j], w);
  const cd approx = -phi_kernel(kf.grid[i], kf.grid[j], w) + conv;
  CHECK(std::abs(kf.A[i][j] - approx) < 1e-9);
}

TEST_CASE("diagonal derivative against finite differences of the diagonal") {
  const KernelField kf = solve_kernel(2.0, cd(1.0, 1.0), 128);
  for (std::size_t i : {20u, 64u, 100u}) {
    const cd fd = (kf.diag[i + 1] - kf.diag[i - 1]) / (2 * kf.h);
    CHECK(std::abs(fd - kf.diag_deriv[i]) < 1e-3);
  }
}

TEST_CASE("analyticity in w") {
  const double d = 1e-3;
  const cd w(1.0, 1.0);
  const KernelField a = solve_kernel(2.0, w + d, 64), b = solve_kernel(2.0, w - d, 64);
  const KernelField c = solve_kernel(2.0, w + cd(0, d), 64), e = solve_kernel(2.0, w - cd(0, d), 64);
  double worst = 0.0;
  for (std::size_t i = 0; i <= 64; i += 8)
    for (std::size_t j = 0; j <= i; j += 4) {
      const cd dre = (a.A[i][j] - b.A[i][j]) / (2 * d);
      const cd dim = (c.A[i][j] - e.A[i][j]) / (2 * d);
      worst = std::max(worst, std::abs(dre + cd(0, 1) * dim));
    }
  CHECK(worst < 1e-4);
}

TEST_CASE("coercivity") {
  CHECK(coercivity_check(2.0, cd(1.0, 1.0), 20, 64) >= 0.999);
  CHECK(coercivity_check(2.0, cd(4.0), 20, 64) >= 0.999);
  CHECK(coercivity_ratio(2.0, cd(1.0), std::vector<cd>(65, 0.0)) == 1.0);
}

TEST_CASE("kernel growth in w") {
  const GrowthFit g = kernel_growth_fit(1.0, {cd(1.0), cd(4.0), cd(16.0)}, 32);
  REQUIRE(g.sup.size() == 3);
  CHECK(g.sup[0] < g.sup[1]);
  CHECK(g.sup[1] < g.sup[2]);
  CHECK(std::isfinite(g.alpha));
}

TEST_CASE("kernel errors") {
  CHECK_THROWS_AS(solve_kernel(-1.0, 1.0, 16), Error);
  CHECK_THROWS_AS(solve_kernel(1.0, 1.0, 1), Error);
}
