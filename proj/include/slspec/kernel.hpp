#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

namespace slspec {

using cplx = std::complex<double>;

// Phi(x,y,w) = g(|x-y|) - g(x+y) with g(u) = (w u / pi) J1(w u^2),
// J1(a) = int_0^inf (cos p - 1) / (p (p + sqrt(p^2 + a))) dp.
// Returns (g(u), g'(u)).
std::pair<cplx, cplx> phi_profile(double u, cplx w);

cplx phi_kernel(double x, double y, cplx w, double tol = 1e-8);
// d/dx Phi(x,x,w)
cplx phi_diag_derivative(double x, cplx w, double tol = 1e-8);

struct KernelField {
  cplx w;
  double h = 0.0;
  std::vector<double> grid;
  std::vector<std::vector<cplx>> A;    // A[i][j] = A(x_i, x_j), j <= i
  std::vector<std::vector<cplx>> dA;   // partial_x A(x_i, x_j)
  std::vector<cplx> diag;
  std::vector<cplx> diag_deriv;
  double residual = 0.0;
  double min_rcond = 1.0;
  std::size_t n() const { return grid.size() - 1; }
  // Nystrom weights on [0, x_i]
  std::vector<double> weights(std::size_t i) const;
};

// Composite Simpson weights on i uniform intervals of width h (3/8 rule on
// the last three when i is odd, trapezoid when i = 1).
std::vector<double> simpson_weights(std::size_t i, double h);

KernelField solve_kernel(double X, cplx w, int n, double tol = 1e-6);

// Max |A + A*Phi + Phi| over the nodes of the discretized equation.
double kernel_residual(const KernelField& kf);

// min over random h of ||(I+K)h|| / ||h|| on [0, X] (weighted discrete norm).
double coercivity_check(double X, cplx w, int trials, int n = 128, std::uint64_t seed = 12345);
double coercivity_ratio(double X, cplx w, const std::vector<cplx>& h);

// Fit sup|A| ~ C (1 + |w|)^alpha over the given w values.
struct GrowthFit {
  double C = 0.0;
  double alpha = 0.0;
  std::vector<double> sup;
};
GrowthFit kernel_growth_fit(double X, const std::vector<cplx>& ws, int n = 64);

}  // namespace slspec
