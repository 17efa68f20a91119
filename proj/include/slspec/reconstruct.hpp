#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "slspec/forward.hpp"
#include "slspec/kernel.hpp"
#include "slspec/potential.hpp"

namespace slspec {

// Matrix with the row/column factors e^{xi_j x} pulled out:
// original = E * entries * E, log|det original| = log|det entries| + log_scale.
struct ScaledMatrix {
  Eigen::MatrixXd entries;
  double log_scale = 0.0;
  double log_abs_det() const;
};

// Precision ladder used by the determinant paths (decimal digits).
const std::vector<int>& precision_ladder();

ScaledMatrix build_W(double x, const SpectralData& sd);

struct MatrixFamily {
  Eigen::MatrixXd M, M1, M2;  // M(x), M'(x), M''(x)
};
// d^2/dx^2 ln|det M| = tr(M^-1 M'') - tr((M^-1 M')^2)
double logdet_d2(const MatrixFamily& f);
double logdet_d2(const std::function<MatrixFamily(double)>& family, double x);

enum class Method { gl0, glm, lax_levermore };
std::string to_string(Method m);
Method method_from_string(const std::string& s);

struct ReconstructionResult {
  Method method = Method::gl0;
  std::vector<double> grid;
  std::vector<double> Q_rec;
  std::vector<double> Q_int;
  std::vector<bool> singular;  // non-positive pivot: excluded from errors
  int max_digits = 0;          // highest precision rung used
  // filled by attach_reference
  std::vector<double> Q_ref;
  std::vector<double> Q_int_ref;
  std::optional<double> sup_error;     // sup |int Q_ref - int Q_rec|
  std::optional<double> L1_error;      // int |int Q_ref - int Q_rec|
  std::optional<double> sup_error_Q;   // sup |Q_ref - Q_rec|
};

// Parse "start:stop:count".
std::vector<double> parse_grid(const std::string& spec);

ReconstructionResult reconstruct_gl0(const SpectralData& sd, const std::vector<double>& grid);

// T(x) for the kernel-corrected determinant; x must be a kernel node.
ScaledMatrix build_T(double x, const SpectralData& sd, const KernelField& kf);

struct GlmOptions {
  int n_kernel = 256;
  double kernel_tol = 1e-6;
};
ReconstructionResult reconstruct_glm(const SpectralData& sd, const std::vector<double>& grid,
                                     const GlmOptions& opt = {});
// Same, reusing a solved kernel (its grid must cover the requested grid, w = omega^2 q0).
ReconstructionResult reconstruct_glm(const SpectralData& sd, const std::vector<double>& grid, const KernelField& kf);

ReconstructionResult lax_levermore(const std::vector<double>& eta, const std::vector<double>& c, double epsilon,
                                   const std::vector<double>& grid);

// Reference primitive and error metrics over the non-singular nodes.
void attach_reference(ReconstructionResult& r, const Potential& p);

}  // namespace slspec
