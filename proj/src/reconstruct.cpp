#include "slspec/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include "slspec/error.hpp"
#include "slspec/log.hpp"
#include "slspec/quadrature.hpp"

namespace slspec {

namespace {

namespace bmp = boost::multiprecision;
template <unsigned D>
using mpf = bmp::number<bmp::mpfr_float_backend<D>, bmp::et_off>;

Error rerr(const std::string& op, const std::string& msg) { return Error("reconstruct", op, msg); }

// Fixed-precision rungs; the global default precision of the variable type
// is not thread-safe, so each rung is its own type.
template <unsigned D>
struct Rung {
  using T = mpf<D>;
  static constexpr unsigned digits = D;
};

template <class F>
auto climb(int start_digits, F&& f) -> std::remove_reference_t<decltype(*f(Rung<50>{}))> {
  if (start_digits <= 50)
    if (auto r = f(Rung<50>{})) return *r;
  if (start_digits <= 100)
    if (auto r = f(Rung<100>{})) return *r;
  if (start_digits <= 200)
    if (auto r = f(Rung<200>{})) return *r;
  if (start_digits <= 400)
    if (auto r = f(Rung<400>{})) return *r;
  if (auto r = f(Rung<800>{})) return *r;
  throw rerr("logdet", "determinant too ill-conditioned for 800 digits");
}

template <class T>
double to_d(const T& v) {
  return v.template convert_to<double>();
}

// In-place LDL^T of a symmetric n x n matrix stored row-major (lower part used).
template <class T>
struct Ldlt {
  int n = 0;
  std::vector<T> L;
  std::vector<T> d;
  bool positive = true;
  double pivot_ratio = 1.0;  // min d / max d

  explicit Ldlt(std::vector<T> A, int n_) : n(n_), L(std::move(A)), d(n_) {
    for (int j = 0; j < n; ++j) {
      T dj = L[j * n + j];
      for (int k = 0; k < j; ++k) dj -= L[j * n + k] * L[j * n + k] * d[k];
      d[j] = dj;
      if (!(dj > 0)) {
        positive = false;
        return;
      }
      for (int i = j + 1; i < n; ++i) {
        T v = L[i * n + j];
        for (int k = 0; k < j; ++k) v -= L[i * n + k] * L[j * n + k] * d[k];
        L[i * n + j] = v / dj;
      }
    }
    if (n > 0) {
      T lo = d[0], hi = d[0];
      for (const T& v : d) lo = std::min(lo, v), hi = std::max(hi, v);
      pivot_ratio = to_d(T(lo / hi));
    }
  }
  std::vector<T> solve(std::vector<T> b) const {
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < i; ++k) b[i] -= L[i * n + k] * b[k];
    for (int i = 0; i < n; ++i) b[i] /= d[i];
    for (int i = n - 1; i >= 0; --i)
      for (int k = i + 1; k < n; ++k) b[i] -= L[k * n + i] * b[k];
    return b;
  }
  T log_det() const {
    T s = 0;
    for (const T& v : d) s += bmp::log(v);
    return s;
  }
};

// Enough digits left after the conditioning loss signalled by the pivots.
template <class T>
bool precision_ok(const Ldlt<T>& f, unsigned digits) {
  if (!f.positive) return true;  // reported as singular, more digits would not help
  const double loss = f.pivot_ratio > 0 ? -std::log10(f.pivot_ratio) : 1e9;
  return loss + 20.0 <= digits;
}

// For M(x) = D + 4 int_0^x v v^T with M' = 4 v v^T, M'' = 4 (v' v^T + v v'^T):
// (ln det M)' = 4 v^T M^-1 v and (ln det M)'' = 8 v'^T M^-1 v - 16 (v^T M^-1 v)^2.
struct RankOne {
  double d1 = 0.0, d2 = 0.0, log_det = 0.0;
  bool singular = false;
};

template <class T>
RankOne rank_one(const Ldlt<T>& f, const std::vector<T>& v, const std::vector<T>& vp) {
  RankOne r;
  if (!f.positive) {
    r.singular = true;
    r.d1 = r.d2 = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  const auto u = f.solve(v);
  T p = 0, q = 0;
  for (std::size_t j = 0; j < v.size(); ++j) p += v[j] * u[j], q += vp[j] * u[j];
  r.d1 = to_d(T(4 * p));
  r.d2 = to_d(T(8 * q - 16 * p * p));
  r.log_det = to_d(f.log_det());
  return r;
}

// Scaled W(x) with E = diag(e^{xi x}); s~ = E^-1 sh(xi x), s~' = E^-1 xi ch(xi x).
template <class T>
void scaled_W(double x, const SpectralData& sd, std::vector<T>& W, std::vector<T>& s, std::vector<T>& sp) {
  const int n = sd.count();
  std::vector<T> E(n), xi(n);
  W.assign(n * n, T(0));
  s.resize(n);
  sp.resize(n);
  const T X(x);
  for (int j = 0; j < n; ++j) {
    xi[j] = T(sd.xi[j]);
    E[j] = exp(-2 * xi[j] * X);
    s[j] = (1 - E[j]) / 2;
    sp[j] = xi[j] * (1 + E[j]) / 2;
  }
  for (int a = 0; a < n; ++a) {
    const T D = 4 * xi[a] * xi[a] / T(sd.C[a]);
    W[a * n + a] = (1 - E[a] * E[a]) / (2 * xi[a]) - E[a] * (2 * X - D);
    for (int b = 0; b < a; ++b) {
      const T v = (1 - E[a] * E[b]) / (xi[a] + xi[b]) - (E[b] - E[a]) / (xi[a] - xi[b]);
      W[a * n + b] = W[b * n + a] = v;
    }
  }
}

void check_data(const SpectralData& sd, const char* op) {
  if (sd.xi.size() != sd.C.size()) throw rerr(op, "xi and C lengths differ");
  for (std::size_t j = 0; j < sd.xi.size(); ++j) {
    if (!(sd.xi[j] > 0.0) || !(sd.C[j] > 0.0)) throw rerr(op, "xi and C must be positive");
    for (std::size_t k = 0; k < j; ++k)
      if (sd.xi[j] == sd.xi[k]) throw rerr(op, "repeated xi");
  }
  if (!(sd.omega > 0.0)) throw rerr(op, "omega must be positive");
}

void check_grid(const std::vector<double>& g, const char* op) {
  if (g.size() < 2) throw rerr(op, "grid needs at least two nodes");
  if (g.front() < 0.0) throw rerr(op, "grid must start at x >= 0");
  for (std::size_t i = 1; i < g.size(); ++i)
    if (!(g[i] > g[i - 1])) throw rerr(op, "grid not strictly increasing");
}

// Gauss-Legendre nodes/weights on [0, 1] at precision T.
template <class T>
const std::pair<std::vector<T>, std::vector<T>>& gl_unit(int m) {
  static thread_local std::vector<std::pair<std::vector<T>, std::vector<T>>> cache(32);
  auto& c = cache.at(m);
  if (!c.first.empty()) return c;
  const T pi = boost::math::constants::pi<T>();
  std::vector<T> x(m), w(m);
  for (int i = 0; i < m; ++i) {
    T z = cos(pi * (i + T(0.75)) / (m + T(0.5)));
    T dp = 0;
    for (int it = 0; it < 100; ++it) {
      T p0 = 1, p1 = z;
      for (int k = 2; k <= m; ++k) {
        T p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (z * p1 - p0) / (z * z - 1);
      const T dz = p1 / dp;
      z -= dz;
      if (abs(dz) < std::numeric_limits<T>::epsilon() * 4) break;
    }
    T p0 = 1, p1 = z;
    for (int k = 2; k <= m; ++k) {
      T p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = m * (z * p1 - p0) / (z * z - 1);
    x[i] = (1 - z) / 2;
    w[i] = 1 / ((1 - z * z) * dp * dp);
  }
  c = {x, w};
  return c;
}

double cubic_hermite(double x0, double x1, double f0, double f1, double d0, double d1, double x) {
  const double h = x1 - x0, t = (x - x0) / h;
  const double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
  const double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
  return h00 * f0 + h10 * h * d0 + h01 * f1 + h11 * h * d1;
}

// Scaled kernel-corrected functions at one node:
// G_j = e^{-xi t} F_j(t), Gp_j = G_j', V_j = e^{-xi t} F_j'(t) = Gp_j + xi G_j.
struct NodeFunctions {
  std::vector<double> G, Gp, V;
};

NodeFunctions node_functions(std::size_t i, const SpectralData& sd, const KernelField& kf) {
  const int n = sd.count();
  NodeFunctions nf;
  nf.G.resize(n);
  nf.Gp.resize(n);
  nf.V.resize(n);
  const double t = kf.grid[i];
  const auto wt = kf.weights(i);
  const double Att = kf.diag[i].real();
  for (int j = 0; j < n; ++j) {
    const double xi = sd.xi[j];
    // e^{-xi t} sh(xi s) = (e^{-xi (t-s)} - e^{-xi (t+s)}) / 2
    auto esh = [&](double s) { return 0.5 * (std::exp(-xi * (t - s)) - std::exp(-xi * (t + s))); };
    double G = esh(t), Gp = xi * std::exp(-2.0 * xi * t) + Att * esh(t);
    for (std::size_t k = 0; k <= i; ++k) {
      const double e = esh(kf.grid[k]);
      const double A = kf.A[i][k].real(), dA = kf.dA[i][k].real();
      G += wt[k] * A * e;
      Gp += wt[k] * (dA - xi * A) * e;
    }
    nf.G[j] = G;
    nf.Gp[j] = Gp;
    nf.V[j] = Gp + xi * G;
  }
  return nf;
}

struct GlmNode {
  double Q = 0.0, Q_int = 0.0;
  bool singular = false;
};

// Sweep the kernel nodes, accumulating scaled T cell by cell. Returns nullopt
// when the precision rung is too short for some node.
template <class R>
std::optional<std::vector<GlmNode>> glm_sweep(const SpectralData& sd, const KernelField& kf,
                                              const std::vector<NodeFunctions>& nfs, std::size_t upto,
                                              std::vector<double>* T_out, R) {
  using T = typename R::T;
  const int n = sd.count();
  const double w2 = sd.omega * sd.omega;
  std::vector<T> Tm(n * n, T(0)), xi(n);
  for (int j = 0; j < n; ++j) {
    xi[j] = T(sd.xi[j]);
    Tm[j * n + j] = 4 * xi[j] * xi[j] / T(sd.C[j]);
  }
  const auto& gl = gl_unit<T>(12);
  std::vector<GlmNode> out(upto + 1);
  std::vector<T> v(n), vp(n);
  for (std::size_t i = 0; i <= upto; ++i) {
    if (i > 0) {
      const double x0 = kf.grid[i - 1], x1 = kf.grid[i];
      const T h(x1 - x0);
      const auto& a = nfs[i - 1];
      const auto& b = nfs[i];
      // Hermite data of G on the cell, evaluated at the Gauss nodes
      std::vector<std::vector<T>> Gq(gl.first.size(), std::vector<T>(n));
      for (std::size_t q = 0; q < gl.first.size(); ++q) {
        const T& t = gl.first[q];
        const T h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
        const T h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
        for (int j = 0; j < n; ++j)
          Gq[q][j] = h00 * T(a.G[j]) + h10 * h * T(a.Gp[j]) + h01 * T(b.G[j]) + h11 * h * T(b.Gp[j]);
      }
      for (int j = 0; j < n; ++j)
        for (int k = 0; k <= j; ++k) {
          const T c = xi[j] + xi[k];
          T acc = 0;
          for (std::size_t q = 0; q < gl.first.size(); ++q)
            acc += gl.second[q] * exp(-c * h * (1 - gl.first[q])) * Gq[q][j] * Gq[q][k];
          const T val = exp(-c * h) * Tm[j * n + k] + 4 * h * acc;
          Tm[j * n + k] = Tm[k * n + j] = val;
        }
    }
    for (int j = 0; j < n; ++j) {
      v[j] = T(nfs[i].G[j]);
      vp[j] = T(nfs[i].V[j]);
    }
    const double dd = kf.diag_deriv[i].real(), Axx = kf.diag[i].real();
    if (n == 0) {
      out[i].Q = 2.0 / w2 * (-dd);
      out[i].Q_int = 2.0 / w2 * (-Axx);
      continue;
    }
    Ldlt<T> f(Tm, n);
    if (!precision_ok(f, R::digits)) return std::nullopt;
    const RankOne r = rank_one(f, v, vp);
    out[i].singular = r.singular;
    out[i].Q = 2.0 / w2 * (-dd + r.d2);
    out[i].Q_int = 2.0 / w2 * (-Axx + r.d1);
  }
  if (T_out) {
    T_out->resize(n * n);
    for (int k = 0; k < n * n; ++k) (*T_out)[k] = to_d(Tm[k]);
  }
  return out;
}

}  // namespace

double ScaledMatrix::log_abs_det() const {
  if (entries.rows() == 0) return log_scale;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(entries);
  const Eigen::MatrixXd& U = lu.matrixLU();
  double s = 0.0;
  for (int i = 0; i < U.rows(); ++i) s += std::log(std::abs(U(i, i)));
  return s + log_scale;
}

const std::vector<int>& precision_ladder() {
  static const std::vector<int> l{50, 100, 200, 400, 800};
  return l;
}

ScaledMatrix build_W(double x, const SpectralData& sd) {
  check_data(sd, "build_W");
  if (x < 0.0) throw rerr("build_W", "x must be >= 0");
  const int n = sd.count();
  std::vector<mpf<50>> W, s, sp;
  scaled_W(x, sd, W, s, sp);
  ScaledMatrix m;
  m.entries.resize(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) m.entries(a, b) = to_d(W[a * n + b]);
  for (double v : sd.xi) m.log_scale += 2.0 * v * x;
  return m;
}

double logdet_d2(const MatrixFamily& f) {
  if (f.M.rows() == 0) return 0.0;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(f.M);
  if (lu.rcond() < 1e-14) throw rerr("logdet_d2", "matrix singular at this x");
  const Eigen::MatrixXd B1 = lu.solve(f.M1), B2 = lu.solve(f.M2);
  return B2.trace() - (B1 * B1).trace();
}

double logdet_d2(const std::function<MatrixFamily(double)>& family, double x) { return logdet_d2(family(x)); }

std::string to_string(Method m) {
  switch (m) {
    case Method::gl0: return "gl0";
    case Method::glm: return "glm";
    case Method::lax_levermore: return "ll";
  }
  return "?";
}

Method method_from_string(const std::string& s) {
  if (s == "gl0") return Method::gl0;
  if (s == "glm") return Method::glm;
  if (s == "ll" || s == "lax_levermore") return Method::lax_levermore;
  throw rerr("method", "unknown method '" + s + "'");
}

std::vector<double> parse_grid(const std::string& spec) {
  std::istringstream is(spec);
  double a = 0, b = 0;
  long n = 0;
  char c1 = 0, c2 = 0;
  if (!(is >> a >> c1 >> b >> c2 >> n) || c1 != ':' || c2 != ':' || !is.eof())
    throw rerr("parse_grid", "expected start:stop:count, got '" + spec + "'");
  if (n < 2) throw rerr("parse_grid", "grid count must be >= 2");
  if (!(b > a)) throw rerr("parse_grid", "grid stop must exceed start");
  std::vector<double> g(n);
  for (long i = 0; i < n; ++i) g[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  g.back() = b;
  return g;
}

ReconstructionResult reconstruct_gl0(const SpectralData& sd, const std::vector<double>& grid) {
  check_data(sd, "reconstruct_gl0");
  check_grid(grid, "reconstruct_gl0");
  ReconstructionResult res;
  res.method = Method::gl0;
  res.grid = grid;
  res.Q_rec.assign(grid.size(), 0.0);
  res.Q_int.assign(grid.size(), 0.0);
  res.singular.assign(grid.size(), false);
  const int n = sd.count();
  if (n == 0) return res;
  const double w2 = sd.omega * sd.omega;
  int rung = 50;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    auto r = climb(rung, [&](auto R) -> std::optional<std::pair<RankOne, int>> {
      using T = typename decltype(R)::T;
      std::vector<T> W, s, sp;
      scaled_W(x, sd, W, s, sp);
      Ldlt<T> f(std::move(W), n);
      if (!precision_ok(f, decltype(R)::digits)) return std::nullopt;
      return std::make_pair(rank_one(f, s, sp), static_cast<int>(decltype(R)::digits));
    });
    rung = r.second;
    res.max_digits = std::max(res.max_digits, rung);
    res.singular[i] = r.first.singular;
    res.Q_rec[i] = 2.0 / w2 * r.first.d2;
    res.Q_int[i] = 2.0 / w2 * r.first.d1;
  }
  return res;
}

ScaledMatrix build_T(double x, const SpectralData& sd, const KernelField& kf) {
  check_data(sd, "build_T");
  if (x < -1e-14 || x > kf.grid.back() * (1 + 1e-12)) throw rerr("build_T", "x outside the kernel grid");
  const std::size_t i = static_cast<std::size_t>(std::llround(x / kf.h));
  if (std::abs(kf.grid[i] - x) > 1e-9 * std::max(1.0, x)) throw rerr("build_T", "x is not a kernel node");
  std::vector<NodeFunctions> nfs(i + 1);
  for (std::size_t k = 0; k <= i; ++k) nfs[k] = node_functions(k, sd, kf);
  const int n = sd.count();
  std::vector<double> Tv;
  climb(50, [&](auto R) { return glm_sweep(sd, kf, nfs, i, &Tv, R); });
  ScaledMatrix m;
  m.entries = Eigen::Map<Eigen::MatrixXd>(Tv.data(), n, n);
  for (double v : sd.xi) m.log_scale += 2.0 * v * kf.grid[i];
  return m;
}

ReconstructionResult reconstruct_glm(const SpectralData& sd, const std::vector<double>& grid, const KernelField& kf) {
  check_data(sd, "reconstruct_glm");
  check_grid(grid, "reconstruct_glm");
  const double w_expect = sd.omega * sd.omega * sd.q0;
  if (std::abs(kf.w - cplx(w_expect, 0.0)) > 1e-9 * std::max(1.0, w_expect))
    throw rerr("reconstruct_glm", "kernel solved for a different w");
  if (grid.back() > kf.grid.back() * (1 + 1e-12)) throw rerr("reconstruct_glm", "kernel grid shorter than the grid");
  const std::size_t nk = kf.n();
  std::vector<NodeFunctions> nfs(nk + 1);
  for (std::size_t k = 0; k <= nk; ++k) nfs[k] = node_functions(k, sd, kf);

  int used = 0;
  const auto nodes = climb(50, [&](auto R) {
    used = static_cast<int>(decltype(R)::digits);
    return glm_sweep(sd, kf, nfs, nk, nullptr, R);
  });

  ReconstructionResult res;
  res.method = Method::glm;
  res.grid = grid;
  res.max_digits = used;
  res.Q_rec.resize(grid.size());
  res.Q_int.resize(grid.size());
  res.singular.resize(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double x = grid[g];
    std::size_t i = std::min<std::size_t>(nk - 1, static_cast<std::size_t>(std::floor(x / kf.h)));
    const double x0 = kf.grid[i], x1 = kf.grid[i + 1];
    const double t = (x - x0) / (x1 - x0);
    const auto& a = nodes[i];
    const auto& b = nodes[i + 1];
    res.Q_rec[g] = (1 - t) * a.Q + t * b.Q;
    // Q is the derivative of Q_int, so the primitive gets a cubic Hermite fit
    res.Q_int[g] = cubic_hermite(x0, x1, a.Q_int, b.Q_int, a.Q, b.Q, x);
    res.singular[g] = a.singular || b.singular;
  }
  return res;
}

ReconstructionResult reconstruct_glm(const SpectralData& sd, const std::vector<double>& grid, const GlmOptions& opt) {
  check_grid(grid, "reconstruct_glm");
  if (!(sd.q0 > 0.0)) throw rerr("reconstruct_glm", "q0 must be positive");
  const KernelField kf = solve_kernel(grid.back(), sd.omega * sd.omega * sd.q0, opt.n_kernel, opt.kernel_tol);
  log::debug("glm kernel residual " + std::to_string(kf.residual));
  return reconstruct_glm(sd, grid, kf);
}

ReconstructionResult lax_levermore(const std::vector<double>& eta, const std::vector<double>& c, double epsilon,
                                   const std::vector<double>& grid) {
  if (eta.size() != c.size()) throw rerr("lax_levermore", "eta and c lengths differ");
  if (!(epsilon > 0.0)) throw rerr("lax_levermore", "epsilon must be positive");
  check_grid(grid, "lax_levermore");
  const int n = static_cast<int>(eta.size());
  for (int j = 0; j < n; ++j) {
    if (!(eta[j] > 0.0) || !(c[j] > 0.0)) throw rerr("lax_levermore", "eta and c must be positive");
    for (int k = 0; k < j; ++k)
      if (eta[j] == eta[k]) log::warn("lax_levermore: repeated eta, degenerate norming");
  }
  ReconstructionResult res;
  res.method = Method::lax_levermore;
  res.grid = grid;
  res.Q_rec.assign(grid.size(), 0.0);
  res.Q_int.assign(grid.size(), 0.0);
  res.singular.assign(grid.size(), false);
  if (n == 0) return res;
  // M = I + G, G' = -e e^T, G'' = (eta e e^T + e (eta e)^T) / epsilon, e_j = c_j e^{-eta_j x / eps}
  auto d1_at = [&](double x, double* d2) {
    Eigen::VectorXd e(n), ee(n);
    for (int j = 0; j < n; ++j) {
      e(j) = c[j] * std::exp(-eta[j] * x / epsilon);
      ee(j) = eta[j] * e(j);
    }
    Eigen::MatrixXd M = Eigen::MatrixXd::Identity(n, n);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) M(j, k) += epsilon * e(j) * e(k) / (eta[j] + eta[k]);
    Eigen::LDLT<Eigen::MatrixXd> f(M);
    const Eigen::VectorXd u = f.solve(e);
    const double p = e.dot(u);
    *d2 = 2.0 / epsilon * ee.dot(u) - p * p;
    return -p;
  };
  double d2 = 0.0;
  const double base = d1_at(0.0, &d2);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double d1 = d1_at(grid[i], &d2);
    res.Q_rec[i] = -2.0 * epsilon * epsilon * d2;
    res.Q_int[i] = -2.0 * epsilon * epsilon * (d1 - base);
  }
  return res;
}

void attach_reference(ReconstructionResult& r, const Potential& p) {
  const std::size_t n = r.grid.size();
  r.Q_ref.resize(n);
  r.Q_int_ref.resize(n);
  std::vector<double> br = p.breakpoints();
  double acc = 0.0, prev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = r.grid[i];
    double a = prev;
    for (double b : br)
      if (b > a && b < x) {
        acc += quad::adaptive([&](double t) { return p.eval(t); }, a, b, 1e-13);
        a = b;
      }
    if (x > a) acc += quad::adaptive([&](double t) { return p.eval(t); }, a, x, 1e-13);
    prev = x;
    r.Q_ref[i] = p.eval(x);
    r.Q_int_ref[i] = acc;
  }
  double sup = 0.0, supq = 0.0, l1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (r.singular[i]) continue;
    sup = std::max(sup, std::abs(r.Q_int_ref[i] - r.Q_int[i]));
    supq = std::max(supq, std::abs(r.Q_ref[i] - r.Q_rec[i]));
    if (i > 0 && !r.singular[i - 1])
      l1 += 0.5 * (r.grid[i] - r.grid[i - 1]) *
            (std::abs(r.Q_int_ref[i] - r.Q_int[i]) + std::abs(r.Q_int_ref[i - 1] - r.Q_int[i - 1]));
  }
  r.sup_error = sup;
  r.sup_error_Q = supq;
  r.L1_error = l1;
}

}  // namespace slspec
