// Acceptance checks, one per criterion. Usage: acceptance --criterion N (or no
// argument for all). Prints one PASS/FAIL line per criterion; exit status is
// nonzero if any selected criterion fails.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "slspec/bounds.hpp"
#include "slspec/forward.hpp"
#include "slspec/kernel.hpp"
#include "slspec/reconstruct.hpp"
#include "slspec/wkb.hpp"

using namespace slspec;
using cd = std::complex<double>;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

// ---- 1: square well against transcendental roots
void c1(Outcome& o) {
  double worst_xi = 0, worst_c = 0;
  for (double w : {5.0, 10.0, 20.0}) {
    o.require(squarewell_phase_guard(w), "phase guard at omega " + std::to_string(w));
    const auto roots = oracle::squarewell_roots(w);
    const SpectralData sd = forward_spectrum(Potential::square_well(), w);
    o.require(sd.count() == static_cast<int>(roots.size()), "count at omega " + std::to_string(w));
    for (int j = 0; j < std::min<int>(sd.count(), roots.size()); ++j) {
      const double xi = roots[j];
      worst_xi = std::max(worst_xi, std::abs(sd.xi[j] - xi));
      worst_c = std::max(worst_c, std::abs(sd.C[j] / (2 * xi / (1 + xi) * (w * w - xi * xi)) - 1));
    }
  }
  o.detail << "max |xi - root| " << worst_xi << ", max rel C err " << worst_c;
  o.require(worst_xi <= 1e-8, "xi tolerance 1e-8");
  o.require(worst_c <= 1e-6, "C tolerance 1e-6");
}

// ---- 2: q1 level count, lowest level, gaps, norming bracket
void c2(Outcome& o) {
  const Potential p = Potential::q1();
  for (double w : {10.0, 20.0, 40.0}) {
    const SpectralData sd = forward_spectrum(p, w);
    const WkbProfile prof = wkb_spectrum(p, w);
    const int N = sd.count(), target = static_cast<int>(std::floor(w));
    o.detail << " w=" << w << ": N=" << N << " (whole-line WKB " << prof.predicted_count << ")";
    o.require(std::abs(N - target) <= 1, "N within [w] +- 1 at w=" + std::to_string(int(w)));
    if (N == 0) continue;
    const double eta = sd.xi.front() / w, lo = M_PI * M_PI / (256 * w * w), hi = M_PI * M_PI / (16 * w * w);
    o.detail << " eta_N=" << eta << " in [" << lo << "," << hi << "]";
    o.require(eta >= lo && eta <= hi, "eta_N bracket at w=" + std::to_string(int(w)));
    double gap = 1e300;
    for (int j = 1; j < N; ++j) gap = std::min(gap, sd.xi[j] - sd.xi[j - 1]);
    o.require(N < 2 || gap >= 1 / (5 * w), "min gap at w=" + std::to_string(int(w)));
    const auto [blo, bhi] = q1_norming_log_bracket(w);
    for (int j = 0; j < N; ++j) {
      const double ln = std::log(4 * sd.xi[j] * sd.xi[j] / sd.C[j]);
      if (ln < blo || ln > bhi) {
        o.require(false, "norming bracket at w=" + std::to_string(int(w)));
        break;
      }
    }
  }
}

// ---- 3: Jost identity at mid-spectrum
void c3(Outcome& o) {
  const Potential p = Potential::q1();
  const SpectralData sd = forward_spectrum(p, 10.0);
  o.require(sd.count() >= 1, "no eigenvalues");
  if (!o.pass) return;
  const int j = sd.count() / 2;
  const JostIdentity id = jost_identity_check(p, 10.0, j, sd);
  o.detail << "j=" << j << " 4xi^2/C=" << id.lhs << " -s^2 Fdot^2=" << id.rhs << " residual " << id.residual;
  o.require(id.residual <= 1e-3, "residual 1e-3");
}

// ---- 4: kernel equation, coercivity, diagonal derivative, analyticity
void c4(Outcome& o) {
  double res = 0;
  for (cd w : {cd(1.0), cd(4.0), cd(1.0, 5.0)}) res = std::max(res, solve_kernel(2.0, w, 128).residual);
  o.detail << "residual " << res;
  o.require(res <= 1e-6, "residual 1e-6");

  double coer = 1e300;
  for (cd w : {cd(1.0), cd(4.0), cd(1.0, 5.0)}) coer = std::min(coer, coercivity_check(2.0, w, 100, 64));
  o.detail << ", coercivity " << coer;
  o.require(coer >= 0.999, "coercivity 0.999");

  double dd = 0;
  for (cd w : {cd(1.0), cd(4.0), cd(1.0, 5.0), cd(1.0, 1.0)})
    dd = std::max(dd, std::abs(phi_diag_derivative(0.0, w) - w / 2.0));
  o.detail << ", |dPhi(0) - w/2| " << dd;
  o.require(dd <= 1e-8, "diag derivative 1e-8");

  const double d = 1e-3;
  const cd w(1.0, 1.0);
  const KernelField a = solve_kernel(2.0, w + d, 64), b = solve_kernel(2.0, w - d, 64);
  const KernelField c = solve_kernel(2.0, w + cd(0, d), 64), e = solve_kernel(2.0, w - cd(0, d), 64);
  double cr = 0;
  for (std::size_t i = 0; i <= 64; ++i)
    for (std::size_t k = 0; k <= i; ++k)
      cr = std::max(cr, std::abs((a.A[i][k] - b.A[i][k]) / (2 * d) + cd(0, 1) * (c.A[i][k] - e.A[i][k]) / (2 * d)));
  o.detail << ", Cauchy-Riemann " << cr;
  o.require(cr <= 1e-4, "Cauchy-Riemann 1e-4");
}

// ---- 5: gl0 round trip on q1
void c5(Outcome& o) {
  const Potential p = Potential::q1();
  const auto grid = parse_grid("0:2:201");
  std::vector<std::pair<double, double>> samples;
  for (double w : {10.0, 20.0, 40.0, 80.0}) {
    auto r = reconstruct_gl0(forward_spectrum(p, w), grid);
    attach_reference(r, p);
    samples.emplace_back(w, *r.sup_error);
    o.detail << " w=" << w << ":" << *r.sup_error;
  }
  for (std::size_t i = 1; i < samples.size(); ++i)
    o.require(samples[i].second < samples[i - 1].second, "strict decrease");
  const RateReport rep = convergence_report(samples, EnvelopeKind::gl0_rate);
  // omega^-3 is reported only
  const double raw = -tls_fit({std::log(10.0), std::log(20.0), std::log(40.0), std::log(80.0)},
                              {std::log(samples[0].second), std::log(samples[1].second),
                               std::log(samples[2].second), std::log(samples[3].second)})
                          .slope;
  o.detail << "; exponent after log removal " << rep.fitted_exponent << ", raw " << raw;
  o.require(rep.fitted_exponent >= 0.5, "exponent 0.5");
}

// ---- 6: glm against gl0 and the origin value
void c6(Outcome& o) {
  const Potential p = make_potential_by_name("rational8");
  const SpectralData sd = forward_spectrum(p, 20.0);
  const auto grid = parse_grid("0:2:201");
  const int n = 256;
  auto a = reconstruct_gl0(sd, grid);
  auto b = reconstruct_glm(sd, grid, GlmOptions{n, 1e-6});
  attach_reference(a, p);
  attach_reference(b, p);
  const double h = 2.0 / n, q0err = std::abs(b.Q_rec[0] - sd.q0);
  o.detail << "gl0 " << *a.sup_error << ", glm " << *b.sup_error << ", |Q(0) - q0| " << q0err;
  o.require(*b.sup_error < *a.sup_error, "glm below gl0");
  o.require(q0err <= h * h, "origin within h^2");
}

// ---- 7: determinants, logdet_d2, one soliton
void c7(Outcome& o) {
  SpectralData sd;
  sd.xi = {10.0, 25.0, 40.0};
  sd.C = {2.0, 60.0, 1500.0};
  double worst = 0;
  for (double x : {0.0, 0.1, 0.25, 0.5}) {
    const double ref = oracle::logdet_W(x, sd.xi, sd.C);
    worst = std::max(worst, std::abs(build_W(x, sd).log_abs_det() - ref) / std::abs(ref));
  }
  o.detail << "logdet rel err " << worst;
  o.require(worst <= 1e-9, "logdet 1e-9");

  std::mt19937_64 rng(5);
  std::normal_distribution<double> N;
  Eigen::MatrixXd A(3, 3), B(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) A(i, j) = N(rng), B(i, j) = N(rng);
  const Eigen::MatrixXd S0 = A * A.transpose() + 3 * Eigen::MatrixXd::Identity(3, 3), S1 = 0.5 * (B + B.transpose());
  auto M = [&](double x) -> Eigen::MatrixXd { return S0 + std::sin(x) * S1; };
  auto fam = [&](double x) { return MatrixFamily{M(x), std::cos(x) * S1, -std::sin(x) * S1}; };
  auto ld = [&](double x) { return std::log(M(x).determinant()); };
  const double x = 0.4, h = 1e-3;
  const double fd = (ld(x + h) - 2 * ld(x) + ld(x - h)) / (h * h);
  const double d2err = std::abs(logdet_d2(fam, x) - fd) / std::max(1.0, std::abs(fd));
  o.detail << ", logdet_d2 err " << d2err;
  o.require(d2err <= 1e-5, "logdet_d2 1e-5");

  const auto grid = parse_grid("0:1:41");
  const auto r = lax_levermore({0.8}, {1.5}, 0.1, grid);
  double sol = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) sol = std::max(sol, std::abs(r.Q_rec[i] - oracle::soliton(0.8, 1.5, 0.1, grid[i])));
  o.detail << ", soliton err " << sol;
  o.require(sol <= 1e-6, "soliton 1e-6");
}

// ---- 8: approximation constants
void c8(Outcome& o) {
  double worst = 0;
  for (double l : {1.0, 1.5, 2.0, 2.5, 3.0, 4.2, 6.0})
    for (int s : {1, 2, 3}) {
      worst = std::max(worst, std::abs(vitushkin_c_inf(l, s) / oracle::c_inf(l, s) - 1));
      worst = std::max(worst, std::abs(vitushkin_c_l1(l, s) / oracle::c_l1(l, s) - 1));
    }
  double top = 0;
  for (int k = 10; k <= 60; ++k) top = std::max(top, std::pow(2.0, 0.1 * k) * vitushkin_c_inf(0.1 * k, 1));
  o.detail << "max rel err " << worst << ", max 2^l C_inf " << top;
  o.require(worst <= 1e-12, "constants 1e-12");
  o.require(top <= 0.25, "2^l C_inf <= 1/4");
}

struct Criterion {
  const char* name;
  double limit_s;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  const Criterion all[] = {
      {"square-well oracle equivalence", 10, c1}, {"q1 level reproductions", 60, c2},
      {"Jost identity", 60, c3},                  {"kernel correctness", 120, c4},
      {"gl0 round-trip rate", 600, c5},           {"glm round-trip ordering", 600, c6},
      {"determinant machinery", 30, c7},          {"approximation constants", 1, c8},
  };
  int only = 0;
  for (int i = 1; i + 1 < argc; ++i)
    if (!std::strcmp(argv[i], "--criterion")) only = std::atoi(argv[i + 1]);
  if (only < 0 || only > 8) {
    std::fprintf(stderr, "criterion must be 1..8\n");
    return 2;
  }
  bool ok = true;
  for (int c = 1; c <= 8; ++c) {
    if (only && c != only) continue;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      all[c - 1].run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (dt > all[c - 1].limit_s) o.require(false, "runtime limit");
    std::printf("criterion %d %s: %s (%.2fs / %.0fs) %s\n", c, all[c - 1].name, o.pass ? "PASS" : "FAIL", dt,
                all[c - 1].limit_s, o.detail.str().c_str());
    std::fflush(stdout);
    ok = ok && o.pass;
  }
  return ok ? 0 : 1;
}
