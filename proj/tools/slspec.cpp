#include <atomic>
#include <cmath>
#include <complex>
#include <cstdio>
#include <iostream>
#include <optional>
#include <algorithm>
#include <cctype>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "slspec/bounds.hpp"
#include "slspec/error.hpp"
#include "slspec/forward.hpp"
#include "slspec/io.hpp"
#include "slspec/kernel.hpp"
#include "slspec/log.hpp"
#include "slspec/potential.hpp"
#include "slspec/reconstruct.hpp"
#include "slspec/wkb.hpp"

using namespace slspec;

namespace {

// Accepts "a", "a+bi", "a-bi", "bi" or "a,b".
std::complex<double> parse_complex(std::string s) {
  auto bad = [&] { return Error("cli_harness", "parse", "cannot parse complex value '" + s + "'"); };
  s.erase(std::remove_if(s.begin(), s.end(), ::isspace), s.end());
  try {
    std::size_t used = 0;
    if (auto c = s.find(','); c != std::string::npos)
      return {std::stod(s.substr(0, c)), std::stod(s.substr(c + 1))};
    if (s.empty()) throw bad();
    if (s.back() != 'i') {
      const double a = std::stod(s, &used);
      if (used != s.size()) throw bad();
      return {a, 0.0};
    }
    s.pop_back();
    std::size_t split = std::string::npos;
    for (std::size_t k = 1; k < s.size(); ++k)
      if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') split = k;
    const std::string re = split == std::string::npos ? "0" : s.substr(0, split);
    std::string im = split == std::string::npos ? s : s.substr(split);
    if (im == "+" || im == "" ) im = "1";
    if (im == "-") im = "-1";
    return {std::stod(re), std::stod(im)};
  } catch (const std::logic_error&) {
    throw bad();
  }
}

std::vector<double> parse_omegas(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw Error("cli_harness", "parse", "bad omega '" + tok + "'");
    }
  }
  if (out.empty()) throw Error("cli_harness", "parse", "empty omega list");
  for (std::size_t i = 1; i < out.size(); ++i)
    if (!(out[i] > out[i - 1])) throw Error("cli_harness", "parse", "omegas must be strictly increasing");
  return out;
}

void emit_error(const std::string& module, const std::string& op, const std::string& msg) {
  nlohmann::json j = {{"error", {{"module", module}, {"operation", op}, {"message", msg}}}};
  std::cerr << j.dump() << std::endl;
}

ReconstructionResult run_reconstruction(const SpectralData& sd, Method method, const std::vector<double>& grid,
                                        int n_kernel) {
  switch (method) {
    case Method::gl0: return reconstruct_gl0(sd, grid);
    case Method::glm: return reconstruct_glm(sd, grid, GlmOptions{n_kernel, 1e-6});
    case Method::lax_levermore: {
      std::vector<double> eta;
      for (double x : sd.xi) eta.push_back(x / sd.omega);
      return lax_levermore(eta, sd.C, 1.0 / sd.omega, grid);
    }
  }
  throw Error("cli_harness", "reconstruct", "unknown method");
}

void plot_recon(const std::string& path, const ReconstructionResult& r) {
  std::vector<io::Series> s;
  if (r.Q_ref.size() == r.grid.size()) s.push_back({"Q_ref", r.grid, r.Q_ref});
  s.push_back({"Q_rec (" + to_string(r.method) + ")", r.grid, r.Q_rec});
  io::write_svg(path, "reconstruction", s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"slspec: semiclassical spectral data and inverse reconstruction"};
  app.require_subcommand(1);
  std::uint64_t seed = 12345;
  app.add_option("--seed", seed, "seed for randomized checks");

  // forward
  std::string f_pot = "q1", f_out = "spectral.json";
  double f_omega = 10.0;
  auto* forward = app.add_subcommand("forward", "eigenvalues and characteristic values by shooting");
  forward->add_option("--potential", f_pot, "potential name or JSON config")->required();
  forward->add_option("--omega", f_omega, "semiclassical parameter")->required();
  forward->add_option("--out", f_out, "spectral JSON output");

  // wkb
  std::string w_pot = "q1", w_out = "wkb.csv";
  double w_omega = 10.0;
  auto* wkb = app.add_subcommand("wkb", "WKB quantization profile");
  wkb->add_option("--potential", w_pot)->required();
  wkb->add_option("--omega", w_omega)->required();
  wkb->add_option("--out", w_out);

  // kernel
  std::string k_w = "4.0", k_out = "kernel.csv";
  double k_X = 2.0;
  int k_n = 128;
  auto* kernel = app.add_subcommand("kernel", "transformation kernel A(x, y, w)");
  kernel->add_option("--w", k_w, "complex shift, e.g. 4, 1+5i or 1,5");
  kernel->add_option("--X", k_X);
  kernel->add_option("--n", k_n);
  kernel->add_option("--out", k_out);

  // reconstruct
  std::string r_spec, r_method = "gl0", r_grid = "0:3:256", r_ref, r_out = "recon.csv", r_plot;
  int r_nk = 256;
  auto* recon = app.add_subcommand("reconstruct", "potential from spectral data");
  recon->add_option("--spectral", r_spec)->required();
  recon->add_option("--method", r_method, "gl0|glm|ll");
  recon->add_option("--grid", r_grid, "start:stop:count");
  recon->add_option("--ref", r_ref, "reference potential for error columns");
  recon->add_option("--n-kernel", r_nk, "kernel grid intervals (glm)");
  recon->add_option("--out", r_out);
  recon->add_option("--plot", r_plot, "SVG of Q_ref against Q_rec");

  // benchmark
  std::string b_pot = "q1", b_omegas = "10,20,40,80", b_method = "gl0", b_grid = "0:2:201", b_out = "rates.csv",
              b_plot;
  int b_jobs = 1, b_nk = 256, b_m = 1;
  auto* bench = app.add_subcommand("benchmark", "forward-then-inverse error sweep over omega");
  bench->add_option("--potential", b_pot);
  bench->add_option("--omegas", b_omegas);
  bench->add_option("--method", b_method, "gl0|glm");
  bench->add_option("--grid", b_grid);
  bench->add_option("--jobs", b_jobs)->check(CLI::PositiveNumber);
  bench->add_option("--n-kernel", b_nk);
  bench->add_option("--m", b_m, "smoothness order for the glm envelope");
  bench->add_option("--out", b_out);
  bench->add_option("--plot", b_plot, "SVG of error against omega");

  // bounds
  double c_l = 2.0;
  int c_s = 1;
  auto* bounds = app.add_subcommand("bounds", "explicit approximation constants");
  bounds->add_option("--l", c_l);
  bounds->add_option("--s", c_s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*forward) {
      const Potential p = make_potential_by_name(f_pot);
      const SpectralData sd = forward_spectrum(p, f_omega);
      io::write_spectral(f_out, sd);
      std::printf("omega %g: %d eigenvalues -> %s\n", f_omega, sd.count(), f_out.c_str());
    } else if (*wkb) {
      const Potential p = make_potential_by_name(w_pot);
      const WkbProfile prof = wkb_spectrum(p, w_omega);
      for (const auto& f : prof.failures) log::warn("wkb: " + f);
      io::write_wkb_csv(w_out, prof);
      std::printf("omega %g: %zu WKB levels (predicted %d) -> %s\n", w_omega, prof.eta.size(), prof.predicted_count,
                  w_out.c_str());
    } else if (*kernel) {
      const KernelField kf = solve_kernel(k_X, parse_complex(k_w), k_n);
      io::write_kernel_csv(k_out, kf);
      std::printf("kernel residual %.3g, min rcond %.3g -> %s\n", kf.residual, kf.min_rcond, k_out.c_str());
    } else if (*recon) {
      const SpectralData sd = io::read_spectral(r_spec);
      const auto grid = parse_grid(r_grid);
      ReconstructionResult r = run_reconstruction(sd, method_from_string(r_method), grid, r_nk);
      if (!r_ref.empty()) attach_reference(r, make_potential_by_name(r_ref));
      io::write_recon_csv(r_out, r);
      if (!r_plot.empty()) plot_recon(r_plot, r);
      if (r.sup_error)
        std::printf("%s: sup |int Q - int Q_rec| = %.6g, L1 = %.6g -> %s\n", r_method.c_str(), *r.sup_error,
                    *r.L1_error, r_out.c_str());
      else
        std::printf("%s: %zu nodes -> %s\n", r_method.c_str(), grid.size(), r_out.c_str());
    } else if (*bench) {
      const Potential p = make_potential_by_name(b_pot);
      const auto omegas = parse_omegas(b_omegas);
      const auto grid = parse_grid(b_grid);
      const Method method = method_from_string(b_method);
      if (method == Method::lax_levermore) throw Error("cli_harness", "benchmark", "benchmark supports gl0 and glm");
      std::vector<io::RateRow> rows(omegas.size());
      std::vector<std::optional<Error>> errors(omegas.size());
      std::atomic<std::size_t> next{0};
      auto worker = [&] {
        for (std::size_t i; (i = next++) < omegas.size();) {
          try {
            const SpectralData sd = forward_spectrum(p, omegas[i]);
            ReconstructionResult r = run_reconstruction(sd, method, grid, b_nk);
            attach_reference(r, p);
            rows[i] = {omegas[i], *r.sup_error, *r.L1_error};
          } catch (const Error& e) {
            errors[i] = e;
          } catch (const std::exception& e) {
            errors[i] = Error("cli_harness", "benchmark", e.what());
          }
        }
      };
      std::vector<std::thread> pool;
      const int jobs = std::min<int>(b_jobs, static_cast<int>(omegas.size()));
      for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
      worker();
      for (auto& t : pool) t.join();
      for (const auto& e : errors)
        if (e) throw *e;
      std::vector<std::pair<double, double>> samples;
      for (const auto& r : rows) samples.emplace_back(r.omega, r.sup_err);
      const EnvelopeKind kind = method == Method::glm ? EnvelopeKind::glm_rate : EnvelopeKind::gl0_rate;
      const RateReport report = convergence_report(samples, kind, b_m);
      io::write_rates_csv(b_out, rows, report);
      if (!b_plot.empty()) {
        io::Series err{"sup error", {}, {}}, env{"K * envelope", {}, {}};
        for (const auto& r : rows) {
          err.x.push_back(r.omega);
          err.y.push_back(r.sup_err);
          env.x.push_back(r.omega);
          env.y.push_back(report.prefactor * rate_envelope(kind, r.omega, b_m));
        }
        io::write_svg(b_plot, "rate fit (" + b_method + ")", {err, env}, true, true);
      }
      std::printf("%s\n", report.message.c_str());
    } else if (*bounds) {
      std::printf("C_inf(%g, %d) = %.17g\nC_L1(%g, %d) = %.17g\n", c_l, c_s, vitushkin_c_inf(c_l, c_s), c_l, c_s,
                  vitushkin_c_l1(c_l, c_s));
    }
  } catch (const Error& e) {
    emit_error(e.module(), e.operation(), e.what());
    return 2;
  } catch (const std::exception& e) {
    emit_error("cli_harness", "run", e.what());
    return 2;
  }
  return 0;
}
