#include "slspec/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "slspec/error.hpp"

namespace slspec::io {

namespace {

Error ioerr(const std::string& op, const std::string& msg) { return Error("cli_harness", op, msg); }

std::ofstream open_out(const std::string& path, const char* op) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ioerr(op, "cannot open '" + path + "' for writing");
  return f;
}

}  // namespace

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json to_json(const SpectralData& sd) {
  return {{"version", kSpectralVersion}, {"omega", sd.omega},       {"potential_id", sd.potential_id},
          {"xi", sd.xi},                 {"C", sd.C},               {"q0", sd.q0},
          {"q0_derivatives", sd.q0_derivatives}};
}

SpectralData spectral_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("version") || !j["version"].is_number_integer())
    throw ioerr("read_spectral", "missing integer 'version'");
  const int v = j["version"].get<int>();
  if (v != kSpectralVersion)
    throw ioerr("read_spectral", "unsupported spectral schema version " + std::to_string(v));
  SpectralData sd;
  try {
    sd.omega = j.at("omega").get<double>();
    sd.potential_id = j.value("potential_id", std::string());
    sd.xi = j.at("xi").get<std::vector<double>>();
    sd.C = j.at("C").get<std::vector<double>>();
    sd.q0 = j.at("q0").get<double>();
    sd.q0_derivatives = j.value("q0_derivatives", std::vector<double>{});
  } catch (const nlohmann::json::exception& e) {
    throw ioerr("read_spectral", std::string("malformed spectral document: ") + e.what());
  }
  if (sd.xi.size() != sd.C.size()) throw ioerr("read_spectral", "xi and C lengths differ");
  return sd;
}

void write_spectral(const std::string& path, const SpectralData& sd) {
  auto f = open_out(path, "write_spectral");
  f << to_json(sd).dump(2) << "\n";
}

SpectralData read_spectral(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ioerr("read_spectral", "cannot read '" + path + "'");
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ioerr("read_spectral", std::string("invalid JSON: ") + e.what());
  }
  return spectral_from_json(j);
}

nlohmann::json to_json(const RateReport& r) {
  nlohmann::json s = nlohmann::json::array();
  for (const auto& [w, e] : r.samples) s.push_back({w, e});
  return {{"envelope_kind", to_string(r.envelope_kind)},
          {"m", r.m},
          {"samples", s},
          {"fitted_exponent", r.fitted_exponent},
          {"fitted_log_factor", r.fitted_log_factor},
          {"prefactor", r.prefactor},
          {"fit_residual", r.fit_residual},
          {"required_exponent", r.required_exponent},
          {"below_envelope", r.below_envelope},
          {"pass", r.pass},
          {"message", r.message}};
}

void write_wkb_csv(const std::string& path, const WkbProfile& prof) {
  auto f = open_out(path, "write_wkb_csv");
  f << "j,eta,xi_wkb,x_plus,action,theta_plus,log_s\n";
  for (std::size_t i = 0; i < prof.eta.size(); ++i)
    f << i + 1 << ',' << fmt(prof.eta[i]) << ',' << fmt(prof.eta[i] / prof.epsilon) << ',' << fmt(prof.x_plus[i])
      << ',' << fmt(prof.action_values[i]) << ',' << fmt(prof.theta_plus[i]) << ',' << fmt(prof.log_s[i]) << '\n';
}

void write_kernel_csv(const std::string& path, const KernelField& kf) {
  auto f = open_out(path, "write_kernel_csv");
  f << "x,y,re_A,im_A\n";
  for (std::size_t i = 0; i <= kf.n(); ++i)
    for (std::size_t j = 0; j <= i; ++j)
      f << fmt(kf.grid[i]) << ',' << fmt(kf.grid[j]) << ',' << fmt(kf.A[i][j].real()) << ','
        << fmt(kf.A[i][j].imag()) << '\n';
  f << "# diag\n# x,re_diag,im_diag,re_diag_deriv,im_diag_deriv\n";
  for (std::size_t i = 0; i <= kf.n(); ++i)
    f << "# " << fmt(kf.grid[i]) << ',' << fmt(kf.diag[i].real()) << ',' << fmt(kf.diag[i].imag()) << ','
      << fmt(kf.diag_deriv[i].real()) << ',' << fmt(kf.diag_deriv[i].imag()) << '\n';
  f << "# residual " << fmt(kf.residual) << "\n";
}

void write_recon_csv(const std::string& path, const ReconstructionResult& r) {
  auto f = open_out(path, "write_recon_csv");
  const bool ref = r.Q_ref.size() == r.grid.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  f << "x,Q_ref,Q_rec,Q_int_ref,Q_int_rec,abs_err,flag_singular\n";
  for (std::size_t i = 0; i < r.grid.size(); ++i) {
    const double qr = ref ? r.Q_ref[i] : nan, ir = ref ? r.Q_int_ref[i] : nan;
    const double err = ref ? std::abs(ir - r.Q_int[i]) : nan;
    f << fmt(r.grid[i]) << ',' << fmt(qr) << ',' << fmt(r.Q_rec[i]) << ',' << fmt(ir) << ',' << fmt(r.Q_int[i]) << ','
      << fmt(err) << ',' << (r.singular[i] ? 1 : 0) << '\n';
  }
}

void write_rates_csv(const std::string& path, const std::vector<RateRow>& rows, const RateReport& report) {
  auto f = open_out(path, "write_rates_csv");
  f << "omega,sup_err,L1_err\n";
  for (const auto& r : rows) f << fmt(r.omega) << ',' << fmt(r.sup_err) << ',' << fmt(r.L1_err) << '\n';
  f << "# " << to_json(report).dump() << '\n';
}

void write_svg(const std::string& path, const std::string& title, const std::vector<Series>& series, bool log_x,
               bool log_y) {
  const double W = 640, H = 420, ml = 70, mr = 20, mt = 40, mb = 50;
  auto tx = [&](double v) { return log_x ? std::log10(v) : v; };
  auto ty = [&](double v) { return log_y ? std::log10(v) : v; };
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double a = tx(s.x[i]), b = ty(s.y[i]);
      if (!std::isfinite(a) || !std::isfinite(b)) continue;
      x0 = std::min(x0, a), x1 = std::max(x1, a), y0 = std::min(y0, b), y1 = std::max(y1, b);
    }
  if (!(x1 > x0)) x0 -= 0.5, x1 += 0.5;
  if (!(y1 > y0)) y0 -= 0.5, y1 += 0.5;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad, y1 += pad;
  auto px = [&](double a) { return ml + (a - x0) / (x1 - x0) * (W - ml - mr); };
  auto py = [&](double b) { return H - mb - (b - y0) / (y1 - y0) * (H - mt - mb); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

  auto f = open_out(path, "write_svg");
  char buf[128];
  f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  f << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  f << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
    << title << "</text>\n";
  f << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << W - ml - mr << "\" height=\"" << H - mt - mb
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double a = x0 + k * (x1 - x0) / 4, b = y0 + k * (y1 - y0) / 4;
    std::snprintf(buf, sizeof buf, "%.3g", log_x ? std::pow(10.0, a) : a);
    f << "<text x=\"" << px(a) << "\" y=\"" << H - mb + 18 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"11\">" << buf << "</text>\n";
    std::snprintf(buf, sizeof buf, "%.3g", log_y ? std::pow(10.0, b) : b);
    f << "<text x=\"" << ml - 6 << "\" y=\"" << py(b) + 4 << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
      << "font-size=\"11\">" << buf << "</text>\n";
  }
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* c = colors[k % 5];
    f << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double a = tx(s.x[i]), b = ty(s.y[i]);
      if (!std::isfinite(a) || !std::isfinite(b)) continue;
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(a), py(b));
      f << buf;
    }
    f << "\"/>\n";
    f << "<text x=\"" << ml + 10 << "\" y=\"" << mt + 16 + 14 * k << "\" fill=\"" << c
      << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.name << "</text>\n";
  }
  f << "</svg>\n";
}

}  // namespace slspec::io
