#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "slspec/bounds.hpp"
#include "slspec/forward.hpp"
#include "slspec/kernel.hpp"
#include "slspec/reconstruct.hpp"
#include "slspec/wkb.hpp"

namespace slspec::io {

constexpr int kSpectralVersion = 1;

nlohmann::json to_json(const SpectralData& sd);
SpectralData spectral_from_json(const nlohmann::json& j);
void write_spectral(const std::string& path, const SpectralData& sd);
SpectralData read_spectral(const std::string& path);

nlohmann::json to_json(const RateReport& r);

// Doubles are written with 17 significant digits so reruns are byte-identical.
std::string fmt(double v);

void write_wkb_csv(const std::string& path, const WkbProfile& prof);
void write_kernel_csv(const std::string& path, const KernelField& kf);
void write_recon_csv(const std::string& path, const ReconstructionResult& r);

struct RateRow {
  double omega, sup_err, L1_err;
};
void write_rates_csv(const std::string& path, const std::vector<RateRow>& rows, const RateReport& report);

struct Series {
  std::string name;
  std::vector<double> x, y;
};
// Standalone SVG line plot.
void write_svg(const std::string& path, const std::string& title, const std::vector<Series>& series,
               bool log_x = false, bool log_y = false);

}  // namespace slspec::io
