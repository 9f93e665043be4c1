#pragma once

// Flat key=value run configuration ("model.I=18"), one key per line, '#'
// starts a comment. Unknown and duplicate keys are rejected.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rotwave/analysis.hpp"
#include "rotwave/constants.hpp"
#include "rotwave/spectra.hpp"
#include "rotwave/wavepacket.hpp"

namespace rotwave::cli {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct RunConfig {
  wavepacket::ModelParams model = default_model();
  double phi_deg = 135.0;  // kept in degrees so the echo round-trips exactly

  double spacing = 1e-4;  // kernel.D, eV
  int m_max = 20;

  int theta_points = 721;
  std::vector<double> times_fs;                      // explicit times win over fractions
  std::vector<double> times_in_T{0.125, 0.25, 0.375};

  spectra::Provider provider = spectra::Provider::continuum;
  spectra::SpectrumKind spectra_kind = spectra::SpectrumKind::equidistant;
  int spectra_levels = 300;

  std::string output_directory = "out";
  std::string output_format = "csv";
  std::uint64_t seed = 1;
  int threads = 1;

  wavepacket::TravelingMode nearfar_mode = wavepacket::TravelingMode::exact;
  double window_lo_deg = 2.0;
  double window_hi_deg = 60.0;
  double qct_prefactor = 2.0;
  std::vector<double> report_d_values{2.0, 5.0, 10.0};

  int mc_realizations = 500;
  double mc_time_in_T = 0.25;
  std::vector<double> mc_thetas_deg{30.0, 60.0, 90.0, 120.0, 150.0};

  int kc_seeds = 50;
  std::vector<int> kc_delta_j{1, 2, 3};
  int kc_time_points = 61;
  double kc_t_max_fraction = 0.3;
  double kc_valid_fraction = 0.2;

  /// Re-checks every physical invariant; throws ConfigError.
  void validate() const;
  spectra::KernelParams kernel() const { return model.kernel(spacing); }
  double period() const;  // rotation period T, fs
  std::vector<double> resolved_times() const;
  /// Every key with its resolved value, in a fixed order; parses back to
  /// the same configuration.
  std::vector<std::pair<std::string, std::string>> echo() const;

  analysis::AngleWindow window() const { return {deg_to_rad(window_lo_deg), deg_to_rad(window_hi_deg)}; }

  static wavepacket::ModelParams default_model();
};

RunConfig parse_config(std::istream& in, const std::string& source = "<config>");
RunConfig load_config(const std::filesystem::path& path);
/// Applies one key=value pair; throws ConfigError for unknown keys or bad values.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

/// %.9g, the format of every number in CSV output.
std::string format_number(double v);

}  // namespace rotwave::cli
