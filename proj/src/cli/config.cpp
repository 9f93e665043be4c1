#include "rotwave/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "rotwave/constants.hpp"

namespace rotwave::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto* first = text.data();
  const auto* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v))
    throw ConfigError(key + ": '" + text + "' is not a finite number");
  return v;
}

long long parse_integer(const std::string& key, const std::string& text) {
  long long v = 0;
  const auto* first = text.data();
  const auto* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw ConfigError(key + ": '" + text + "' is not an integer");
  return v;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const auto* first = text.data();
  const auto* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw ConfigError(key + ": '" + text + "' is not an unsigned integer");
  return v;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream ss(text);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

std::vector<double> parse_double_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) out.push_back(parse_double(key, item));
  return out;
}

std::string exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T>
std::string join(const std::vector<T>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += ',';
    if constexpr (std::is_floating_point_v<T>) s += exact(values[i]);
    else s += std::to_string(values[i]);
  }
  return s;
}

std::string to_string(wavepacket::TravelingMode mode) {
  return mode == wavepacket::TravelingMode::exact ? "exact" : "asymptotic";
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

wavepacket::ModelParams RunConfig::default_model() {
  wavepacket::ModelParams mp;
  mp.spin_mean = 18.0;
  mp.spin_window = 2.0;
  mp.deflection = deg_to_rad(135.0);
  mp.hbar_omega = 0.045;
  mp.beta = 0.003;
  return mp;
}

double RunConfig::period() const { return analysis::rotation_period(model.hbar_omega); }

std::vector<double> RunConfig::resolved_times() const {
  if (!times_fs.empty()) return times_fs;
  std::vector<double> out;
  const double t_period = period();
  for (double f : times_in_T) out.push_back(f * t_period);
  return out;
}

void RunConfig::validate() const {
  try {
    model.validate();
    kernel().validate();
  } catch (const std::domain_error& e) {
    throw ConfigError(e.what());
  }
  if (!(model.hbar_omega > 0.0)) throw ConfigError("model.hbar_omega must be positive");
  if (m_max < 0) throw ConfigError("kernel.m_max must be >= 0");
  if (theta_points < 3) throw ConfigError("grid.theta_points must be >= 3");
  const auto times = resolved_times();
  if (times.empty()) throw ConfigError("no evaluation times configured");
  for (double t : times)
    if (!(t >= 0.0)) throw ConfigError("evaluation times must be non-negative");
  if (spectra_levels < 10) throw ConfigError("spectra.N must be >= 10");
  if (output_format != "csv") throw ConfigError("output.format: only 'csv' is supported");
  if (output_directory.empty()) throw ConfigError("output.directory is empty");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  if (!(window_lo_deg >= 0.0 && window_hi_deg > window_lo_deg && window_hi_deg <= 180.0))
    throw ConfigError("analysis.window_deg must be an increasing pair inside [0, 180]");
  if (!(qct_prefactor > 0.0)) throw ConfigError("analysis.qct_prefactor must be positive");
  if (report_d_values.empty()) throw ConfigError("report.d_values is empty");
  for (double d : report_d_values)
    if (!(d > 0.0)) throw ConfigError("report.d_values must be positive");
  if (mc_realizations < 1) throw ConfigError("mc.realizations must be >= 1");
  if (!(mc_time_in_T >= 0.0)) throw ConfigError("mc.time_in_T must be non-negative");
  if (mc_thetas_deg.empty()) throw ConfigError("mc.thetas_deg is empty");
  for (double th : mc_thetas_deg)
    if (!(th > 0.0 && th < 180.0)) throw ConfigError("mc.thetas_deg must lie inside (0, 180)");
  if (kc_seeds < 1) throw ConfigError("kernel_check.seeds must be >= 1");
  if (kc_delta_j.empty()) throw ConfigError("kernel_check.delta_j is empty");
  for (int dj : kc_delta_j)
    if (dj < 1) throw ConfigError("kernel_check.delta_j entries must be >= 1");
  if (kc_time_points < 2) throw ConfigError("kernel_check.time_points must be >= 2");
  if (!(kc_t_max_fraction > 0.0)) throw ConfigError("kernel_check.t_max_fraction must be positive");
  if (!(kc_valid_fraction > 0.0)) throw ConfigError("kernel_check.valid_fraction must be positive");
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
  auto& m = cfg.model;
  auto to_int = [&](long long lo, long long hi) {
    const auto v = parse_integer(key, value);
    if (v < lo || v > hi) throw ConfigError(key + ": value out of range");
    return static_cast<int>(v);
  };
  try {
    if (key == "model.I") m.spin_mean = parse_double(key, value);
    else if (key == "model.d") m.spin_window = parse_double(key, value);
    else if (key == "model.phi_deg") {
      cfg.phi_deg = parse_double(key, value);
      m.deflection = deg_to_rad(cfg.phi_deg);
    }
    else if (key == "model.hbar_omega") m.hbar_omega = parse_double(key, value);
    else if (key == "model.beta") m.beta = parse_double(key, value);
    else if (key == "model.gamma") m.lifetime_width = parse_double(key, value);
    else if (key == "model.w_min") m.window_cutoff = parse_double(key, value);
    else if (key == "kernel.D") cfg.spacing = parse_double(key, value);
    else if (key == "kernel.m_max") cfg.m_max = to_int(0, 100000);
    else if (key == "grid.theta_points") cfg.theta_points = to_int(3, 1000000);
    else if (key == "grid.times_fs") cfg.times_fs = parse_double_list(key, value);
    else if (key == "grid.times_in_T") cfg.times_in_T = parse_double_list(key, value);
    else if (key == "provider") cfg.provider = spectra::provider_from_string(value);
    else if (key == "spectra.kind") cfg.spectra_kind = spectra::spectrum_kind_from_string(value);
    else if (key == "spectra.N") cfg.spectra_levels = to_int(10, 100000);
    else if (key == "output.directory") cfg.output_directory = value;
    else if (key == "output.format") cfg.output_format = value;
    else if (key == "seed") cfg.seed = parse_unsigned(key, value);
    else if (key == "threads") cfg.threads = to_int(1, 4096);
    else if (key == "nearfar.mode") {
      if (value == "exact") cfg.nearfar_mode = wavepacket::TravelingMode::exact;
      else if (value == "asymptotic") cfg.nearfar_mode = wavepacket::TravelingMode::asymptotic;
      else throw ConfigError(key + ": expected exact or asymptotic");
    } else if (key == "analysis.window_deg") {
      const auto w = parse_double_list(key, value);
      if (w.size() != 2) throw ConfigError(key + ": expected two angles");
      cfg.window_lo_deg = w[0];
      cfg.window_hi_deg = w[1];
    } else if (key == "analysis.qct_prefactor") cfg.qct_prefactor = parse_double(key, value);
    else if (key == "report.d_values") cfg.report_d_values = parse_double_list(key, value);
    else if (key == "mc.realizations") cfg.mc_realizations = to_int(1, 100000000);
    else if (key == "mc.time_in_T") cfg.mc_time_in_T = parse_double(key, value);
    else if (key == "mc.thetas_deg") cfg.mc_thetas_deg = parse_double_list(key, value);
    else if (key == "kernel_check.seeds") cfg.kc_seeds = to_int(1, 1000000);
    else if (key == "kernel_check.delta_j") {
      cfg.kc_delta_j.clear();
      for (const auto& item : split_list(value)) cfg.kc_delta_j.push_back(static_cast<int>(parse_integer(key, item)));
    } else if (key == "kernel_check.time_points") cfg.kc_time_points = to_int(2, 1000000);
    else if (key == "kernel_check.t_max_fraction") cfg.kc_t_max_fraction = parse_double(key, value);
    else if (key == "kernel_check.valid_fraction") cfg.kc_valid_fraction = parse_double(key, value);
    else throw ConfigError("unknown key '" + key + "'");
  } catch (const std::invalid_argument& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

RunConfig parse_config(std::istream& in, const std::string& source) {
  RunConfig cfg;
  std::set<std::string> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(source + ":" + std::to_string(lineno) + ": expected key=value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second)
      throw ConfigError(source + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
    try {
      apply_setting(cfg, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (seen.count("grid.times_fs") && seen.count("grid.times_in_T"))
    throw ConfigError(source + ": grid.times_fs and grid.times_in_T are mutually exclusive");
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  return parse_config(in, path.string());
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("model.I", exact(model.spin_mean));
  kv.emplace_back("model.d", exact(model.spin_window));
  kv.emplace_back("model.phi_deg", exact(phi_deg));
  kv.emplace_back("model.hbar_omega", exact(model.hbar_omega));
  kv.emplace_back("model.beta", exact(model.beta));
  kv.emplace_back("model.gamma", exact(model.lifetime_width));
  kv.emplace_back("model.w_min", exact(model.window_cutoff));
  kv.emplace_back("kernel.D", exact(spacing));
  kv.emplace_back("kernel.m_max", std::to_string(m_max));
  kv.emplace_back("grid.theta_points", std::to_string(theta_points));
  if (!times_fs.empty()) kv.emplace_back("grid.times_fs", join(times_fs));
  else kv.emplace_back("grid.times_in_T", join(times_in_T));
  kv.emplace_back("provider", spectra::to_string(provider));
  kv.emplace_back("spectra.kind", spectra::to_string(spectra_kind));
  kv.emplace_back("spectra.N", std::to_string(spectra_levels));
  kv.emplace_back("output.directory", output_directory);
  kv.emplace_back("output.format", output_format);
  kv.emplace_back("seed", std::to_string(seed));
  kv.emplace_back("threads", std::to_string(threads));
  kv.emplace_back("nearfar.mode", to_string(nearfar_mode));
  kv.emplace_back("analysis.window_deg", exact(window_lo_deg) + "," + exact(window_hi_deg));
  kv.emplace_back("analysis.qct_prefactor", exact(qct_prefactor));
  kv.emplace_back("report.d_values", join(report_d_values));
  kv.emplace_back("mc.realizations", std::to_string(mc_realizations));
  kv.emplace_back("mc.time_in_T", exact(mc_time_in_T));
  kv.emplace_back("mc.thetas_deg", join(mc_thetas_deg));
  kv.emplace_back("kernel_check.seeds", std::to_string(kc_seeds));
  kv.emplace_back("kernel_check.delta_j", join(kc_delta_j));
  kv.emplace_back("kernel_check.time_points", std::to_string(kc_time_points));
  kv.emplace_back("kernel_check.t_max_fraction", exact(kc_t_max_fraction));
  kv.emplace_back("kernel_check.valid_fraction", exact(kc_valid_fraction));
  return kv;
}

}  // namespace rotwave::cli
