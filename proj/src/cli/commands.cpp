#include "rotwave/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <ostream>

#include <json.hpp>

#include "rotwave/analysis.hpp"
#include "rotwave/constants.hpp"
#include "rotwave/errors.hpp"
#include "rotwave/parallel.hpp"

namespace rotwave::cli {

namespace {

namespace fs = std::filesystem;
using spectra::SpinPairFactor;

constexpr int kLowPowerRealizations = 30;

fs::path output_dir(const RunConfig& cfg, const CommandOptions& opt) {
  fs::path dir = opt.out_dir.empty() ? fs::path(cfg.output_directory) : opt.out_dir;
  fs::create_directories(dir);
  return dir;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

void write_meta(const fs::path& dir, const std::string& command, const RunConfig& cfg) {
  nlohmann::ordered_json meta;
  meta["command"] = command;
  meta["version"] = kVersion;
  meta["hbar_eV_fs"] = kHbar;
  meta["rotation_period_fs"] = cfg.period();
  nlohmann::ordered_json echo;
  for (const auto& [key, value] : cfg.echo()) echo[key] = value;
  meta["config"] = echo;
  auto out = open_output(dir / "meta.json");
  out << meta.dump(2) << '\n';
}

void write_plot_script(const fs::path& dir, const std::string& csv, const std::string& ycol,
                       int ycol_index) {
  auto out = open_output(dir / ("plot_" + fs::path(csv).stem().string() + ".gp"));
  out << "# gnuplot script; run from this directory\n"
      << "set datafile separator ','\n"
      << "set key autotitle columnhead\n"
      << "set xlabel 'theta (deg)'\n"
      << "set ylabel '" << ycol << "'\n"
      << "set xrange [0:180]\n"
      << "plot for [i=0:*] '" << csv << "' every ::1 index i using 2:" << ycol_index
      << " with lines\n";
}

std::vector<double> theta_grid(const RunConfig& cfg) {
  return wavepacket::default_theta_grid(cfg.theta_points);
}

void warn_all(const std::vector<std::string>& warnings, std::ostream& log) {
  for (const auto& w : warnings) log << "warning: " << w << '\n';
}

SpinPairFactor make_factor(const RunConfig& cfg, const wavepacket::ModelParams& mp, std::ostream& log) {
  const auto kp = mp.kernel(cfg.spacing);
  switch (cfg.provider) {
    case spectra::Provider::continuum: return SpinPairFactor::continuum(kp);
    case spectra::Provider::poisson_sum: return SpinPairFactor::poisson_sum(kp, cfg.m_max);
    case spectra::Provider::universal: return SpinPairFactor::universal();
    case spectra::Provider::numeric: break;
  }
  warn_all(kp.warnings(), log);
  const auto range = mp.spin_range();
  auto set = std::make_shared<const spectra::SpectrumSet>(spectra::make_spectrum_set(
      cfg.spectra_kind, range.lo, range.hi, cfg.spectra_levels, cfg.spacing, cfg.seed));
  warn_all(spectra::window_warnings(*set, kp, range.hi - range.lo), log);
  return SpinPairFactor::numeric(std::move(set), kp);
}

// Rows of a field are written with time as the outer loop.
void write_field_rows(std::ostream& out, const wavepacket::AngularField& field,
                      const std::vector<const wavepacket::AngularField*>& columns) {
  for (std::size_t it = 0; it < field.times.size(); ++it) {
    for (std::size_t ith = 0; ith < field.thetas.size(); ++ith) {
      out << format_number(field.times[it]) << ',' << format_number(rad_to_deg(field.thetas[ith]));
      for (const auto* col : columns) out << ',' << format_number(col->at(it, ith));
      out << '\n';
    }
  }
}

}  // namespace

void cmd_simulate(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log) {
  cfg.validate();
  const auto dir = output_dir(cfg, opt);
  const auto factor = make_factor(cfg, cfg.model, log);
  const auto times = cfg.resolved_times();
  const auto thetas = theta_grid(cfg);
  const auto field = wavepacket::scaled_distribution(cfg.model, factor, times, thetas, cfg.threads);

  auto out = open_output(dir / "distribution.csv");
  out << "time_fs,theta_deg,R\n";
  write_field_rows(out, field, {&field});
  write_meta(dir, "simulate", cfg);
  if (opt.plot_script) write_plot_script(dir, "distribution.csv", "R = P/P_diag", 3);
  log << "simulate: " << field.values.size() << " grid points -> " << (dir / "distribution.csv").string()
      << '\n';
}

void cmd_nearfar(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log) {
  cfg.validate();
  const auto dir = output_dir(cfg, opt);
  const auto factor = make_factor(cfg, cfg.model, log);
  const auto times = cfg.resolved_times();
  const auto thetas = theta_grid(cfg);
  const auto nf =
      wavepacket::nearfar_distribution(cfg.model, factor, times, thetas, cfg.nearfar_mode, cfg.threads);

  auto out = open_output(dir / "nearfar.csv");
  out << "time_fs,theta_deg,Rplus,Rminus,Rclassical\n";
  write_field_rows(out, nf.plus, {&nf.plus, &nf.minus, &nf.classical});
  write_meta(dir, "nearfar", cfg);
  if (opt.plot_script) write_plot_script(dir, "nearfar.csv", "Rclassical", 5);

  double worst = 0.0;
  for (std::size_t it = 0; it < times.size(); ++it)
    worst = std::max(worst, analysis::fringe_visibility(thetas, nf.classical.row(it), cfg.window()).visibility);
  log << "nearfar: " << nf.classical.values.size() << " grid points, max Rclassical visibility "
      << format_number(worst) << '\n';
}

void cmd_kernel_check(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log) {
  cfg.validate();
  const auto dir = output_dir(cfg, opt);
  const auto kp = cfg.kernel();
  warn_all(kp.warnings(), log);
  const int max_dj = *std::max_element(cfg.kc_delta_j.begin(), cfg.kc_delta_j.end());
  const double recurrence = 2.0 * kPi * kHbar / cfg.spacing;

  std::vector<double> times(static_cast<std::size_t>(cfg.kc_time_points));
  for (std::size_t i = 0; i < times.size(); ++i)
    times[i] = cfg.kc_t_max_fraction * recurrence * static_cast<double>(i) / (times.size() - 1);

  const bool random = cfg.spectra_kind != spectra::SpectrumKind::equidistant;
  const int n_sets = random ? cfg.kc_seeds : 1;
  const std::size_t per_set = times.size() * cfg.kc_delta_j.size();
  std::vector<spectra::cplx> numeric(static_cast<std::size_t>(n_sets) * per_set);
  std::vector<std::string> window_notes;
  parallel_for(static_cast<std::size_t>(n_sets), cfg.threads, [&](std::size_t s) {
    const auto set = spectra::make_spectrum_set(cfg.spectra_kind, 0, max_dj, cfg.spectra_levels,
                                                cfg.spacing, spectra::derive_seed(cfg.seed, s));
    if (s == 0) window_notes = spectra::window_warnings(set, kp, max_dj);
    for (std::size_t it = 0; it < times.size(); ++it)
      for (std::size_t k = 0; k < cfg.kc_delta_j.size(); ++k)
        numeric[s * per_set + it * cfg.kc_delta_j.size() + k] =
            spectra::spin_pair_sum_numeric(times[it], cfg.kc_delta_j[k], 0, set, kp);
  });
  warn_all(window_notes, log);

  auto out = open_output(dir / "kernel_check.csv");
  out << "time_fs,t_over_recurrence,delta_j,numeric_re,numeric_im,continuum_re,continuum_im,"
         "poisson_re,poisson_im,mean_abs_dev_continuum,abs_dev_poisson\n";
  double worst_cont = 0.0, worst_poisson = 0.0;
  for (std::size_t it = 0; it < times.size(); ++it) {
    for (std::size_t k = 0; k < cfg.kc_delta_j.size(); ++k) {
      const int dj = cfg.kc_delta_j[k];
      const auto cont = spectra::spin_pair_factor_continuum(times[it], dj, 0, kp);
      const auto pois = spectra::spin_pair_factor_poisson(times[it], dj, 0, kp, cfg.m_max);
      spectra::cplx mean(0.0, 0.0);
      double dev = 0.0;
      for (int s = 0; s < n_sets; ++s) {
        const auto v = numeric[static_cast<std::size_t>(s) * per_set + it * cfg.kc_delta_j.size() + k];
        mean += v;
        dev += std::abs(v - cont);
      }
      mean /= n_sets;
      dev /= n_sets;
      const double dev_p = std::abs(mean - pois);
      const double frac = times[it] / recurrence;
      if (frac <= cfg.kc_valid_fraction + 1e-12) {
        worst_cont = std::max(worst_cont, dev);
        worst_poisson = std::max(worst_poisson, dev_p);
      }
      out << format_number(times[it]) << ',' << format_number(frac) << ',' << dj << ','
          << format_number(mean.real()) << ',' << format_number(mean.imag()) << ','
          << format_number(cont.real()) << ',' << format_number(cont.imag()) << ','
          << format_number(pois.real()) << ',' << format_number(pois.imag()) << ','
          << format_number(dev) << ',' << format_number(dev_p) << '\n';
    }
  }
  write_meta(dir, "kernel-check", cfg);
  log << "kernel-check: kind=" << spectra::to_string(cfg.spectra_kind) << " sets=" << n_sets
      << " beta/D=" << format_number(kp.beta / kp.spacing) << " window t <= "
      << format_number(cfg.kc_valid_fraction) << "*2pi*hbar/D: max mean |numeric-continuum| = "
      << format_number(worst_cont) << ", max |numeric-poisson_sum| = " << format_number(worst_poisson)
      << '\n';
}

void cmd_mc_check(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log) {
  cfg.validate();
  const auto dir = output_dir(cfg, opt);
  const auto range = cfg.model.spin_range();
  const auto set = spectra::make_spectrum_set(cfg.spectra_kind, range.lo, range.hi, cfg.spectra_levels,
                                              cfg.spacing, cfg.seed);
  const double t = cfg.mc_time_in_T * cfg.period();
  std::vector<wavepacket::McEstimate> est(cfg.mc_thetas_deg.size());
  parallel_for(est.size(), cfg.threads, [&](std::size_t i) {
    est[i] = wavepacket::monte_carlo_power(cfg.model, set, spectra::derive_seed(cfg.seed, 7919 + i),
                                           cfg.mc_realizations, t, deg_to_rad(cfg.mc_thetas_deg[i]));
  });

  const bool low_power = cfg.mc_realizations < kLowPowerRealizations;
  auto out = open_output(dir / "mc_check.csv");
  out << "time_fs,theta_deg,mean_R,standard_error,pass\n";
  int passed = 0;
  for (std::size_t i = 0; i < est.size(); ++i) {
    const double mean = est[i].ratio();
    const double se = est[i].ratio_error();
    const bool pass = std::abs(mean - 1.0) < 3.0 * se;
    passed += pass;
    out << format_number(t) << ',' << format_number(cfg.mc_thetas_deg[i]) << ',' << format_number(mean)
        << ',' << format_number(se) << ',' << (pass ? 1 : 0) << '\n';
    log << "mc-check: t=" << format_number(t) << " fs theta=" << format_number(cfg.mc_thetas_deg[i])
        << " deg <R>=" << format_number(mean) << " SE=" << format_number(se) << ' '
        << (pass ? "PASS" : "FAIL") << '\n';
  }
  write_meta(dir, "mc-check", cfg);
  log << "mc-check: " << passed << '/' << est.size() << " probes within 3 SE of the universal limit"
      << (low_power ? " (low power: fewer than 30 realizations)" : "") << '\n';
}

void cmd_report(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log) {
  cfg.validate();
  const auto dir = output_dir(cfg, opt);
  const auto times = cfg.resolved_times();
  const auto thetas = theta_grid(cfg);
  const double t_period = cfg.period();

  auto csv = open_output(dir / "report.csv");
  csv << "d,time_fs,t_over_T,visibility,n_extrema,classical_visibility,packet_center_deg,"
         "packet_width_deg,t_qct_fs,T_fs,t_over_t_qct\n";
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (double d : cfg.report_d_values) {
    auto mp = cfg.model;
    mp.spin_window = d;
    mp.validate();
    const auto factor = make_factor(cfg, mp, log);
    const auto field = wavepacket::scaled_distribution(mp, factor, times, thetas, cfg.threads);
    const auto nf = wavepacket::nearfar_distribution(mp, factor, times, thetas,
                                                     wavepacket::TravelingMode::exact, cfg.threads);
    const double t_qct = analysis::qct_time(mp.beta, d, cfg.qct_prefactor);
    for (std::size_t it = 0; it < times.size(); ++it) {
      const auto fringes = analysis::fringe_visibility(thetas, field.row(it), cfg.window());
      const auto classical = analysis::fringe_visibility(thetas, nf.classical.row(it), cfg.window());
      const auto packet = analysis::packet_fit(thetas, nf.minus.row(it));
      csv << format_number(d) << ',' << format_number(times[it]) << ','
          << format_number(times[it] / t_period) << ',' << format_number(fringes.visibility) << ','
          << fringes.n_extrema << ',' << format_number(classical.visibility) << ','
          << format_number(rad_to_deg(packet.center)) << ',' << format_number(rad_to_deg(packet.width_sigma))
          << ',' << format_number(t_qct) << ',' << format_number(t_period) << ','
          << format_number(times[it] / t_qct) << '\n';

      nlohmann::ordered_json row;
      row["d"] = d;
      row["time_fs"] = times[it];
      nlohmann::ordered_json fr;
      fr["window_deg"] = {rad_to_deg(fringes.window.lo), rad_to_deg(fringes.window.hi)};
      fr["visibility"] = fringes.visibility;
      fr["n_extrema"] = fringes.n_extrema;
      std::vector<double> pos;
      for (double p : fringes.extrema_positions) pos.push_back(rad_to_deg(p));
      fr["extrema_positions_deg"] = pos;
      fr["mean_level"] = fringes.mean_level;
      fr["global_contrast"] = fringes.global_contrast;
      fr["meaningful"] = fringes.meaningful;
      row["fringes"] = fr;
      row["classical_visibility"] = classical.visibility;
      row["packet"] = {{"center_deg", rad_to_deg(packet.center)},
                       {"width_sigma_deg", rad_to_deg(packet.width_sigma)},
                       {"goodness", packet.goodness}};
      row["t_qct_fs"] = t_qct;
      row["T_fs"] = t_period;
      rows.push_back(row);
    }
  }
  auto js = open_output(dir / "report.json");
  js << rows.dump(2) << '\n';
  write_meta(dir, "report", cfg);
  log << "report: " << rows.size() << " (d, t) rows -> " << (dir / "report.csv").string() << '\n';
}

int run_command(const std::string& name, const RunConfig& cfg, const CommandOptions& opt,
                std::ostream& log, std::ostream& err) {
  try {
    if (name == "simulate") cmd_simulate(cfg, opt, log);
    else if (name == "nearfar") cmd_nearfar(cfg, opt, log);
    else if (name == "kernel-check") cmd_kernel_check(cfg, opt, log);
    else if (name == "mc-check") cmd_mc_check(cfg, opt, log);
    else if (name == "report") cmd_report(cfg, opt, log);
    else {
      err << "error: unknown command '" << name << "'\n";
      return kConfigError;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::domain_error& e) {
    err << "validation error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    err << "validation error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalError;
  }
  return kSuccess;
}

}  // namespace rotwave::cli
