// rotwave: rotational wave packets of a coherently rotating intermediate
// complex and the washout of their interference fringes.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rotwave/cli/commands.hpp"
#include "rotwave/cli/config.hpp"

int main(int argc, char** argv) {
  using namespace rotwave::cli;

  CLI::App app{"rotwave: time-dependent angular power spectra of rotating complexes"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  int threads = 0;
  bool plot_script = false;

  for (const char* name : {"simulate", "nearfar", "kernel-check", "mc-check", "report"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "key=value configuration file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides output.directory)");
    sub->add_option("--seed", seed, "run seed (overrides seed)");
    sub->add_option("--threads", threads, "worker threads (overrides threads)");
    sub->add_flag("--plot-script", plot_script, "also write a gnuplot script");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kSuccess : kConfigError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  RunConfig cfg;
  try {
    cfg = load_config(config_path);
    const auto* sub = app.get_subcommands().front();
    if (sub->count("--seed")) cfg.seed = seed;
    if (sub->count("--threads")) cfg.threads = threads;
    if (!out_dir.empty()) cfg.output_directory = out_dir;
    cfg.validate();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  CommandOptions opt;
  opt.plot_script = plot_script;
  return run_command(command, cfg, opt, std::cout, std::cerr);
}
