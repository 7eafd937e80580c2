#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo experiments for a derivative-free stochastic optimizer"};
  app.require_subcommand(1);

  kwopt_cli::RunOptions opt;
  CLI::App* run = app.add_subcommand("run", "Run experiments and write CSV artifacts");
  run->add_option("--config", opt.config_path, "JSON experiment file");
  run->add_option("--preset", opt.preset_id, "Built-in experiment id (see `presets`)");
  run->add_option("--set", opt.sets,
                  "Override config values before validation, e.g. "
                  "--set scheme.gamma=0.25 or --set n_paths=100");
  run->add_flag("--dry-run", opt.dry_run, "Validate the config and write nothing");
  run->add_option("--workers", opt.workers, "Worker threads, 0 = hardware concurrency");

  CLI::App* presets = app.add_subcommand("presets", "List the built-in experiments");

  std::string csv_path;
  CLI::App* plotdata =
      app.add_subcommand("plotdata", "Emit a gnuplot data file and script for a curve CSV");
  plotdata->add_option("csv", csv_path, "Curve CSV produced by `run`")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // bad command line is a config error
  }

  if (run->parsed()) return kwopt_cli::cmd_run(opt);
  if (presets->parsed()) return kwopt_cli::cmd_presets();
  if (plotdata->parsed()) return kwopt_cli::cmd_plotdata(csv_path);
  return 2;
}
