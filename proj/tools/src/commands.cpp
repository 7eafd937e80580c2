#include "commands.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "config.hpp"
#include "csv.hpp"
#include "plotdata.hpp"
#include "presets.hpp"

namespace kwopt_cli {

namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string resolve_output_dir(const ExperimentFile& file) {
  if (!file.output_dir.empty()) return file.output_dir;
  if (const char* env = std::getenv("KWOPT_OUTPUT_DIR"); env && *env) return env;
  return ".";
}

}  // namespace

int cmd_run(const RunOptions& opt) {
  try {
    nlohmann::json doc;
    if (!opt.config_path.empty() && !opt.preset_id.empty()) {
      throw ConfigError("choose one of --config and --preset");
    }
    if (!opt.preset_id.empty()) {
      const Preset* preset = find_preset(opt.preset_id);
      if (!preset) {
        throw ConfigError("unknown preset \"" + opt.preset_id +
                          "\" (list them with `kwopt presets`)");
      }
      doc = preset->document;
    } else if (!opt.config_path.empty()) {
      doc = parse_json(read_file(opt.config_path));
    } else {
      throw ConfigError("run needs --config <path> or --preset <id>");
    }
    apply_overrides(doc, opt.sets);
    const ExperimentFile file = parse_document(doc);

    if (opt.dry_run) {
      std::printf("config ok: %zu experiment(s)\n", file.experiments.size());
      return 0;
    }

    const std::string out_dir = resolve_output_dir(file);
    fs::create_directories(out_dir);

    std::vector<SummaryRow> rows;
    for (const ExperimentSpec& spec : file.experiments) {
      const auto t0 = std::chrono::steady_clock::now();
      const kwopt::ErrorCurve curve = kwopt::run_experiment(spec.cfg, opt.workers);
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

      SummaryRow row;
      row.id = spec.id;
      row.config = to_document(spec).dump();
      if (spec.has_fit) {
        row.has_fit = true;
        row.fit = kwopt::fit_loglog(curve, spec.cfg.fit_lo, spec.cfg.fit_hi);
        row.fit_lo = spec.cfg.fit_lo;
        row.fit_hi = spec.cfg.fit_hi;
      }
      const std::string curve_path = out_dir + "/" + spec.id + ".curve.csv";
      write_curve_csv(curve_path, curve);
      rows.push_back(row);

      if (row.has_fit) {
        std::printf("%s: slope %.4f (r2 %.4f), diverged %llu/%llu, %.1fs -> %s\n",
                    spec.id.c_str(), row.fit.slope, row.fit.r_squared,
                    static_cast<unsigned long long>(curve.diverged),
                    static_cast<unsigned long long>(curve.n_paths), secs,
                    curve_path.c_str());
      } else {
        std::printf("%s: diverged %llu/%llu, %.1fs -> %s\n", spec.id.c_str(),
                    static_cast<unsigned long long>(curve.diverged),
                    static_cast<unsigned long long>(curve.n_paths), secs,
                    curve_path.c_str());
      }
    }
    write_summary_csv(out_dir + "/summary.csv", rows);
    return 0;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

int cmd_presets() {
  for (const Preset& p : all_presets()) {
    std::printf("preset %s: %s\n", p.id.c_str(), p.summary.c_str());
    std::printf("%s\n", p.document.dump(2).c_str());
  }
  std::printf("%zu presets\n", all_presets().size());
  return 0;
}

int cmd_plotdata(const std::string& csv_path) {
  try {
    const PlotOutputs out = write_plotdata(csv_path);
    std::printf("wrote %s\n", out.dat_path.c_str());
    std::printf("wrote %s\n", out.script_path.c_str());
    return 0;
  } catch (const CsvError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

}  // namespace kwopt_cli
