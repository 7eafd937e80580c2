#include "plotdata.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "csv.hpp"
#include "kwopt/harness.hpp"

namespace kwopt_cli {

namespace fs = std::filesystem;

namespace {

std::string strip_curve_suffix(const fs::path& p) {
  const std::string name = p.filename().string();
  const std::string suffix = ".curve.csv";
  if (name.size() > suffix.size() &&
      name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0) {
    return name.substr(0, name.size() - suffix.size());
  }
  return p.stem().string();
}

struct FitWindow {
  kwopt::RegressionFit fit;
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
};

FitWindow resolve_fit(const fs::path& curve_path, const std::string& id,
                      const CurveData& data) {
  const fs::path summary = curve_path.parent_path() / "summary.csv";
  if (fs::exists(summary)) {
    for (const SummaryRow& row : read_summary_csv(summary.string())) {
      if (row.id == id && row.has_fit) {
        return {row.fit, row.fit_lo, row.fit_hi};
      }
    }
  }
  // No recorded fit: refit over everything so the plot is still annotated.
  kwopt::ErrorCurve curve;
  curve.checkpoints = data.checkpoints;
  curve.mean_abs_error = data.mean_abs_error;
  const std::uint64_t lo = data.checkpoints.front();
  const std::uint64_t hi = data.checkpoints.back();
  try {
    return {kwopt::fit_loglog(curve, lo, hi), lo, hi};
  } catch (const std::exception& e) {
    throw CsvError(curve_path.string() + ": cannot fit a reference line (" +
                   e.what() + ")");
  }
}

}  // namespace

PlotOutputs write_plotdata(const std::string& curve_csv_path) {
  const fs::path curve_path(curve_csv_path);
  if (!fs::exists(curve_path)) {
    throw CsvError("no such file: " + curve_csv_path);
  }
  const CurveData data = read_curve_csv(curve_csv_path);
  const std::string id = strip_curve_suffix(curve_path);
  const FitWindow fw = resolve_fit(curve_path, id, data);

  const fs::path dir = curve_path.parent_path();
  const fs::path dat_path = dir / (id + ".dat");
  const fs::path script_path = dir / (id + ".gp");

  {
    std::ofstream dat(dat_path, std::ios::binary);
    if (!dat) throw CsvError("cannot open for writing: " + dat_path.string());
    dat << "# log10_k log10_mean_abs_error\n";
    for (std::size_t i = 0; i < data.checkpoints.size(); ++i) {
      if (!(data.mean_abs_error[i] > 0.0) || data.checkpoints[i] == 0) continue;
      dat << format_double(std::log10(static_cast<double>(data.checkpoints[i])))
          << ' ' << format_double(std::log10(data.mean_abs_error[i])) << "\n";
    }
    dat.flush();
    if (!dat) throw CsvError("write failed: " + dat_path.string());
  }

  // The fit was done in natural logs; in log10-log10 coordinates the slope
  // is unchanged and the intercept divides by ln 10.
  const double slope = fw.fit.slope;
  const double intercept10 = fw.fit.intercept / std::log(10.0);
  const double x_lo = std::log10(static_cast<double>(fw.lo));
  const double x_hi = std::log10(static_cast<double>(fw.hi));
  char slope_label[32];
  std::snprintf(slope_label, sizeof slope_label, "%.3f", slope);

  {
    std::ofstream gp(script_path, std::ios::binary);
    if (!gp) throw CsvError("cannot open for writing: " + script_path.string());
    gp << "# error curve and fitted rate for " << id << "\n"
       << "set terminal pngcairo size 900,600\n"
       << "set output '" << id << ".png'\n"
       << "set xlabel 'log10(k)'\n"
       << "set ylabel 'log10(mean |theta_k - theta*|)'\n"
       << "set key left bottom\n"
       << "fit_lo = " << format_double(x_lo) << "\n"
       << "fit_hi = " << format_double(x_hi) << "\n"
       << "f(x) = " << format_double(slope) << " * x + " << format_double(intercept10)
       << "\n"
       << "plot '" << id << ".dat' using 1:2 with points pointtype 7 title '" << id
       << "', \\\n"
       << "     (x >= fit_lo && x <= fit_hi) ? f(x) : 1/0 with lines linewidth 2 "
          "title 'fit slope "
       << slope_label << "'\n";
    gp.flush();
    if (!gp) throw CsvError("write failed: " + script_path.string());
  }

  return {dat_path.string(), script_path.string()};
}

}  // namespace kwopt_cli
