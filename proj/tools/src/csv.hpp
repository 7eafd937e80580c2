#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "kwopt/harness.hpp"

namespace kwopt_cli {

class CsvError : public std::runtime_error {
 public:
  explicit CsvError(const std::string& what) : std::runtime_error(what) {}
};

// Locale-independent, round-trip-exact: 17 significant digits via
// std::to_chars, so equal bytes mean equal doubles.
std::string format_double(double v);

// Columns: k, mean_abs_error, std_error, n_paths_effective, diverged.
// Header row always present, "\n" record ends.
void write_curve_csv(const std::string& path, const kwopt::ErrorCurve& curve);

struct SummaryRow {
  std::string id;
  bool has_fit = false;
  kwopt::RegressionFit fit;
  std::uint64_t fit_lo = 0;
  std::uint64_t fit_hi = 0;
  std::string config;  // experiment echo as a JSON document
};

// Columns: experiment_id, slope, intercept, r_squared, fit_lo, fit_hi,
// config.  The fit fields are empty when no fit window was given; config is
// an RFC-4180 quoted field.
void write_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows);

struct CurveData {
  std::vector<std::uint64_t> checkpoints;
  std::vector<double> mean_abs_error;
  std::vector<double> std_error;
  std::vector<std::uint64_t> n_paths_effective;
  std::vector<std::uint64_t> diverged;
};

CurveData read_curve_csv(const std::string& path);
std::vector<SummaryRow> read_summary_csv(const std::string& path);

}  // namespace kwopt_cli
