#pragma once

#include <string>

namespace kwopt_cli {

struct PlotOutputs {
  std::string dat_path;
  std::string script_path;
};

// Turn a curve CSV into a gnuplot pair next to it: `<id>.dat` with log10
// columns and `<id>.gp` drawing the points plus the fitted line, restricted
// to the fit window.  The fit is taken from the sibling summary.csv row with
// the same id when present, otherwise refitted over all checkpoints.
// Rewriting the same inputs produces the same bytes.
PlotOutputs write_plotdata(const std::string& curve_csv_path);

}  // namespace kwopt_cli
