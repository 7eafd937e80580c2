#pragma once

#include <string>
#include <vector>

namespace kwopt_cli {

struct RunOptions {
  std::string config_path;
  std::string preset_id;
  std::vector<std::string> sets;
  bool dry_run = false;
  unsigned workers = 0;
};

// Exit statuses: 0 success, 1 runtime failure, 2 bad input.
int cmd_run(const RunOptions& opt);
int cmd_presets();
int cmd_plotdata(const std::string& csv_path);

}  // namespace kwopt_cli
