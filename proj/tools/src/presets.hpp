#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace kwopt_cli {

struct Preset {
  std::string id;
  std::string summary;  // one-line human description
  nlohmann::json document;
};

// The ten built-in experiments: the eight decreasing-gain table cells
// (three i.i.d. models times two pairings, plus the AR(1) pair) and two
// fixed-gain plateau runs.  Sizes are desk scale; push n_paths to 10000 and
// the grid to 2^20 with a [8192, 1048576] fit window for full-scale runs.
const std::vector<Preset>& all_presets();

// Null if the id is unknown.
const Preset* find_preset(const std::string& id);

}  // namespace kwopt_cli
