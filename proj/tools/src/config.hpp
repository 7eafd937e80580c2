#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "kwopt/harness.hpp"

namespace kwopt_cli {

// Anything wrong with a config document: JSON syntax (with line:column),
// schema violations, or semantic rejections from the core validator.  The
// CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct ExperimentSpec {
  std::string id;
  kwopt::RunConfig cfg;
  bool has_fit = false;
};

struct ExperimentFile {
  std::string output_dir;  // empty: fall back to $KWOPT_OUTPUT_DIR, then "."
  std::vector<ExperimentSpec> experiments;
};

// Strict JSON parse: unknown keys are rejected with their path, syntax
// errors carry line:column, and every experiment is validated before the
// caller gets anything back.
ExperimentFile parse_config(const std::string& text);

// The two stages of parse_config, split so overrides can be applied to the
// raw document in between.
nlohmann::json parse_json(const std::string& text);
ExperimentFile parse_document(const nlohmann::json& doc);

// Apply `path=value` overrides to the raw document before parsing.  A path
// starting with `output_dir` or `experiments` is rooted at the document;
// any other path is applied to every entry of `experiments` (so
// `scheme.gamma=0.25` retunes all of them at once).  The value is parsed as
// JSON when it scans as JSON, and kept as a string otherwise.
void apply_overrides(nlohmann::json& doc, const std::vector<std::string>& sets);

// Effective config of one experiment as a self-contained document:
// `{"experiments": [ ... ]}` with every default materialized, so the echo
// feeds straight back into parse_config and reruns identically.
nlohmann::json to_document(const ExperimentSpec& spec);

std::string format_parse_error(const nlohmann::json::parse_error& err,
                               const std::string& text);

}  // namespace kwopt_cli
