#include "presets.hpp"

#include <cstdint>

namespace kwopt_cli {

using nlohmann::json;

namespace {

constexpr std::uint64_t kPresetSeed = 1729;

json powers_of_two(int lo, int hi) {
  json arr = json::array();
  for (int p = lo; p <= hi; ++p) arr.push_back(std::uint64_t{1} << p);
  return arr;
}

json table_decreasing() {
  return json{{"type", "decreasing"},
              {"lambda0", 1.0},
              {"c0", 1.0},
              {"gamma", 0.2},
              {"k0", std::uint64_t{10000}}};
}

Preset make(std::string id, std::string summary, json noise, const char* pairing,
            double theta0, json scheme, std::uint64_t n_paths, json checkpoints,
            std::uint64_t fit_lo, std::uint64_t fit_hi) {
  json e;
  e["id"] = id;
  e["objective"] = "benchmark";
  e["noise"] = std::move(noise);
  e["pairing"] = pairing;
  e["scheme"] = std::move(scheme);
  e["divisor"] = "c";
  e["theta0"] = theta0;
  e["n_paths"] = n_paths;
  e["checkpoints"] = std::move(checkpoints);
  e["fit"] = json::array({fit_lo, fit_hi});
  e["master_seed"] = kPresetSeed;
  json doc;
  doc["experiments"] = json::array({e});
  return Preset{std::move(id), std::move(summary), std::move(doc)};
}

std::vector<Preset> build_all() {
  const json normal{{"model", "normal"}, {"mean", 0.0}, {"sd", 1.0}};
  const json uniform{{"model", "uniform01"}};
  const json beta{{"model", "beta22"}};
  const json ar1{{"model", "ar1"}, {"kappa", 0.75}, {"innovation_sd", 1.0}};
  const json cps = powers_of_two(8, 20);
  const std::uint64_t lo = 1 << 13, hi = 1 << 20;
  const std::uint64_t paths = 10000;

  std::vector<Preset> v;
  v.push_back(make("table1-normal-independent",
                   "N(0,1) noise, independent pair draws, theta0 -0.1", normal,
                   "independent", -0.1, table_decreasing(), paths, cps, lo, hi));
  v.push_back(make("table1-normal-crn",
                   "N(0,1) noise, one draw shared per pair, theta0 -0.1", normal,
                   "identical", -0.1, table_decreasing(), paths, cps, lo, hi));
  v.push_back(make("table1-uniform-independent",
                   "U([0,1]) noise, independent pair draws, theta0 1", uniform,
                   "independent", 1.0, table_decreasing(), paths, cps, lo, hi));
  v.push_back(make("table1-uniform-crn",
                   "U([0,1]) noise, one draw shared per pair, theta0 1", uniform,
                   "identical", 1.0, table_decreasing(), paths, cps, lo, hi));
  v.push_back(make("table1-beta-independent",
                   "Beta(2,2) noise, independent pair draws, theta0 1", beta,
                   "independent", 1.0, table_decreasing(), paths, cps, lo, hi));
  v.push_back(make("table1-beta-crn",
                   "Beta(2,2) noise, one draw shared per pair, theta0 1", beta,
                   "identical", 1.0, table_decreasing(), paths, cps, lo, hi));
  v.push_back(make("table2-ar1-consecutive",
                   "AR(1) kappa 0.75 noise, consecutive observations, theta0 0", ar1,
                   "consecutive", 0.0, table_decreasing(), paths, cps, lo, hi));
  v.push_back(make("table2-ar1-crn",
                   "AR(1) kappa 0.75 noise, one value shared per pair, theta0 0", ar1,
                   "identical", 0.0, table_decreasing(), paths, cps, lo, hi));

  // Fixed-gain plateau runs: c is coupled as a^(1/5) by omission.
  const json cps_fixed = powers_of_two(8, 15);
  v.push_back(make("fixed-normal-1e-2",
                   "N(0,1) noise, fixed gain a 0.01 with coupled c, theta0 -0.1",
                   normal, "identical", -0.1, json{{"type", "fixed"}, {"a", 0.01}},
                   2000, cps_fixed, 1 << 13, 1 << 15));
  v.push_back(make("fixed-normal-1e-3",
                   "N(0,1) noise, fixed gain a 0.001 with coupled c, theta0 -0.1",
                   normal, "identical", -0.1, json{{"type", "fixed"}, {"a", 0.001}},
                   2000, cps_fixed, 1 << 13, 1 << 15));
  return v;
}

}  // namespace

const std::vector<Preset>& all_presets() {
  static const std::vector<Preset> presets = build_all();
  return presets;
}

const Preset* find_preset(const std::string& id) {
  for (const Preset& p : all_presets()) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

}  // namespace kwopt_cli
