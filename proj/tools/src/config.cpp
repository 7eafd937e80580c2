#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <set>
#include <string>

#include "kwopt/schedules.hpp"

namespace kwopt_cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

void expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
}

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : j.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* a) { return item.key() == a; });
    if (!known) fail(path + "." + item.key(), "unknown key");
  }
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

std::uint64_t get_uint(const json& j, const std::string& path) {
  // Accept any integral JSON number that is not negative (documents built in
  // code may carry signed integer types for literals like 10000).
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer()) {
    const std::int64_t v = j.get<std::int64_t>();
    if (v >= 0) return static_cast<std::uint64_t>(v);
  }
  fail(path, "expected a non-negative integer");
}

kwopt::NoiseModel parse_noise(const json& j, const std::string& path) {
  expect_object(j, path);
  if (!j.contains("model")) fail(path, "missing required key \"model\"");
  const std::string model = get_string(j.at("model"), path + ".model");
  if (model == "normal") {
    check_keys(j, path, {"model", "mean", "sd"});
    double mean = 0.0, sd = 1.0;
    if (j.contains("mean")) mean = get_number(j.at("mean"), path + ".mean");
    if (j.contains("sd")) sd = get_number(j.at("sd"), path + ".sd");
    return kwopt::NoiseModel::normal(mean, sd);
  }
  if (model == "uniform01") {
    check_keys(j, path, {"model"});
    return kwopt::NoiseModel::uniform01();
  }
  if (model == "beta22") {
    check_keys(j, path, {"model"});
    return kwopt::NoiseModel::beta22();
  }
  if (model == "ar1") {
    check_keys(j, path, {"model", "kappa", "innovation_sd"});
    if (!j.contains("kappa")) fail(path, "missing required key \"kappa\"");
    const double kappa = get_number(j.at("kappa"), path + ".kappa");
    double isd = 1.0;
    if (j.contains("innovation_sd")) {
      isd = get_number(j.at("innovation_sd"), path + ".innovation_sd");
    }
    return kwopt::NoiseModel::ar1_process(kappa, isd);
  }
  fail(path + ".model",
       "unknown model \"" + model + "\" (expected normal, uniform01, beta22 or ar1)");
}

std::variant<kwopt::DecreasingGain, kwopt::FixedGain> parse_scheme(
    const json& j, const std::string& path) {
  expect_object(j, path);
  if (!j.contains("type")) fail(path, "missing required key \"type\"");
  const std::string type = get_string(j.at("type"), path + ".type");
  if (type == "decreasing") {
    check_keys(j, path, {"type", "lambda0", "c0", "gamma", "k0"});
    kwopt::DecreasingGain g;
    if (j.contains("lambda0")) g.lambda0 = get_number(j.at("lambda0"), path + ".lambda0");
    if (j.contains("c0")) g.c0 = get_number(j.at("c0"), path + ".c0");
    if (j.contains("gamma")) g.gamma = get_number(j.at("gamma"), path + ".gamma");
    if (j.contains("k0")) g.k0 = get_uint(j.at("k0"), path + ".k0");
    return g;
  }
  if (type == "fixed") {
    check_keys(j, path, {"type", "a", "c"});
    if (!j.contains("a")) fail(path, "missing required key \"a\"");
    const double a = get_number(j.at("a"), path + ".a");
    if (j.contains("c")) {
      return kwopt::FixedGain{a, get_number(j.at("c"), path + ".c")};
    }
    if (!(a > 0.0 && a <= 1.0)) {
      fail(path, "omitting \"c\" couples it as a^(1/5), which needs a in (0, 1]");
    }
    return kwopt::coupled_fixed_gain(a);
  }
  fail(path + ".type", "unknown type \"" + type + "\" (expected decreasing or fixed)");
}

kwopt::PairingMode parse_pairing(const std::string& s, const std::string& path) {
  if (s == "independent") return kwopt::PairingMode::independent;
  if (s == "identical") return kwopt::PairingMode::identical;
  if (s == "consecutive") return kwopt::PairingMode::consecutive;
  fail(path, "unknown pairing \"" + s + "\" (expected independent, identical or consecutive)");
}

bool valid_id(const std::string& id) {
  if (id.empty() || !std::isalnum(static_cast<unsigned char>(id.front()))) return false;
  return std::all_of(id.begin(), id.end(), [](unsigned char ch) {
    return std::isalnum(ch) || ch == '-' || ch == '_' || ch == '.';
  });
}

std::vector<std::uint64_t> default_checkpoints() {
  std::vector<std::uint64_t> cps;
  for (int p = 8; p <= 20; ++p) cps.push_back(std::uint64_t{1} << p);
  return cps;
}

ExperimentSpec parse_experiment(const json& j, const std::string& path) {
  expect_object(j, path);
  check_keys(j, path,
             {"id", "objective", "noise", "pairing", "scheme", "divisor", "theta0",
              "n_paths", "checkpoints", "fit", "master_seed"});

  ExperimentSpec spec;
  if (!j.contains("id")) fail(path, "missing required key \"id\"");
  spec.id = get_string(j.at("id"), path + ".id");
  if (!valid_id(spec.id)) {
    fail(path + ".id", "\"" + spec.id + "\" is not a usable file stem "
                       "(alphanumeric start; alphanumerics, '-', '_', '.')");
  }

  kwopt::RunConfig& cfg = spec.cfg;
  if (j.contains("objective")) {
    cfg.objective = get_string(j.at("objective"), path + ".objective");
  }
  if (!j.contains("noise")) fail(path, "missing required key \"noise\"");
  cfg.noise = parse_noise(j.at("noise"), path + ".noise");
  if (j.contains("pairing")) {
    cfg.pairing = parse_pairing(get_string(j.at("pairing"), path + ".pairing"),
                                path + ".pairing");
  }
  if (!j.contains("scheme")) fail(path, "missing required key \"scheme\"");
  cfg.scheme = parse_scheme(j.at("scheme"), path + ".scheme");
  if (j.contains("divisor")) {
    const std::string d = get_string(j.at("divisor"), path + ".divisor");
    if (d == "2c") {
      cfg.divisor = kwopt::DivisorConvention::two_c;
    } else if (d == "c") {
      cfg.divisor = kwopt::DivisorConvention::c;
    } else {
      fail(path + ".divisor", "unknown divisor \"" + d + "\" (expected \"2c\" or \"c\")");
    }
  }
  if (j.contains("theta0")) cfg.theta0 = get_number(j.at("theta0"), path + ".theta0");
  if (!j.contains("n_paths")) fail(path, "missing required key \"n_paths\"");
  cfg.n_paths = get_uint(j.at("n_paths"), path + ".n_paths");
  if (j.contains("checkpoints")) {
    const json& arr = j.at("checkpoints");
    if (!arr.is_array() || arr.empty()) {
      fail(path + ".checkpoints", "expected a non-empty array");
    }
    for (std::size_t i = 0; i < arr.size(); ++i) {
      cfg.checkpoints.push_back(
          get_uint(arr.at(i), path + ".checkpoints[" + std::to_string(i) + "]"));
    }
  } else {
    cfg.checkpoints = default_checkpoints();
  }
  if (j.contains("fit")) {
    const json& arr = j.at("fit");
    if (!arr.is_array() || arr.size() != 2) {
      fail(path + ".fit", "expected [k_lo, k_hi]");
    }
    cfg.fit_lo = get_uint(arr.at(0), path + ".fit[0]");
    cfg.fit_hi = get_uint(arr.at(1), path + ".fit[1]");
    spec.has_fit = true;
    const auto within = std::count_if(
        cfg.checkpoints.begin(), cfg.checkpoints.end(),
        [&](std::uint64_t k) { return k >= cfg.fit_lo && k <= cfg.fit_hi; });
    if (within < 3) {
      fail(path + ".fit", "window covers only " + std::to_string(within) +
                              " checkpoint(s); the fit needs at least 3");
    }
  }
  if (!j.contains("master_seed")) {
    fail(path, "missing required key \"master_seed\" (runs are never silently seeded)");
  }
  cfg.master_seed = get_uint(j.at("master_seed"), path + ".master_seed");

  if (const auto r = kwopt::validate(cfg); !r.ok) {
    fail(path + " (id \"" + spec.id + "\")", r.violation);
  }
  return spec;
}

}  // namespace

ExperimentFile parse_document(const json& doc) {
  expect_object(doc, "config");
  check_keys(doc, "config", {"output_dir", "experiments"});

  ExperimentFile file;
  if (doc.contains("output_dir")) {
    file.output_dir = get_string(doc.at("output_dir"), "config.output_dir");
  }
  if (!doc.contains("experiments")) fail("config", "missing required key \"experiments\"");
  const json& arr = doc.at("experiments");
  if (!arr.is_array() || arr.empty()) {
    fail("config.experiments", "expected a non-empty array");
  }
  std::set<std::string> seen;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    ExperimentSpec spec =
        parse_experiment(arr.at(i), "config.experiments[" + std::to_string(i) + "]");
    if (!seen.insert(spec.id).second) {
      fail("config.experiments[" + std::to_string(i) + "].id",
           "duplicate id \"" + spec.id + "\"");
    }
    file.experiments.push_back(std::move(spec));
  }
  return file;
}

std::string format_parse_error(const json::parse_error& err, const std::string& text) {
  // err.byte is the 1-based offset of the last read character.
  const std::size_t pos =
      std::min<std::size_t>(err.byte == 0 ? 0 : err.byte - 1, text.size());
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < pos; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  std::string what = err.what();
  if (const auto cut = what.find("] "); cut != std::string::npos) {
    what = what.substr(cut + 2);
  }
  return "config:" + std::to_string(line) + ":" + std::to_string(col) + ": " + what;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(format_parse_error(e, text));
  }
}

ExperimentFile parse_config(const std::string& text) {
  return parse_document(parse_json(text));
}

namespace {

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> segs;
  std::size_t start = 0;
  while (start <= path.size()) {
    const std::size_t dot = path.find('.', start);
    if (dot == std::string::npos) {
      segs.push_back(path.substr(start));
      break;
    }
    segs.push_back(path.substr(start, dot - start));
    start = dot + 1;
  }
  return segs;
}

void set_path(json& node, const std::vector<std::string>& segs, std::size_t i,
              const json& value, const std::string& full) {
  const std::string& seg = segs[i];
  if (seg.empty()) throw ConfigError("--set " + full + ": empty path segment");
  const bool last = i + 1 == segs.size();
  if (node.is_array()) {
    std::size_t idx = 0;
    try {
      std::size_t used = 0;
      idx = std::stoul(seg, &used);
      if (used != seg.size()) throw std::invalid_argument(seg);
    } catch (const std::exception&) {
      throw ConfigError("--set " + full + ": \"" + seg + "\" is not an array index");
    }
    if (idx >= node.size()) {
      throw ConfigError("--set " + full + ": index " + seg + " out of range");
    }
    if (last) {
      node[idx] = value;
    } else {
      set_path(node[idx], segs, i + 1, value, full);
    }
    return;
  }
  if (node.is_object() || node.is_null()) {
    if (last) {
      node[seg] = value;
    } else {
      if (!node.contains(seg)) node[seg] = json::object();
      set_path(node[seg], segs, i + 1, value, full);
    }
    return;
  }
  throw ConfigError("--set " + full + ": cannot descend into a scalar at \"" + seg + "\"");
}

}  // namespace

void apply_overrides(json& doc, const std::vector<std::string>& sets) {
  for (const std::string& s : sets) {
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("--set expects path=value, got \"" + s + "\"");
    }
    const std::string path = s.substr(0, eq);
    const std::string raw = s.substr(eq + 1);
    json value;
    try {
      value = json::parse(raw);
    } catch (const json::parse_error&) {
      value = raw;  // unquoted strings like pairing=identical
    }
    const std::vector<std::string> segs = split_path(path);
    if (segs.front() == "output_dir" || segs.front() == "experiments") {
      set_path(doc, segs, 0, value, path);
    } else {
      if (!doc.contains("experiments") || !doc.at("experiments").is_array()) {
        throw ConfigError("--set " + path + ": document has no experiments array");
      }
      for (json& exp : doc.at("experiments")) {
        set_path(exp, segs, 0, value, path);
      }
    }
  }
}

json to_document(const ExperimentSpec& spec) {
  const kwopt::RunConfig& cfg = spec.cfg;
  json e;
  e["id"] = spec.id;
  e["objective"] = cfg.objective;

  json noise;
  switch (cfg.noise.variant) {
    case kwopt::NoiseVariant::iid_normal:
      noise["model"] = "normal";
      noise["mean"] = cfg.noise.mean;
      noise["sd"] = cfg.noise.sd;
      break;
    case kwopt::NoiseVariant::iid_uniform01:
      noise["model"] = "uniform01";
      break;
    case kwopt::NoiseVariant::iid_beta22:
      noise["model"] = "beta22";
      break;
    case kwopt::NoiseVariant::ar1:
      noise["model"] = "ar1";
      noise["kappa"] = cfg.noise.kappa;
      noise["innovation_sd"] = cfg.noise.innovation_sd;
      break;
  }
  e["noise"] = noise;

  switch (cfg.pairing) {
    case kwopt::PairingMode::independent:
      e["pairing"] = "independent";
      break;
    case kwopt::PairingMode::identical:
      e["pairing"] = "identical";
      break;
    case kwopt::PairingMode::consecutive:
      e["pairing"] = "consecutive";
      break;
  }

  json scheme;
  if (const auto* dec = std::get_if<kwopt::DecreasingGain>(&cfg.scheme)) {
    scheme["type"] = "decreasing";
    scheme["lambda0"] = dec->lambda0;
    scheme["c0"] = dec->c0;
    scheme["gamma"] = dec->gamma;
    scheme["k0"] = dec->k0;
  } else {
    const auto& fix = std::get<kwopt::FixedGain>(cfg.scheme);
    scheme["type"] = "fixed";
    scheme["a"] = fix.a;
    scheme["c"] = fix.c;
  }
  e["scheme"] = scheme;

  e["divisor"] = cfg.divisor == kwopt::DivisorConvention::two_c ? "2c" : "c";
  e["theta0"] = cfg.theta0;
  e["n_paths"] = cfg.n_paths;
  e["checkpoints"] = cfg.checkpoints;
  if (spec.has_fit) e["fit"] = json::array({cfg.fit_lo, cfg.fit_hi});
  e["master_seed"] = *cfg.master_seed;

  json doc;
  doc["experiments"] = json::array({e});
  return doc;
}

}  // namespace kwopt_cli
