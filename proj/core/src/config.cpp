// Copyright 2026 The gossipleak Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gossipleak/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gossipleak/errors.hpp"

namespace gossipleak {

namespace {

constexpr std::array<std::pair<ExperimentKind, const char*>, 10> kKindNames{{
    {ExperimentKind::kAvgAudit, "avg-audit"},
    {ExperimentKind::kAvgAttack, "avg-attack"},
    {ExperimentKind::kDgdAttack, "dgd-attack"},
    {ExperimentKind::kErSweep, "er-sweep"},
    {ExperimentKind::kCentrality, "centrality"},
    {ExperimentKind::kRelationship, "relationship"},
    {ExperimentKind::kLrSweep, "lr-sweep"},
    {ExperimentKind::kGeometricSaturation, "geometric-saturation"},
    {ExperimentKind::kDgdLine, "dgd-line"},
    {ExperimentKind::kFlorentine, "florentine"},
}};

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

long long parse_integer(const std::string& key, const std::string& value) {
  long long out = 0;
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) throw ConfigError("config: " + key + " expects an integer, got '" + value + "'");
  return out;
}

int parse_int(const std::string& key, const std::string& value) {
  return static_cast<int>(parse_integer(key, value));
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    double out = std::stod(value, &used);
    if (used == value.size()) return out;
  } catch (const std::exception&) {
  }
  throw ConfigError("config: " + key + " expects a number, got '" + value + "'");
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("config: " + key + " expects true or false, got '" + value + "'");
}

template <typename T, typename F>
std::vector<T> parse_list(const std::string& key, const std::string& value, F parse) {
  std::vector<T> out;
  for (const auto& item : split_list(value)) out.push_back(parse(key, item));
  return out;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T, typename F>
std::string join(const std::vector<T>& values, F format) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ",";
    out += format(values[i]);
  }
  return out;
}

const std::vector<std::string>& known_generators() {
  static const std::vector<std::string> names{"er", "line", "geometric", "florentine", "complete", "star"};
  return names;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  for (auto [k, name] : kKindNames)
    if (k == kind) return name;
  return "unknown";
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
  for (auto [k, label] : kKindNames)
    if (name == label) return k;
  throw ConfigError("config: unknown experiment '" + name + "'");
}

std::string to_string(const AttackerSpec& spec) {
  switch (spec.kind) {
    case AttackerSpec::Kind::kRandom:
      return "random:" + std::to_string(spec.count);
    case AttackerSpec::Kind::kRotateAll:
      return "rotate-all";
    case AttackerSpec::Kind::kExplicit:
      break;
  }
  return join(spec.ids, [](NodeId v) { return std::to_string(v); });
}

AttackerSpec attacker_spec_from_string(const std::string& text) {
  AttackerSpec spec;
  const std::string t = trim(text);
  if (t == "rotate-all") {
    spec.kind = AttackerSpec::Kind::kRotateAll;
  } else if (t.rfind("random:", 0) == 0) {
    spec.kind = AttackerSpec::Kind::kRandom;
    spec.count = parse_int("attackers", t.substr(7));
    if (spec.count < 1) throw ConfigError("config: attackers random:k needs k >= 1");
  } else {
    spec.ids = parse_list<NodeId>("attackers", t, parse_int);
    if (spec.ids.empty()) throw ConfigError("config: attackers is empty");
  }
  return spec;
}

KeyValues parse_key_values(const std::string& text) {
  KeyValues out;
  std::stringstream ss(text);
  std::string line;
  int number = 0;
  while (std::getline(ss, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", number);
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError("empty key", number);
    if (!out.emplace(key, value).second) throw ParseError("duplicate key '" + key + "'", number);
  }
  return out;
}

KeyValues load_key_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_key_values(buffer.str());
  } catch (const ParseError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig cfg;
  cfg.kind = kind;
  cfg.attackers.ids = {0};
  switch (kind) {
    case ExperimentKind::kAvgAudit:
    case ExperimentKind::kAvgAttack:
      cfg.graph = {"er", "", 50, 0.1, 0.0, false};
      cfg.iterations = kHorizonSaturate;
      cfg.dim = 1;
      break;
    case ExperimentKind::kDgdAttack:
      cfg.graph = {"florentine", "", 15, 0.0, 0.0, false};
      cfg.attackers.ids = {1};  // Medici
      break;
    case ExperimentKind::kErSweep:
      cfg.graph = {"er", "", 0, 0.0, 0.0, false};
      cfg.grid_n = {20, 50, 100};
      cfg.grid_p = {0.05, 0.1, 0.2, 0.4, 1.0};
      cfg.grid_attackers = {1, 2, 3};
      cfg.graphs = 20;
      break;
    case ExperimentKind::kCentrality:
    case ExperimentKind::kRelationship:
      cfg.graph = {"er", "", 50, 0.08, 0.0, true};
      cfg.graphs = 100;
      break;
    case ExperimentKind::kLrSweep:
      cfg.graph = {"florentine", "", 15, 0.0, 0.0, false};
      cfg.attackers.ids = {1};
      cfg.model = "logistic";
      cfg.eta_grid = {1e-5, 1e-4, 1e-3, 1e-2, 1e-1};
      cfg.repetitions = 4;
      break;
    case ExperimentKind::kGeometricSaturation:
      cfg.graph = {"geometric", "", 50, 0.0, 0.2, false};
      cfg.attackers = {AttackerSpec::Kind::kRandom, {}, 1};
      cfg.horizons = {1, 4, 8, 16};
      cfg.graphs = 20;
      break;
    case ExperimentKind::kDgdLine:
      cfg.graph = {"line", "", 31, 0.0, 0.0, false};
      cfg.model = "logistic";
      cfg.repetitions = 100;
      break;
    case ExperimentKind::kFlorentine:
      cfg.graph = {"florentine", "", 15, 0.0, 0.0, false};
      cfg.attackers = {AttackerSpec::Kind::kRotateAll, {}, 1};
      cfg.model = "logistic";
      cfg.eta = 1e-5;
      cfg.repetitions = 10;
      break;
  }
  return cfg;
}

ExperimentConfig config_from_key_values(const KeyValues& values) {
  auto kind_it = values.find("experiment");
  if (kind_it == values.end()) throw ConfigError("config: missing 'experiment'");
  ExperimentConfig cfg = default_config(experiment_kind_from_string(kind_it->second));

  const bool has_generator = values.count("graph") > 0;
  const bool has_file = values.count("graph_file") > 0 && !values.at("graph_file").empty();
  if (has_generator && has_file) throw ConfigError("config: give either 'graph' or 'graph_file', not both");

  for (const auto& [key, value] : values) {
    if (key == "experiment") {
      continue;
    } else if (key == "graph") {
      if (std::find(known_generators().begin(), known_generators().end(), value) == known_generators().end()) {
        throw ConfigError("config: unknown graph generator '" + value + "'");
      }
      cfg.graph.generator = value;
      cfg.graph.path.clear();
    } else if (key == "graph_file") {
      if (value.empty()) continue;
      cfg.graph.path = value;
      cfg.graph.generator.clear();
    } else if (key == "n") {
      cfg.graph.n = parse_int(key, value);
    } else if (key == "p") {
      cfg.graph.p = parse_double(key, value);
    } else if (key == "radius") {
      cfg.graph.radius = parse_double(key, value);
    } else if (key == "connected") {
      cfg.graph.require_connected = parse_bool(key, value);
    } else if (key == "attackers") {
      cfg.attackers = attacker_spec_from_string(value);
    } else if (key == "iterations") {
      if (value == "auto") {
        cfg.iterations = kHorizonAuto;
      } else if (value == "saturate") {
        cfg.iterations = kHorizonSaturate;
      } else {
        cfg.iterations = parse_int(key, value);
        if (cfg.iterations < 1) throw ConfigError("config: iterations must be positive, auto or saturate");
      }
    } else if (key == "scheme") {
      try {
        cfg.scheme = weight_scheme_from_string(value);
      } catch (const Error& e) {
        throw ConfigError(std::string("config: ") + e.what());
      }
    } else if (key == "mode") {
      if (value == "exact") {
        cfg.mode = NumericMode::kExact;
      } else if (value == "float") {
        cfg.mode = NumericMode::kFloat;
      } else {
        throw ConfigError("config: mode must be exact or float");
      }
    } else if (key == "model") {
      if (value != "synthetic" && value != "logistic") throw ConfigError("config: model must be synthetic or logistic");
      cfg.model = value;
    } else if (key == "eta") {
      cfg.eta = parse_double(key, value);
    } else if (key == "eta_grid") {
      cfg.eta_grid = parse_list<double>(key, value, parse_double);
    } else if (key == "sigma") {
      cfg.sigma = parse_double(key, value);
    } else if (key == "t0") {
      cfg.t0 = value == "auto" ? -1 : parse_int(key, value);
    } else if (key == "solver") {
      if (value == "ols") {
        cfg.solver = Solver::kOls;
      } else if (value == "gls") {
        cfg.solver = Solver::kGls;
      } else {
        throw ConfigError("config: solver must be ols or gls");
      }
    } else if (key == "dim") {
      cfg.dim = parse_int(key, value);
    } else if (key == "classes") {
      cfg.classes = parse_int(key, value);
    } else if (key == "image_side") {
      cfg.image_side = parse_int(key, value);
    } else if (key == "pretrain_samples") {
      cfg.pretrain_samples = parse_int(key, value);
    } else if (key == "pretrain_epochs") {
      cfg.pretrain_epochs = parse_int(key, value);
    } else if (key == "pretrain_rate") {
      cfg.pretrain_rate = parse_double(key, value);
    } else if (key == "psnr_threshold") {
      cfg.psnr_threshold = parse_double(key, value);
    } else if (key == "repetitions") {
      cfg.repetitions = parse_int(key, value);
    } else if (key == "graphs") {
      cfg.graphs = parse_int(key, value);
    } else if (key == "grid_n") {
      cfg.grid_n = parse_list<int>(key, value, parse_int);
    } else if (key == "grid_p") {
      cfg.grid_p = parse_list<double>(key, value, parse_double);
    } else if (key == "grid_attackers") {
      cfg.grid_attackers = parse_list<int>(key, value, parse_int);
    } else if (key == "horizons") {
      cfg.horizons = parse_list<int>(key, value, parse_int);
    } else if (key == "seed") {
      const long long s = parse_integer(key, value);
      if (s < 0) throw ConfigError("config: seed must be nonnegative");
      cfg.seed = static_cast<std::uint64_t>(s);
    } else if (key == "threads") {
      cfg.threads = parse_int(key, value);
    } else if (key == "out") {
      cfg.out_dir = value;
    } else {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  }

  if (!cfg.seed) throw ConfigError("config: 'seed' is mandatory");
  if (cfg.graph.generator.empty() == cfg.graph.path.empty()) {
    throw ConfigError("config: exactly one graph source is required");
  }
  if (cfg.repetitions < 1 || cfg.graphs < 1) throw ConfigError("config: repetitions and graphs must be positive");
  if (cfg.eta <= 0.0 || cfg.sigma < 0.0) throw ConfigError("config: eta must be positive and sigma nonnegative");
  if (cfg.threads < 0) throw ConfigError("config: threads must be nonnegative");
  if (cfg.classes < 2 || cfg.image_side < 1 || cfg.dim < 1) throw ConfigError("config: bad model dimensions");
  return cfg;
}

KeyValues to_key_values(const ExperimentConfig& cfg) {
  auto ints = [](int v) { return std::to_string(v); };
  KeyValues kv;
  kv["experiment"] = to_string(cfg.kind);
  if (cfg.graph.path.empty()) {
    kv["graph"] = cfg.graph.generator;
  } else {
    kv["graph_file"] = cfg.graph.path;
  }
  kv["n"] = ints(cfg.graph.n);
  kv["p"] = format_double(cfg.graph.p);
  kv["radius"] = format_double(cfg.graph.radius);
  kv["connected"] = cfg.graph.require_connected ? "true" : "false";
  kv["attackers"] = to_string(cfg.attackers);
  kv["iterations"] = cfg.iterations == kHorizonAuto       ? "auto"
                     : cfg.iterations == kHorizonSaturate ? "saturate"
                                                          : ints(cfg.iterations);
  kv["scheme"] = to_string(cfg.scheme);
  kv["mode"] = cfg.mode == NumericMode::kExact ? "exact" : "float";
  kv["model"] = cfg.model;
  kv["eta"] = format_double(cfg.eta);
  kv["eta_grid"] = join(cfg.eta_grid, format_double);
  kv["sigma"] = format_double(cfg.sigma);
  kv["t0"] = cfg.t0 < 0 ? "auto" : ints(cfg.t0);
  kv["solver"] = cfg.solver == Solver::kGls ? "gls" : "ols";
  kv["dim"] = ints(cfg.dim);
  kv["classes"] = ints(cfg.classes);
  kv["image_side"] = ints(cfg.image_side);
  kv["pretrain_samples"] = ints(cfg.pretrain_samples);
  kv["pretrain_epochs"] = ints(cfg.pretrain_epochs);
  kv["pretrain_rate"] = format_double(cfg.pretrain_rate);
  kv["psnr_threshold"] = format_double(cfg.psnr_threshold);
  kv["repetitions"] = ints(cfg.repetitions);
  kv["graphs"] = ints(cfg.graphs);
  kv["grid_n"] = join(cfg.grid_n, ints);
  kv["grid_p"] = join(cfg.grid_p, format_double);
  kv["grid_attackers"] = join(cfg.grid_attackers, ints);
  kv["horizons"] = join(cfg.horizons, ints);
  if (cfg.seed) kv["seed"] = std::to_string(*cfg.seed);
  kv["threads"] = ints(cfg.threads);
  kv["out"] = cfg.out_dir;
  return kv;
}

std::string config_hash(const ExperimentConfig& cfg) {
  KeyValues kv = to_key_values(cfg);
  kv.erase("seed");
  kv.erase("threads");
  kv.erase("out");
  std::uint64_t h = 14695981039346656037ull;
  auto feed = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
  };
  for (const auto& [k, v] : kv) {
    feed(k);
    feed("=");
    feed(v);
    feed("\n");
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

const std::vector<std::pair<std::string, std::string>>& config_schema() {
  static const std::vector<std::pair<std::string, std::string>> schema{
      {"experiment", "avg-audit | avg-attack | dgd-attack | er-sweep | centrality | relationship | lr-sweep | "
                     "geometric-saturation | dgd-line | florentine"},
      {"graph", "generator: er | line | geometric | florentine | complete | star"},
      {"graph_file", "edge-list path (replaces 'graph')"},
      {"n", "node count for generators"},
      {"p", "edge probability (er)"},
      {"radius", "connection radius (geometric)"},
      {"connected", "resample er graphs until connected (true/false)"},
      {"attackers", "explicit ids '0,3', 'random:k' or 'rotate-all'"},
      {"iterations", "horizon T, 'auto' (diameter + 2) or 'saturate' (averaging audits)"},
      {"scheme", "metropolis | max-degree"},
      {"mode", "exact | float (audits)"},
      {"model", "synthetic | logistic (D-GD)"},
      {"eta", "learning rate"},
      {"eta_grid", "comma-separated learning rates (lr-sweep)"},
      {"sigma", "gradient noise standard deviation (synthetic model)"},
      {"t0", "first attacked iteration, or 'auto' for convergence detection"},
      {"solver", "ols | gls"},
      {"dim", "synthetic gradient dimension / private value dimension"},
      {"classes", "softmax classes (logistic)"},
      {"image_side", "synthetic image side length"},
      {"pretrain_samples", "public samples used to pretrain the shared initial model"},
      {"pretrain_epochs", "full-batch pretraining epochs"},
      {"pretrain_rate", "pretraining step size"},
      {"psnr_threshold", "success threshold in dB"},
      {"repetitions", "repetitions per configuration"},
      {"graphs", "random graphs per cell or sample size"},
      {"grid_n", "er-sweep node counts"},
      {"grid_p", "er-sweep edge probabilities"},
      {"grid_attackers", "er-sweep attacker counts"},
      {"horizons", "geometric-saturation horizons"},
      {"seed", "base seed (mandatory)"},
      {"threads", "worker threads, 0 = hardware concurrency"},
      {"out", "output directory"},
  };
  return schema;
}

}  // namespace gossipleak
