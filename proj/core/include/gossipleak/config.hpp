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

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gossipleak/attack_dgd.hpp"
#include "gossipleak/gossip_matrix.hpp"
#include "gossipleak/graph.hpp"
#include "gossipleak/rref.hpp"

namespace gossipleak {

// Horizon sentinels: diameter + 2 (largest component), or run the exact
// audit until the attackers' view stops growing (averaging only).
inline constexpr int kHorizonAuto = -1;
inline constexpr int kHorizonSaturate = -2;

enum class ExperimentKind {
  kAvgAudit,
  kAvgAttack,
  kDgdAttack,
  kErSweep,
  kCentrality,
  kRelationship,
  kLrSweep,
  kGeometricSaturation,
  kDgdLine,
  kFlorentine,
};

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& name);  // throws ConfigError

struct GraphSource {
  // One of er | line | geometric | florentine | complete | star, or empty
  // when `path` names an edge-list file.
  std::string generator;
  std::string path;
  int n = 0;
  double p = 0.0;
  double radius = 0.0;
  bool require_connected = false;
};

struct AttackerSpec {
  enum class Kind { kExplicit, kRandom, kRotateAll };
  Kind kind = Kind::kExplicit;
  std::vector<NodeId> ids;  // kExplicit
  int count = 1;            // kRandom
};

std::string to_string(const AttackerSpec& spec);
AttackerSpec attacker_spec_from_string(const std::string& text);  // "0,3" | "random:k" | "rotate-all"

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kAvgAudit;
  GraphSource graph;
  AttackerSpec attackers;
  int iterations = kHorizonAuto;
  WeightScheme scheme = WeightScheme::kMetropolisHastings;
  NumericMode mode = NumericMode::kExact;

  // D-GD model and noise.
  std::string model = "synthetic";  // synthetic | logistic
  double eta = 1e-4;
  std::vector<double> eta_grid;
  double sigma = 0.0;
  int t0 = 0;  // -1: convergence detection
  Solver solver = Solver::kOls;
  int dim = 4;  // synthetic gradient dimension
  int classes = 10;
  int image_side = 8;
  int pretrain_samples = 200;
  int pretrain_epochs = 100;
  double pretrain_rate = 0.5;
  double psnr_threshold = 10.0;

  // Repetition counts and sweep grids.
  int repetitions = 1;
  int graphs = 20;
  std::vector<int> grid_n;
  std::vector<double> grid_p;
  std::vector<int> grid_attackers;
  std::vector<int> horizons;

  std::optional<std::uint64_t> seed;
  int threads = 0;  // 0: hardware concurrency
  std::string out_dir = "results";
};

using KeyValues = std::map<std::string, std::string>;

// `key = value` lines, '#' comments, blank lines ignored. Throws ParseError
// with the line number on malformed lines or duplicate keys.
KeyValues parse_key_values(const std::string& text);
KeyValues load_key_values(const std::string& path);

// Preset defaults for the kind named by `values["experiment"]`, then every
// key applied in turn. Throws ConfigError on unknown keys, bad values, two
// graph sources, or a missing seed.
ExperimentConfig config_from_key_values(const KeyValues& values);

// Preset defaults without seed.
ExperimentConfig default_config(ExperimentKind kind);

// Canonical flat form; feeding it back reproduces the config.
KeyValues to_key_values(const ExperimentConfig& cfg);

// FNV-1a over the canonical form without seed, threads and out_dir, as 16
// hex digits.
std::string config_hash(const ExperimentConfig& cfg);

// Keys accepted by config_from_key_values, with a one-line description.
const std::vector<std::pair<std::string, std::string>>& config_schema();

}  // namespace gossipleak
