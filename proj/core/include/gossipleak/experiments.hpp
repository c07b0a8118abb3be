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

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <random>
#include <vector>

#include "gossipleak/config.hpp"
#include "gossipleak/graph.hpp"
#include "gossipleak/protocol.hpp"
#include "gossipleak/record.hpp"

namespace gossipleak {

// splitmix64 chain over `path`; independent streams per trial.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path);

// Runs job(0..count-1) on at most `threads` workers (0: hardware
// concurrency). The first exception is rethrown after all workers stop.
void parallel_for(int count, int threads, const std::function<void(int)>& job);

// Builds the configured graph (generator or edge-list file).
Graph make_graph(const GraphSource& source, std::uint64_t seed);

// Explicit ids (validated) or k distinct random nodes. Not for rotate-all.
std::vector<NodeId> pick_attackers(const AttackerSpec& spec, const Graph& g, std::uint64_t seed);

// Hop distance from the nearest attacker; kUnreachable if none.
std::vector<int> distance_to_set(const Graph& g, const std::vector<NodeId>& sources);

// Largest finite hop distance (diameter of the widest component).
int finite_diameter(const Graph& g);

// `iterations` if positive; kHorizonAuto gives finite_diameter + 2;
// kHorizonSaturate is passed through.
int resolve_horizon(const Graph& g, int iterations);

// As resolve_horizon, rejecting kHorizonSaturate.
int dgd_horizon(const Graph& g, int iterations);

// Smooth random field (a few low-frequency cosine modes) rescaled to [0, 1],
// row-major side x side.
Eigen::VectorXd smooth_image(int side, std::mt19937_64& rng);

// Shared initial model plus one private datum per node.
struct LogisticSetup {
  LogisticModel model;
  Eigen::VectorXd theta0;
};

// Pretrains softmax regression by full-batch gradient descent on a public
// synthetic set, then draws the nodes' private images and labels.
LogisticSetup make_logistic_setup(int num_nodes, int classes, int side, int public_samples, int epochs, double rate,
                                  std::uint64_t seed);

// First t in [0, 200] with ||theta^{t+1} - theta^t|| < 1e-6, else 200.
int detect_convergence(const DgdTrace& trace, double tol = 1e-6, int cap = 200);

ResultRecord run_avg_audit(const ExperimentConfig& cfg);
ResultRecord run_avg_attack(const ExperimentConfig& cfg);
ResultRecord run_dgd_attack(const ExperimentConfig& cfg);
ResultRecord run_er_sweep(const ExperimentConfig& cfg);
ResultRecord run_centrality(const ExperimentConfig& cfg);
ResultRecord run_relationship(const ExperimentConfig& cfg);
ResultRecord run_lr_sweep(const ExperimentConfig& cfg);
ResultRecord run_geometric_saturation(const ExperimentConfig& cfg);
ResultRecord run_dgd_line(const ExperimentConfig& cfg);
ResultRecord run_florentine(const ExperimentConfig& cfg);

// Dispatches on cfg.kind and stamps hash, seed and wall-clock.
ResultRecord run_experiment(const ExperimentConfig& cfg);

}  // namespace gossipleak
