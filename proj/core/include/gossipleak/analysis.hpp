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
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "gossipleak/gossip_matrix.hpp"
#include "gossipleak/graph.hpp"

namespace gossipleak {

struct CentralityProfile {
  std::vector<double> degree;       // deg / (n - 1)
  std::vector<double> eigenvector;  // nonnegative, unit 2-norm
  std::vector<double> betweenness;  // normalized by (n - 1)(n - 2) / 2
  // Set when the graph is disconnected: the eigenvector is computed on the
  // largest component and is zero elsewhere.
  bool eigenvector_on_largest_component = false;
};

CentralityProfile centralities(const Graph& g);

// Leading adjacency eigenvector by power iteration on A + I (the shift keeps
// bipartite graphs from oscillating without changing eigenvectors).
std::vector<double> eigenvector_centrality(const Graph& g, double tol = 1e-10, int max_iterations = 10000,
                                           bool* on_largest_component = nullptr);

// Brandes accumulation, normalized to [0, 1].
std::vector<double> betweenness_centrality(const Graph& g);

// Pearson correlation of mid-ranks. nullopt when either input is constant.
// Throws InvalidArgument for unequal lengths or fewer than 3 values.
std::optional<double> spearman(const std::vector<double>& xs, const std::vector<double>& ys);

// Kendall tau-b by exhaustive pair comparison. nullopt when either input
// is constant. Needs at least 2 values.
std::optional<double> kendall(const std::vector<double>& xs, const std::vector<double>& ys);

// Average ranks (1-based) with ties sharing the mean of their positions.
std::vector<double> mid_ranks(const std::vector<double>& values);

inline constexpr int kUnreachable = std::numeric_limits<int>::max();

// BFS hop counts from `source`; kUnreachable for other components.
std::vector<int> shortest_path_lengths(const Graph& g, NodeId source);

// exp(A) by scaling and squaring around a Taylor core. Throws
// InvalidArgument above `max_nodes`.
Eigen::MatrixXd communicability(const Graph& g, int max_nodes = 2000);
Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& a, double tol = 1e-16);

// One (graph, attacker) pair of a leakage study.
struct LeakageSample {
  std::shared_ptr<const Graph> graph;
  NodeId attacker = 0;
};

// Exact audit outcome for one sample.
struct LeakageObservation {
  double fraction = 0.0;  // over non-attacker nodes
  std::vector<bool> reconstructed;
  int iterations = 0;
};

// iterations < 0 audits to saturation.
std::vector<LeakageObservation> audit_samples(const std::vector<LeakageSample>& samples, int iterations,
                                              WeightScheme scheme = WeightScheme::kMetropolisHastings);

struct CentralityCorrelation {
  std::optional<double> degree;
  std::optional<double> eigenvector;
  std::optional<double> betweenness;
};

// Spearman between the attacker's centralities and the reconstructed
// fraction, across samples.
CentralityCorrelation correlate_centrality_vs_leakage(const std::vector<LeakageSample>& samples,
                                                      const std::vector<LeakageObservation>& observations);
CentralityCorrelation correlate_centrality_vs_leakage(const std::vector<LeakageSample>& samples, int iterations,
                                                      WeightScheme scheme = WeightScheme::kMetropolisHastings);

// Same, from precomputed scores (rows: samples).
struct AttackerScores {
  double degree = 0.0;
  double eigenvector = 0.0;
  double betweenness = 0.0;
};
CentralityCorrelation correlate_scores(const std::vector<AttackerScores>& scores,
                                       const std::vector<double>& fractions);

// Kendall tau-b, per sample, between a pairwise relation (attacker, target)
// and the target's reconstruction indicator; summarized as mean and
// standard deviation over samples whose tau is defined.
struct RelationshipSummary {
  double mean = std::numeric_limits<double>::quiet_NaN();
  double stddev = std::numeric_limits<double>::quiet_NaN();
  int samples_used = 0;
};

struct RelationshipCorrelation {
  RelationshipSummary shortest_path;
  RelationshipSummary communicability;
};

RelationshipCorrelation correlate_relationships(const std::vector<LeakageSample>& samples,
                                                const std::vector<LeakageObservation>& observations);

}  // namespace gossipleak
