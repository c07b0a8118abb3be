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
#include <string>
#include <vector>

#include "gossipleak/graph.hpp"
#include "gossipleak/rational.hpp"

namespace gossipleak {

enum class WeightScheme {
  // W[u][v] = 1 / (1 + max(deg u, deg v)) on edges, diagonal absorbs the rest.
  kMetropolisHastings,
  // W = I - Laplacian / (max degree + 1).
  kMaxDegree,
  // Arbitrary user supplied doubly stochastic matrix.
  kCustom,
};

std::string to_string(WeightScheme scheme);
WeightScheme weight_scheme_from_string(const std::string& name);

// Symmetric doubly stochastic mixing matrix supported on a graph.
//
// Both a double and an exact rational copy are kept. For the built-in schemes
// the rational copy holds the true fractions (1/3, 2/3, ...); for custom
// matrices it is the exact dyadic value of each double.
class GossipMatrix {
 public:
  GossipMatrix(Graph graph, WeightScheme scheme);
  // Validates that `weights` is symmetric, doubly stochastic within 1e-12
  // and supported on the edges of `graph` (plus the diagonal).
  static GossipMatrix from_dense(Graph graph, const Eigen::MatrixXd& weights);

  const Graph& graph() const { return graph_; }
  WeightScheme scheme() const { return scheme_; }
  int size() const { return graph_.num_nodes(); }
  const Eigen::MatrixXd& weights() const { return weights_; }
  const RationalMatrix& exact_weights() const { return exact_; }
  double operator()(NodeId u, NodeId v) const { return weights_(u, v); }

  // row * W using the sparsity of the graph.
  std::vector<Rational> times(const std::vector<Rational>& row) const;
  Eigen::RowVectorXd times(const Eigen::RowVectorXd& row) const;

 private:
  GossipMatrix(Graph graph, WeightScheme scheme, Eigen::MatrixXd weights, RationalMatrix exact);

  Graph graph_;
  WeightScheme scheme_;
  Eigen::MatrixXd weights_;
  RationalMatrix exact_;
};

inline GossipMatrix build_gossip_matrix(const Graph& g,
                                        WeightScheme scheme = WeightScheme::kMetropolisHastings) {
  return GossipMatrix(g, scheme);
}

// max over rows and columns of |sum - 1|.
double stochasticity_error(const Eigen::MatrixXd& w);

// Honest-but-curious coalition. Attackers are kept sorted; neighbors are
// N(A) = (union of attacker neighborhoods) minus A, sorted ascending.
class AttackerSet {
 public:
  AttackerSet(const Graph& g, std::vector<NodeId> attackers);

  const std::vector<NodeId>& attackers() const { return attackers_; }
  const std::vector<NodeId>& neighbors() const { return neighbors_; }
  const std::vector<NodeId>& targets() const { return targets_; }
  bool contains(NodeId v) const { return is_attacker_[v]; }
  int num_nodes() const { return static_cast<int>(is_attacker_.size()); }
  int size() const { return static_cast<int>(attackers_.size()); }

 private:
  std::vector<NodeId> attackers_;
  std::vector<NodeId> neighbors_;
  std::vector<NodeId> targets_;
  std::vector<bool> is_attacker_;
};

// W rewritten with attackers first:
//
//   | W_AA  W_AT |
//   | W_TA  W_TT |
//
// Targets keep their relative (ascending id) order. `order[pos]` is the
// original id at canonical position pos and `position[id]` its inverse.
struct BlockPartition {
  std::vector<NodeId> order;
  std::vector<int> position;
  int num_attackers = 0;
  Eigen::MatrixXd aa, at, ta, tt;
  RationalMatrix exact_ta, exact_tt;

  int num_targets() const { return static_cast<int>(order.size()) - num_attackers; }
  // Index of target node v inside the T block.
  int target_index(NodeId v) const { return position[v] - num_attackers; }
  NodeId target_node(int index) const { return order[num_attackers + index]; }
  // Undoes the relabeling; reproduces W exactly.
  Eigen::MatrixXd reassemble() const;
};

BlockPartition partition_blocks(const GossipMatrix& w, const AttackerSet& attackers);

}  // namespace gossipleak
