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

#include "gossipleak/gossip_matrix.hpp"

#include <algorithm>
#include <cmath>

#include "gossipleak/errors.hpp"

namespace gossipleak {

std::string to_string(WeightScheme scheme) {
  switch (scheme) {
    case WeightScheme::kMetropolisHastings: return "metropolis";
    case WeightScheme::kMaxDegree: return "max-degree";
    case WeightScheme::kCustom: return "custom";
  }
  return "unknown";
}

WeightScheme weight_scheme_from_string(const std::string& name) {
  if (name == "metropolis" || name == "metropolis-hastings") return WeightScheme::kMetropolisHastings;
  if (name == "max-degree" || name == "hamilton") return WeightScheme::kMaxDegree;
  throw ConfigError("unknown weight scheme '" + name + "'");
}

namespace {

RationalMatrix exact_scheme_weights(const Graph& g, WeightScheme scheme) {
  const int n = g.num_nodes();
  RationalMatrix w(n, n);
  const int dmax = g.max_degree();
  for (NodeId u = 0; u < n; ++u) {
    Rational off_total = 0;
    for (NodeId v : g.neighbors(u)) {
      Rational weight;
      if (scheme == WeightScheme::kMetropolisHastings) {
        weight = Rational(1, 1 + std::max(g.degree(u), g.degree(v)));
      } else {
        weight = Rational(1, dmax + 1);
      }
      w(u, v) = weight;
      off_total += weight;
    }
    w(u, u) = 1 - off_total;
  }
  return w;
}

}  // namespace

GossipMatrix::GossipMatrix(Graph graph, WeightScheme scheme, Eigen::MatrixXd weights,
                           RationalMatrix exact)
    : graph_(std::move(graph)), scheme_(scheme), weights_(std::move(weights)), exact_(std::move(exact)) {}

GossipMatrix::GossipMatrix(Graph graph, WeightScheme scheme) : graph_(std::move(graph)), scheme_(scheme) {
  if (scheme == WeightScheme::kCustom) {
    throw InvalidArgument("custom gossip matrices are built with GossipMatrix::from_dense");
  }
  exact_ = exact_scheme_weights(graph_, scheme);
  const int n = graph_.num_nodes();
  weights_ = Eigen::MatrixXd::Zero(n, n);
  for (NodeId u = 0; u < n; ++u) {
    double off_total = 0.0;
    for (NodeId v : graph_.neighbors(u)) {
      weights_(u, v) = exact_(u, v).get_d();
      off_total += weights_(u, v);
    }
    weights_(u, u) = 1.0 - off_total;
  }
}

GossipMatrix GossipMatrix::from_dense(Graph graph, const Eigen::MatrixXd& weights) {
  const int n = graph.num_nodes();
  if (weights.rows() != n || weights.cols() != n) {
    throw InvalidArgument("gossip matrix: shape does not match graph");
  }
  if ((weights - weights.transpose()).cwiseAbs().maxCoeff() > 0.0) {
    throw InvalidArgument("gossip matrix: not symmetric");
  }
  if (stochasticity_error(weights) > 1e-12) {
    throw InvalidArgument("gossip matrix: not doubly stochastic");
  }
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = 0; v < n; ++v) {
      if (u == v) continue;
      const bool edge = graph.has_edge(u, v);
      if (edge != (weights(u, v) > 0.0) || weights(u, v) < 0.0) {
        throw InvalidArgument("gossip matrix: support does not match the graph at (" +
                              std::to_string(u) + ", " + std::to_string(v) + ")");
      }
    }
    if (weights(u, u) < 0.0) throw InvalidArgument("gossip matrix: negative diagonal");
  }
  return GossipMatrix(std::move(graph), WeightScheme::kCustom, weights,
                      RationalMatrix::from_double(weights));
}

std::vector<Rational> GossipMatrix::times(const std::vector<Rational>& row) const {
  const int n = size();
  std::vector<Rational> out(n);
  for (NodeId u = 0; u < n; ++u) {
    if (sgn(row[u]) == 0) continue;
    out[u] += row[u] * exact_(u, u);
    for (NodeId v : graph_.neighbors(u)) out[v] += row[u] * exact_(u, v);
  }
  return out;
}

Eigen::RowVectorXd GossipMatrix::times(const Eigen::RowVectorXd& row) const {
  const int n = size();
  Eigen::RowVectorXd out = Eigen::RowVectorXd::Zero(n);
  for (NodeId u = 0; u < n; ++u) {
    if (row[u] == 0.0) continue;
    out[u] += row[u] * weights_(u, u);
    for (NodeId v : graph_.neighbors(u)) out[v] += row[u] * weights_(u, v);
  }
  return out;
}

double stochasticity_error(const Eigen::MatrixXd& w) {
  if (w.size() == 0) return 0.0;
  const double rows = (w.rowwise().sum().array() - 1.0).abs().maxCoeff();
  const double cols = (w.colwise().sum().array() - 1.0).abs().maxCoeff();
  return std::max(rows, cols);
}

AttackerSet::AttackerSet(const Graph& g, std::vector<NodeId> attackers)
    : attackers_(std::move(attackers)), is_attacker_(g.num_nodes(), false) {
  std::sort(attackers_.begin(), attackers_.end());
  for (std::size_t i = 0; i < attackers_.size(); ++i) {
    NodeId a = attackers_[i];
    if (a < 0 || a >= g.num_nodes()) {
      throw InvalidArgument("attacker id " + std::to_string(a) + " out of range");
    }
    if (i > 0 && attackers_[i - 1] == a) {
      throw InvalidArgument("attacker id " + std::to_string(a) + " listed twice");
    }
    is_attacker_[a] = true;
  }
  std::vector<bool> seen(g.num_nodes(), false);
  for (NodeId a : attackers_) {
    for (NodeId v : g.neighbors(a)) {
      if (!is_attacker_[v] && !seen[v]) {
        seen[v] = true;
        neighbors_.push_back(v);
      }
    }
  }
  std::sort(neighbors_.begin(), neighbors_.end());
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    if (!is_attacker_[v]) targets_.push_back(v);
  }
}

BlockPartition partition_blocks(const GossipMatrix& w, const AttackerSet& attackers) {
  const int n = w.size();
  if (attackers.num_nodes() != n) {
    throw InvalidArgument("partition_blocks: attacker set built for a different graph");
  }
  BlockPartition p;
  p.num_attackers = attackers.size();
  p.order = attackers.attackers();
  p.order.insert(p.order.end(), attackers.targets().begin(), attackers.targets().end());
  p.position.assign(n, 0);
  for (int pos = 0; pos < n; ++pos) p.position[p.order[pos]] = pos;

  const int na = p.num_attackers;
  const int nt = n - na;
  Eigen::MatrixXd permuted(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) permuted(r, c) = w.weights()(p.order[r], p.order[c]);
  p.aa = permuted.topLeftCorner(na, na);
  p.at = permuted.topRightCorner(na, nt);
  p.ta = permuted.bottomLeftCorner(nt, na);
  p.tt = permuted.bottomRightCorner(nt, nt);

  const RationalMatrix& exact = w.exact_weights();
  p.exact_ta = RationalMatrix(nt, na);
  p.exact_tt = RationalMatrix(nt, nt);
  for (int r = 0; r < nt; ++r) {
    for (int c = 0; c < na; ++c) p.exact_ta(r, c) = exact(p.order[na + r], p.order[c]);
    for (int c = 0; c < nt; ++c) p.exact_tt(r, c) = exact(p.order[na + r], p.order[na + c]);
  }
  return p;
}

Eigen::MatrixXd BlockPartition::reassemble() const {
  const int n = static_cast<int>(order.size());
  const int na = num_attackers;
  Eigen::MatrixXd permuted(n, n);
  permuted.topLeftCorner(na, na) = aa;
  permuted.topRightCorner(na, n - na) = at;
  permuted.bottomLeftCorner(n - na, na) = ta;
  permuted.bottomRightCorner(n - na, n - na) = tt;
  Eigen::MatrixXd out(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) out(order[r], order[c]) = permuted(r, c);
  return out;
}

}  // namespace gossipleak
