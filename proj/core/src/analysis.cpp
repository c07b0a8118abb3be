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

#include "gossipleak/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <stack>

#include "gossipleak/attack_avg.hpp"
#include "gossipleak/errors.hpp"

namespace gossipleak {

std::vector<double> eigenvector_centrality(const Graph& g, double tol, int max_iterations,
                                           bool* on_largest_component) {
  const int n = g.num_nodes();
  std::vector<double> out(n, 0.0);
  if (n == 0) return out;

  std::vector<int> comp = g.components();
  const int num_comp = *std::max_element(comp.begin(), comp.end()) + 1;
  std::vector<int> sizes(num_comp, 0);
  for (int c : comp) ++sizes[c];
  const int largest = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  if (on_largest_component != nullptr) *on_largest_component = num_comp > 1;

  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  for (int u = 0; u < n; ++u) {
    if (comp[u] == largest) v[u] = 1.0;
  }
  v.normalize();
  for (int it = 0; it < max_iterations; ++it) {
    Eigen::VectorXd next = v;  // the +I shift
    for (int u = 0; u < n; ++u)
      for (NodeId w : g.neighbors(u)) next[u] += v[w];
    next.normalize();
    const double change = (next - v).cwiseAbs().maxCoeff();
    v = std::move(next);
    if (change < tol) break;
  }
  for (int u = 0; u < n; ++u) out[u] = std::max(0.0, v[u]);
  return out;
}

std::vector<double> betweenness_centrality(const Graph& g) {
  const int n = g.num_nodes();
  std::vector<double> cb(n, 0.0);
  std::vector<std::vector<NodeId>> preds(n);
  std::vector<double> sigma(n), delta(n);
  std::vector<int> dist(n);
  for (NodeId s = 0; s < n; ++s) {
    std::stack<NodeId> order;
    for (auto& p : preds) p.clear();
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(dist.begin(), dist.end(), -1);
    sigma[s] = 1.0;
    dist[s] = 0;
    std::queue<NodeId> frontier;
    frontier.push(s);
    while (!frontier.empty()) {
      NodeId v = frontier.front();
      frontier.pop();
      order.push(v);
      for (NodeId w : g.neighbors(v)) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          frontier.push(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
          preds[w].push_back(v);
        }
      }
    }
    std::fill(delta.begin(), delta.end(), 0.0);
    while (!order.empty()) {
      NodeId w = order.top();
      order.pop();
      for (NodeId v : preds[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      if (w != s) cb[w] += delta[w];
    }
  }
  // Each unordered pair was counted from both endpoints.
  const double pairs = n >= 3 ? static_cast<double>(n - 1) * (n - 2) : 0.0;
  for (double& value : cb) value = pairs > 0.0 ? value / pairs : 0.0;
  return cb;
}

CentralityProfile centralities(const Graph& g) {
  const int n = g.num_nodes();
  CentralityProfile profile;
  profile.degree.resize(n);
  for (int v = 0; v < n; ++v) profile.degree[v] = n > 1 ? static_cast<double>(g.degree(v)) / (n - 1) : 0.0;
  profile.eigenvector = eigenvector_centrality(g, 1e-10, 10000, &profile.eigenvector_on_largest_component);
  profile.betweenness = betweenness_centrality(g);
  return profile;
}

std::vector<double> mid_ranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[idx[j + 1]] == values[idx[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

std::optional<double> spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw InvalidArgument("spearman: length mismatch");
  if (xs.size() < 3) throw InvalidArgument("spearman: need at least 3 values");
  const std::vector<double> rx = mid_ranks(xs);
  const std::vector<double> ry = mid_ranks(ys);
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::optional<double> kendall(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw InvalidArgument("kendall: length mismatch");
  if (xs.size() < 2) throw InvalidArgument("kendall: need at least 2 values");
  const std::size_t n = xs.size();
  double concordant = 0.0, discordant = 0.0, ties_x = 0.0, ties_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = xs[i] - xs[j];
      const double dy = ys[i] - ys[j];
      if (dx == 0.0) ties_x += 1.0;
      if (dy == 0.0) ties_y += 1.0;
      if (dx * dy > 0.0) concordant += 1.0;
      if (dx * dy < 0.0) discordant += 1.0;
    }
  }
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  const double denom = std::sqrt((pairs - ties_x) * (pairs - ties_y));
  if (denom == 0.0) return std::nullopt;
  return std::clamp((concordant - discordant) / denom, -1.0, 1.0);
}

std::vector<int> shortest_path_lengths(const Graph& g, NodeId source) {
  if (source < 0 || source >= g.num_nodes()) throw InvalidArgument("shortest_path_lengths: bad source");
  std::vector<int> dist(g.num_nodes(), kUnreachable);
  std::queue<NodeId> frontier;
  dist[source] = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    NodeId u = frontier.front();
    frontier.pop();
    for (NodeId v : g.neighbors(u)) {
      if (dist[v] == kUnreachable) {
        dist[v] = dist[u] + 1;
        frontier.push(v);
      }
    }
  }
  return dist;
}

Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& a, double tol) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw InvalidArgument("matrix_exponential: matrix must be square");
  if (n == 0) return a;
  const double norm = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Eigen::MatrixXd scaled = a / std::ldexp(1.0, squarings);

  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  for (int k = 1; k < 60; ++k) {
    term = term * scaled / static_cast<double>(k);
    result += term;
    if (term.cwiseAbs().maxCoeff() <= tol * result.cwiseAbs().maxCoeff()) break;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

Eigen::MatrixXd communicability(const Graph& g, int max_nodes) {
  const int n = g.num_nodes();
  if (n > max_nodes) throw InvalidArgument("communicability: graph exceeds the dense size cap");
  Eigen::MatrixXd adjacency = Eigen::MatrixXd::Zero(n, n);
  for (auto [u, v] : g.edges()) {
    adjacency(u, v) = 1.0;
    adjacency(v, u) = 1.0;
  }
  Eigen::MatrixXd c = matrix_exponential(adjacency);
  return (c + c.transpose()) / 2.0;
}

std::vector<LeakageObservation> audit_samples(const std::vector<LeakageSample>& samples, int iterations,
                                              WeightScheme scheme) {
  std::vector<LeakageObservation> out;
  out.reserve(samples.size());
  const Graph* cached_graph = nullptr;
  std::unique_ptr<GossipMatrix> cached_w;
  for (const LeakageSample& s : samples) {
    if (s.graph.get() != cached_graph) {
      cached_w = std::make_unique<GossipMatrix>(*s.graph, scheme);
      cached_graph = s.graph.get();
    }
    AttackerSet attackers(*s.graph, {s.attacker});
    AuditResult audit = iterations < 0 ? audit_saturated(*cached_w, attackers)
                                       : audit_static(*cached_w, attackers, iterations, NumericMode::kExact);
    LeakageObservation obs;
    obs.fraction = reconstructed_fraction(audit.reconstructible, attackers);
    obs.reconstructed.assign(s.graph->num_nodes(), false);
    for (NodeId v : audit.reconstructible) obs.reconstructed[v] = true;
    obs.iterations = audit.iterations;
    out.push_back(std::move(obs));
  }
  return out;
}

CentralityCorrelation correlate_scores(const std::vector<AttackerScores>& scores,
                                       const std::vector<double>& fractions) {
  if (scores.size() != fractions.size()) throw InvalidArgument("correlate_scores: length mismatch");
  std::vector<double> degree, eigen, between;
  for (const auto& s : scores) {
    degree.push_back(s.degree);
    eigen.push_back(s.eigenvector);
    between.push_back(s.betweenness);
  }
  return {spearman(degree, fractions), spearman(eigen, fractions), spearman(between, fractions)};
}

CentralityCorrelation correlate_centrality_vs_leakage(const std::vector<LeakageSample>& samples,
                                                      const std::vector<LeakageObservation>& observations) {
  if (samples.size() != observations.size()) {
    throw InvalidArgument("correlate_centrality_vs_leakage: samples and observations differ in length");
  }
  std::vector<AttackerScores> scores;
  std::vector<double> fractions;
  const Graph* cached_graph = nullptr;
  CentralityProfile profile;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].graph.get() != cached_graph) {
      profile = centralities(*samples[i].graph);
      cached_graph = samples[i].graph.get();
    }
    const NodeId a = samples[i].attacker;
    scores.push_back({profile.degree[a], profile.eigenvector[a], profile.betweenness[a]});
    fractions.push_back(observations[i].fraction);
  }
  return correlate_scores(scores, fractions);
}

CentralityCorrelation correlate_centrality_vs_leakage(const std::vector<LeakageSample>& samples, int iterations,
                                                      WeightScheme scheme) {
  return correlate_centrality_vs_leakage(samples, audit_samples(samples, iterations, scheme));
}

namespace {

RelationshipSummary summarize(const std::vector<double>& values) {
  RelationshipSummary s;
  s.samples_used = static_cast<int>(values.size());
  if (values.empty()) return s;
  const double n = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.stddev = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  return s;
}

}  // namespace

RelationshipCorrelation correlate_relationships(const std::vector<LeakageSample>& samples,
                                                const std::vector<LeakageObservation>& observations) {
  if (samples.size() != observations.size()) {
    throw InvalidArgument("correlate_relationships: samples and observations differ in length");
  }
  std::vector<double> path_taus, comm_taus;
  const Graph* cached_graph = nullptr;
  Eigen::MatrixXd comm;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Graph& g = *samples[i].graph;
    if (&g != cached_graph) {
      comm = communicability(g);
      cached_graph = &g;
    }
    const NodeId a = samples[i].attacker;
    std::vector<int> dist = shortest_path_lengths(g, a);
    std::vector<double> hops, comms, hit;
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      if (v == a) continue;
      hops.push_back(dist[v] == kUnreachable ? std::numeric_limits<double>::infinity()
                                             : static_cast<double>(dist[v]));
      comms.push_back(comm(a, v));
      hit.push_back(observations[i].reconstructed[v] ? 1.0 : 0.0);
    }
    if (hit.size() < 2) continue;
    if (auto tau = kendall(hops, hit)) path_taus.push_back(*tau);
    if (auto tau = kendall(comms, hit)) comm_taus.push_back(*tau);
  }
  return {summarize(path_taus), summarize(comm_taus)};
}

}  // namespace gossipleak
