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

#include "gossipleak/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <random>
#include <sstream>
#include <unordered_map>

#include "gossipleak/errors.hpp"

namespace gossipleak {

Graph::Graph(int n, const std::vector<std::pair<NodeId, NodeId>>& edges,
             std::vector<std::string> labels)
    : n_(n), adjacency_(n > 0 ? n : 0), labels_(std::move(labels)) {
  if (n < 0) throw InvalidArgument("graph: negative node count");
  if (!labels_.empty() && static_cast<int>(labels_.size()) != n) {
    throw InvalidArgument("graph: label count does not match node count");
  }
  edges_.reserve(edges.size());
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) {
      throw InvalidArgument("graph: edge (" + std::to_string(u) + ", " +
                            std::to_string(v) + ") out of range");
    }
    if (u == v) continue;
    edges_.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  for (auto [u, v] : edges_) {
    adjacency_[u].push_back(v);
    adjacency_[v].push_back(u);
  }
  for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
}

int Graph::max_degree() const {
  int best = 0;
  for (const auto& adj : adjacency_) best = std::max(best, static_cast<int>(adj.size()));
  return best;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  if (u < 0 || v < 0 || u >= n_ || v >= n_) return false;
  const auto& adj = adjacency_[u];
  return std::binary_search(adj.begin(), adj.end(), v);
}

std::string Graph::label(NodeId v) const {
  if (labels_.empty()) return std::to_string(v);
  return labels_[v];
}

std::vector<int> Graph::components() const {
  std::vector<int> comp(n_, -1);
  int next = 0;
  for (NodeId s = 0; s < n_; ++s) {
    if (comp[s] >= 0) continue;
    std::queue<NodeId> frontier;
    frontier.push(s);
    comp[s] = next;
    while (!frontier.empty()) {
      NodeId u = frontier.front();
      frontier.pop();
      for (NodeId v : adjacency_[u]) {
        if (comp[v] < 0) {
          comp[v] = next;
          frontier.push(v);
        }
      }
    }
    ++next;
  }
  return comp;
}

bool Graph::is_connected() const {
  if (n_ <= 1) return true;
  auto comp = components();
  return std::all_of(comp.begin(), comp.end(), [](int c) { return c == 0; });
}

int Graph::diameter() const {
  if (!is_connected()) return -1;
  int best = 0;
  std::vector<int> dist(n_);
  for (NodeId s = 0; s < n_; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    std::queue<NodeId> frontier;
    frontier.push(s);
    dist[s] = 0;
    while (!frontier.empty()) {
      NodeId u = frontier.front();
      frontier.pop();
      best = std::max(best, dist[u]);
      for (NodeId v : adjacency_[u]) {
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          frontier.push(v);
        }
      }
    }
  }
  return best;
}

Graph gen_erdos_renyi(int n, double p, std::uint64_t seed, bool require_connected) {
  if (n < 1) throw InvalidArgument("gen_erdos_renyi: n must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("gen_erdos_renyi: p must lie in [0, 1]");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  const int attempts = require_connected ? kConnectedResampleBudget : 1;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = u + 1; v < n; ++v) {
        if (coin(rng)) edges.emplace_back(u, v);
      }
    }
    Graph g(n, edges);
    if (!require_connected || g.is_connected()) return g;
  }
  throw Error("could not draw connected graph after " +
              std::to_string(kConnectedResampleBudget) + " attempts");
}

Graph gen_line(int n) {
  if (n < 2) throw InvalidArgument("gen_line: n must be >= 2");
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return Graph(n, edges);
}

Graph gen_random_geometric(int n, double radius, std::uint64_t seed,
                           std::vector<std::pair<double, double>>* positions) {
  if (n < 1) throw InvalidArgument("gen_random_geometric: n must be >= 1");
  if (radius < 0.0) throw InvalidArgument("gen_random_geometric: radius must be >= 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::pair<double, double>> pts(n);
  for (auto& pt : pts) {
    pt.first = unit(rng);
    pt.second = unit(rng);
  }
  std::vector<std::pair<NodeId, NodeId>> edges;
  const double r2 = radius * radius;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      const double dx = pts[u].first - pts[v].first;
      const double dy = pts[u].second - pts[v].second;
      if (radius > 0.0 && dx * dx + dy * dy <= r2) edges.emplace_back(u, v);
    }
  }
  if (positions != nullptr) *positions = std::move(pts);
  return Graph(n, edges);
}

Graph gen_florentine() {
  static const std::vector<std::string> kFamilies = {
      "Acciaiuoli", "Medici",   "Castellani", "Peruzzi",  "Strozzi",
      "Barbadori",  "Ridolfi",  "Tornabuoni", "Albizzi",  "Salviati",
      "Pazzi",      "Bischeri", "Guadagni",   "Ginori",   "Lamberteschi"};
  static const std::vector<std::pair<NodeId, NodeId>> kMarriages = {
      {0, 1},  {1, 5},  {1, 6},   {1, 7},   {1, 8},  {1, 9},   {2, 3},
      {2, 4},  {2, 5},  {3, 4},   {3, 11},  {4, 6},  {4, 11},  {6, 7},
      {7, 12}, {8, 13}, {8, 12},  {9, 10},  {11, 12}, {12, 14}};
  return Graph(static_cast<int>(kFamilies.size()), kMarriages, kFamilies);
}

Graph gen_complete(int n) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  return Graph(n, edges);
}

Graph gen_star(int n) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId v = 1; v < n; ++v) edges.emplace_back(0, v);
  return Graph(n, edges);
}

LoadedGraph parse_edge_list(const std::string& text) {
  std::istringstream in(text);
  std::unordered_map<std::int64_t, NodeId> dense;
  std::vector<std::int64_t> original;
  std::vector<std::pair<NodeId, NodeId>> edges;
  auto intern = [&](std::int64_t id) {
    auto [it, inserted] = dense.emplace(id, static_cast<NodeId>(original.size()));
    if (inserted) original.push_back(id);
    return it->second;
  };

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string a, b, extra;
    if (!(fields >> a)) continue;  // blank or comment-only
    if (!(fields >> b) || (fields >> extra)) {
      throw ParseError("expected exactly two node ids", line_no);
    }
    std::int64_t u = 0, v = 0;
    try {
      std::size_t pos_a = 0, pos_b = 0;
      u = std::stoll(a, &pos_a);
      v = std::stoll(b, &pos_b);
      if (pos_a != a.size() || pos_b != b.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError("node ids must be integers", line_no);
    }
    NodeId du = intern(u);
    NodeId dv = intern(v);
    edges.emplace_back(du, dv);
  }
  if (original.empty()) throw ParseError("edge list is empty", 0);
  return LoadedGraph{Graph(static_cast<int>(original.size()), edges), std::move(original)};
}

LoadedGraph load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open edge list " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_edge_list(buf.str());
}

std::string to_dot(const Graph& g, const std::vector<std::string>& colors,
                   const std::vector<std::string>& extra_attributes) {
  std::ostringstream out;
  out << "graph G {\n";
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    out << "  " << v << " [label=\"" << g.label(v) << "\"";
    if (!colors.empty()) out << ", style=filled, fillcolor=\"" << colors[v] << "\"";
    if (!extra_attributes.empty() && !extra_attributes[v].empty()) {
      out << ", " << extra_attributes[v];
    }
    out << "];\n";
  }
  for (auto [u, v] : g.edges()) out << "  " << u << " -- " << v << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace gossipleak
