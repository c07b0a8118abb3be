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
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gossipleak {

using NodeId = int;

// Simple undirected graph on nodes 0..n-1. Immutable after construction.
//
// Edges are stored canonically as (u, v) with u < v, sorted, without
// duplicates or self-loops. Adjacency lists are sorted ascending.
class Graph {
 public:
  Graph() = default;

  // Builds a graph from an arbitrary edge list. Self-loops are dropped and
  // duplicates merged; out-of-range ids throw InvalidArgument.
  Graph(int n, const std::vector<std::pair<NodeId, NodeId>>& edges,
        std::vector<std::string> labels = {});

  int num_nodes() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<std::pair<NodeId, NodeId>>& edges() const { return edges_; }
  const std::vector<NodeId>& neighbors(NodeId v) const { return adjacency_[v]; }
  int degree(NodeId v) const { return static_cast<int>(adjacency_[v].size()); }
  int max_degree() const;
  bool has_edge(NodeId u, NodeId v) const;

  // Empty when the graph was built without names.
  const std::vector<std::string>& labels() const { return labels_; }
  std::string label(NodeId v) const;

  bool is_connected() const;
  // Component id per node; components are numbered in order of their
  // smallest node.
  std::vector<int> components() const;
  // Longest shortest path; -1 for a disconnected graph.
  int diameter() const;

 private:
  int n_ = 0;
  std::vector<std::pair<NodeId, NodeId>> edges_;
  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<std::string> labels_;
};

// Each pair is an edge independently with probability p. With
// require_connected, disconnected draws are rejected and redrawn up to
// kConnectedResampleBudget times before failing.
inline constexpr int kConnectedResampleBudget = 1000;
Graph gen_erdos_renyi(int n, double p, std::uint64_t seed,
                      bool require_connected = false);

Graph gen_line(int n);

// Points drawn uniformly in the unit square; edge iff distance <= radius.
// The drawn positions are returned through `positions` when non-null.
Graph gen_random_geometric(int n, double radius, std::uint64_t seed,
                           std::vector<std::pair<double, double>>* positions = nullptr);

// Padgett's Florentine marriage network, 15 families (the isolated Pucci
// family is not included).
Graph gen_florentine();

Graph gen_complete(int n);
// Star with center 0 and leaves 1..n-1.
Graph gen_star(int n);

// A graph loaded from a whitespace separated edge list. `original_ids[i]` is
// the id that node i carried in the file.
struct LoadedGraph {
  Graph graph;
  std::vector<std::int64_t> original_ids;
};

// Reads "u v" pairs, one per line; '#' starts a comment. Ids are relabeled
// densely in order of first appearance.
LoadedGraph load_edge_list(const std::filesystem::path& path);
LoadedGraph parse_edge_list(const std::string& text);

// DOT export. `colors` is either empty or has one entry per node.
std::string to_dot(const Graph& g, const std::vector<std::string>& colors = {},
                   const std::vector<std::string>& extra_attributes = {});

}  // namespace gossipleak
