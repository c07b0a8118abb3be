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
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace gossipleak {

using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  bool operator==(const Table&) const = default;
};

// Plain-data graph snapshot with per-node styling, exported as DOT.
struct GraphView {
  std::string name;
  int num_nodes = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::string> labels;
  std::vector<std::string> colors;
  std::vector<int> highlighted;  // drawn with a thick border

  bool operator==(const GraphView&) const = default;
};

struct ResultRecord {
  std::string experiment;
  std::string config_hash;
  std::uint64_t seed = 0;
  double wall_clock_seconds = 0.0;  // JSON only; CSV output stays replayable
  std::vector<Table> tables;
  std::vector<GraphView> views;

  bool operator==(const ResultRecord&) const = default;

  const Table& table(const std::string& table_name) const;
  Table& table(const std::string& table_name);
};

}  // namespace gossipleak
