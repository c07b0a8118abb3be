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
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "gossipleak/graph.hpp"
#include "gossipleak/record.hpp"

namespace gossipleak {

enum class ExportFormat { kCsv, kJson, kDot };

ExportFormat export_format_from_string(const std::string& name);  // throws ConfigError

// Figure colors, shared by every exporter.
inline constexpr const char* kAttackerColor = "red";
inline constexpr const char* kReconstructedColor = "purple";
inline constexpr const char* kNotReconstructedColor = "yellow";
inline constexpr const char* kNeighborColor = "orange";

// Per-node fill colors for a reconstruction map.
std::vector<std::string> reconstruction_colors(int num_nodes, const std::vector<NodeId>& attackers,
                                               const std::vector<NodeId>& reconstructed);

// Hex color on a yellow (0) to purple (1) ramp.
std::string ramp_color(double value);

GraphView make_view(const std::string& name, const Graph& g, std::vector<std::string> colors,
                    std::vector<int> highlighted = {});

std::string format_cell(const Cell& cell);
void write_csv(std::ostream& out, const Table& table);
std::string to_csv(const Table& table);

std::string view_to_dot(const GraphView& view);

std::string record_to_json(const ResultRecord& record);
ResultRecord record_from_json(const std::string& text);  // throws ParseError

// Writes the record under `dir` (created if needed) and returns the paths:
// csv  -> <experiment>_<table>.csv per table,
// json -> <experiment>.json,
// dot  -> <experiment>_<view>.dot per view.
// Throws Error when a file cannot be written.
std::vector<std::filesystem::path> export_record(const ResultRecord& record, ExportFormat format,
                                                 const std::filesystem::path& dir);

// Binary PGM (P5) of a row-major image with values in [0, 1].
void write_pgm(std::ostream& out, const Eigen::VectorXd& pixels, int width, int height);
void write_pgm(const std::filesystem::path& path, const Eigen::VectorXd& pixels, int width, int height);

// One row per input: node, then pixel values.
void write_inputs_csv(std::ostream& out, const std::vector<NodeId>& nodes, const std::vector<Eigen::VectorXd>& inputs);

// Columnar gradient-estimate dump: node, coordinate, estimate, truth, abs_error.
// `truth` may be empty, leaving the last two columns blank.
void write_gradient_estimates(std::ostream& out, const std::vector<NodeId>& nodes, const Eigen::MatrixXd& estimates,
                              const Eigen::MatrixXd& truth = {});

// Reads the inputs CSV back (raw-vector ingester for real data).
std::vector<Eigen::VectorXd> read_inputs_csv(std::istream& in, std::vector<NodeId>* nodes = nullptr);

}  // namespace gossipleak
