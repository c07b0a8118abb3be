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

#include "gossipleak/export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "gossipleak/errors.hpp"

namespace gossipleak {

using nlohmann::json;

const Table& ResultRecord::table(const std::string& table_name) const {
  for (const Table& t : tables)
    if (t.name == table_name) return t;
  throw InvalidArgument("result record has no table '" + table_name + "'");
}

Table& ResultRecord::table(const std::string& table_name) {
  for (Table& t : tables)
    if (t.name == table_name) return t;
  throw InvalidArgument("result record has no table '" + table_name + "'");
}

ExportFormat export_format_from_string(const std::string& name) {
  if (name == "csv") return ExportFormat::kCsv;
  if (name == "json") return ExportFormat::kJson;
  if (name == "dot") return ExportFormat::kDot;
  throw ConfigError("unknown export format '" + name + "' (csv, json, dot)");
}

std::vector<std::string> reconstruction_colors(int num_nodes, const std::vector<NodeId>& attackers,
                                               const std::vector<NodeId>& reconstructed) {
  std::vector<std::string> colors(num_nodes, kNotReconstructedColor);
  for (NodeId v : reconstructed) colors.at(v) = kReconstructedColor;
  for (NodeId a : attackers) colors.at(a) = kAttackerColor;
  return colors;
}

std::string ramp_color(double value) {
  if (!std::isfinite(value)) value = 0.0;
  value = std::clamp(value, 0.0, 1.0);
  // yellow (#ffd700) to purple (#800080)
  auto mix = [value](int lo, int hi) { return static_cast<int>(std::lround(lo + (hi - lo) * value)); };
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", mix(0xff, 0x80), mix(0xd7, 0x00), mix(0x00, 0x80));
  return buf;
}

GraphView make_view(const std::string& name, const Graph& g, std::vector<std::string> colors,
                    std::vector<int> highlighted) {
  GraphView view;
  view.name = name;
  view.num_nodes = g.num_nodes();
  view.edges.assign(g.edges().begin(), g.edges().end());
  for (NodeId v = 0; v < g.num_nodes(); ++v) view.labels.push_back(g.label(v));
  view.colors = std::move(colors);
  view.highlighted = std::move(highlighted);
  return view;
}

std::string format_cell(const Cell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&cell)) {
    if (std::isnan(*d)) return "nan";
    if (std::isinf(*d)) return *d > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", *d);
    return buf;
  }
  const std::string& s = std::get<std::string>(cell);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

void write_csv(std::ostream& out, const Table& table) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_cell(row[i]);
    out << "\n";
  }
}

std::string to_csv(const Table& table) {
  std::ostringstream out;
  write_csv(out, table);
  return out.str();
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

json cell_to_json(const Cell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return *i;
  if (const auto* d = std::get_if<double>(&cell)) {
    if (std::isfinite(*d)) return *d;
    return json{{"nonfinite", std::isnan(*d) ? "nan" : (*d > 0 ? "inf" : "-inf")}};
  }
  return std::get<std::string>(cell);
}

Cell cell_from_json(const json& j) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) return j.get<double>();
  if (j.is_string()) return j.get<std::string>();
  if (j.is_object() && j.contains("nonfinite")) {
    const std::string tag = j.at("nonfinite").get<std::string>();
    if (tag == "nan") return std::nan("");
    if (tag == "inf") return HUGE_VAL;
    if (tag == "-inf") return -HUGE_VAL;
  }
  throw ParseError("result json: unsupported cell " + j.dump(), 0);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

}  // namespace

std::string view_to_dot(const GraphView& view) {
  std::ostringstream out;
  out << "graph \"" << dot_escape(view.name) << "\" {\n";
  out << "  node [style=filled];\n";
  std::vector<bool> highlighted(view.num_nodes, false);
  for (int v : view.highlighted)
    if (v >= 0 && v < view.num_nodes) highlighted[v] = true;
  for (int v = 0; v < view.num_nodes; ++v) {
    out << "  " << v << " [label=\""
        << dot_escape(v < static_cast<int>(view.labels.size()) ? view.labels[v] : std::to_string(v)) << "\"";
    if (v < static_cast<int>(view.colors.size()) && !view.colors[v].empty()) {
      out << ", fillcolor=\"" << dot_escape(view.colors[v]) << "\"";
    }
    if (highlighted[v]) out << ", penwidth=3, color=\"blue\"";
    out << "];\n";
  }
  for (auto [u, v] : view.edges) out << "  " << u << " -- " << v << ";\n";
  out << "}\n";
  return out.str();
}

std::string record_to_json(const ResultRecord& record) {
  json j;
  j["experiment"] = record.experiment;
  j["config_hash"] = record.config_hash;
  j["seed"] = record.seed;
  j["wall_clock_seconds"] = record.wall_clock_seconds;
  j["tables"] = json::array();
  for (const Table& t : record.tables) {
    json rows = json::array();
    for (const auto& row : t.rows) {
      json r = json::array();
      for (const Cell& c : row) r.push_back(cell_to_json(c));
      rows.push_back(std::move(r));
    }
    j["tables"].push_back({{"name", t.name}, {"columns", t.columns}, {"rows", std::move(rows)}});
  }
  j["views"] = json::array();
  for (const GraphView& v : record.views) {
    j["views"].push_back({{"name", v.name},
                          {"num_nodes", v.num_nodes},
                          {"edges", v.edges},
                          {"labels", v.labels},
                          {"colors", v.colors},
                          {"highlighted", v.highlighted}});
  }
  return j.dump(2) + "\n";
}

ResultRecord record_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    ResultRecord record;
    record.experiment = j.at("experiment").get<std::string>();
    record.config_hash = j.at("config_hash").get<std::string>();
    record.seed = j.at("seed").get<std::uint64_t>();
    record.wall_clock_seconds = j.at("wall_clock_seconds").get<double>();
    for (const json& t : j.at("tables")) {
      Table table;
      table.name = t.at("name").get<std::string>();
      table.columns = t.at("columns").get<std::vector<std::string>>();
      for (const json& r : t.at("rows")) {
        std::vector<Cell> row;
        for (const json& c : r) row.push_back(cell_from_json(c));
        table.rows.push_back(std::move(row));
      }
      record.tables.push_back(std::move(table));
    }
    for (const json& v : j.at("views")) {
      GraphView view;
      view.name = v.at("name").get<std::string>();
      view.num_nodes = v.at("num_nodes").get<int>();
      view.edges = v.at("edges").get<std::vector<std::pair<int, int>>>();
      view.labels = v.at("labels").get<std::vector<std::string>>();
      view.colors = v.at("colors").get<std::vector<std::string>>();
      view.highlighted = v.at("highlighted").get<std::vector<int>>();
      record.views.push_back(std::move(view));
    }
    return record;
  } catch (const json::exception& e) {
    throw ParseError(std::string("result json: ") + e.what(), 0);
  }
}

std::vector<std::filesystem::path> export_record(const ResultRecord& record, ExportFormat format,
                                                 const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory '" + dir.string() + "': " + ec.message());
  std::vector<std::filesystem::path> written;
  switch (format) {
    case ExportFormat::kCsv:
      for (const Table& t : record.tables) {
        auto path = dir / (record.experiment + "_" + t.name + ".csv");
        write_text(path, to_csv(t));
        written.push_back(path);
      }
      break;
    case ExportFormat::kJson: {
      auto path = dir / (record.experiment + ".json");
      write_text(path, record_to_json(record));
      written.push_back(path);
      break;
    }
    case ExportFormat::kDot:
      for (const GraphView& v : record.views) {
        auto path = dir / (record.experiment + "_" + v.name + ".dot");
        write_text(path, view_to_dot(v));
        written.push_back(path);
      }
      break;
  }
  return written;
}

void write_pgm(std::ostream& out, const Eigen::VectorXd& pixels, int width, int height) {
  if (pixels.size() != static_cast<Eigen::Index>(width) * height) {
    throw InvalidArgument("write_pgm: pixel count does not match the image size");
  }
  out << "P5\n" << width << " " << height << "\n255\n";
  for (Eigen::Index i = 0; i < pixels.size(); ++i) {
    const double v = std::isfinite(pixels[i]) ? std::clamp(pixels[i], 0.0, 1.0) : 0.0;
    out.put(static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0))));
  }
}

void write_pgm(const std::filesystem::path& path, const Eigen::VectorXd& pixels, int width, int height) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  write_pgm(out, pixels, width, height);
}

void write_inputs_csv(std::ostream& out, const std::vector<NodeId>& nodes, const std::vector<Eigen::VectorXd>& inputs) {
  if (nodes.size() != inputs.size()) throw InvalidArgument("write_inputs_csv: nodes and inputs differ in length");
  const Eigen::Index p = inputs.empty() ? 0 : inputs.front().size();
  out << "node";
  for (Eigen::Index j = 0; j < p; ++j) out << ",x" << j;
  out << "\n";
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (inputs[i].size() != p) throw InvalidArgument("write_inputs_csv: ragged inputs");
    out << nodes[i];
    for (Eigen::Index j = 0; j < p; ++j) out << "," << format_cell(inputs[i][j]);
    out << "\n";
  }
}

std::vector<Eigen::VectorXd> read_inputs_csv(std::istream& in, std::vector<NodeId>* nodes) {
  std::vector<Eigen::VectorXd> out;
  std::string line;
  int number = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty() || line.rfind("node", 0) == 0) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<double> values;
    NodeId node = 0;
    bool first = true;
    while (std::getline(ss, field, ',')) {
      try {
        if (first) {
          node = std::stoi(field);
        } else {
          values.push_back(std::stod(field));
        }
      } catch (const std::exception&) {
        throw ParseError("bad value '" + field + "'", number);
      }
      first = false;
    }
    if (out.empty()) width = values.size();
    if (values.size() != width || width == 0) throw ParseError("row width differs from the first row", number);
    out.push_back(Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size())));
    if (nodes != nullptr) nodes->push_back(node);
  }
  return out;
}

void write_gradient_estimates(std::ostream& out, const std::vector<NodeId>& nodes, const Eigen::MatrixXd& estimates,
                              const Eigen::MatrixXd& truth) {
  if (static_cast<Eigen::Index>(nodes.size()) != estimates.rows()) {
    throw InvalidArgument("write_gradient_estimates: one node id per estimate row");
  }
  const bool has_truth = truth.size() > 0;
  if (has_truth && (truth.rows() != estimates.rows() || truth.cols() != estimates.cols())) {
    throw InvalidArgument("write_gradient_estimates: truth shape differs from the estimates");
  }
  out << "node,coordinate,estimate,truth,abs_error\n";
  for (Eigen::Index i = 0; i < estimates.rows(); ++i) {
    for (Eigen::Index j = 0; j < estimates.cols(); ++j) {
      out << nodes[i] << "," << j << "," << format_cell(estimates(i, j)) << ",";
      if (has_truth) out << format_cell(truth(i, j)) << "," << format_cell(std::abs(estimates(i, j) - truth(i, j)));
      else out << ",";
      out << "\n";
    }
  }
}

}  // namespace gossipleak
