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

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "gossipleak/config.hpp"
#include "gossipleak/errors.hpp"
#include "gossipleak/experiments.hpp"
#include "gossipleak/export.hpp"

namespace gl = gossipleak;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("gossipleak_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

gl::ExperimentConfig small(gl::ExperimentKind kind, std::uint64_t seed) {
  gl::ExperimentConfig cfg = gl::default_config(kind);
  cfg.seed = seed;
  cfg.threads = 2;
  return cfg;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(GOSSIPLEAK_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// Regex check of the DOT subset we emit:
// graph ID { (node_stmt | edge_stmt) ; ... }
bool dot_is_well_formed(const std::string& dot) {
  const std::regex header(R"(^\s*(strict\s+)?graph\s+("[^"]*"|\w+)?\s*\{)");
  std::smatch m;
  if (!std::regex_search(dot, m, header)) return false;
  std::string body = dot.substr(static_cast<std::size_t>(m.length(0)));
  const auto close = body.rfind('}');
  if (close == std::string::npos) return false;
  if (body.find_first_not_of(" \t\r\n", close + 1) != std::string::npos) return false;
  body = body.substr(0, close);
  const std::string id = R"(("(?:[^"\\]|\\.)*"|[A-Za-z_][\w]*|-?\d+(?:\.\d+)?))";
  const std::string attr = id + R"(\s*=\s*)" + id;
  const std::string attrs = R"((\[\s*()" + attr + R"((\s*[,;]?\s*)" + attr + R"()*)?\s*\])?)";
  const std::regex stmt("^\\s*((node|graph|edge)\\s*" + attrs + "|" + id + "\\s*(--\\s*" + id + "\\s*)*" + attrs +
                        ")\\s*$");
  std::stringstream ss(body);
  std::string part;
  while (std::getline(ss, part, ';')) {
    if (part.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    if (!std::regex_match(part, stmt)) return false;
  }
  return true;
}

}  // namespace

TEST(Config, ParsesKeyValues) {
  const gl::KeyValues kv = gl::parse_key_values("# run\nexperiment = avg-audit\n  seed=3 # trailing\n\ngraph = line\nn = 9\n");
  EXPECT_EQ(kv.at("experiment"), "avg-audit");
  EXPECT_EQ(kv.at("seed"), "3");
  const gl::ExperimentConfig cfg = gl::config_from_key_values(kv);
  EXPECT_EQ(cfg.kind, gl::ExperimentKind::kAvgAudit);
  EXPECT_EQ(cfg.graph.generator, "line");
  EXPECT_EQ(cfg.graph.n, 9);
  EXPECT_EQ(*cfg.seed, 3u);
  EXPECT_EQ(cfg.iterations, gl::kHorizonSaturate);
}

TEST(Config, ReportsErrors) {
  try {
    gl::parse_key_values("experiment = avg-audit\nno equals sign\n");
    FAIL();
  } catch (const gl::ParseError& e) {
    EXPECT_EQ(e.line(), 2);
  }
  EXPECT_THROW(gl::parse_key_values("seed = 1\nseed = 2\n"), gl::ParseError);
  EXPECT_THROW(gl::config_from_key_values({{"experiment", "avg-audit"}}), gl::ConfigError);
  EXPECT_THROW(gl::config_from_key_values({{"experiment", "nope"}, {"seed", "1"}}), gl::ConfigError);
  EXPECT_THROW(gl::config_from_key_values({{"experiment", "avg-audit"}, {"seed", "1"}, {"colour", "red"}}),
               gl::ConfigError);
  EXPECT_THROW(gl::config_from_key_values(
                   {{"experiment", "avg-audit"}, {"seed", "1"}, {"graph", "er"}, {"graph_file", "x.txt"}}),
               gl::ConfigError);
  EXPECT_THROW(gl::config_from_key_values({{"experiment", "avg-audit"}, {"seed", "1"}, {"iterations", "0"}}),
               gl::ConfigError);
  EXPECT_THROW(gl::config_from_key_values({{"experiment", "avg-audit"}, {"seed", "1"}, {"p", "abc"}}),
               gl::ConfigError);
}

TEST(Config, RoundTripAndHash) {
  gl::ExperimentConfig cfg = small(gl::ExperimentKind::kErSweep, 11);
  cfg.iterations = 7;
  const gl::ExperimentConfig back = gl::config_from_key_values(gl::to_key_values(cfg));
  EXPECT_EQ(gl::to_key_values(back), gl::to_key_values(cfg));
  EXPECT_EQ(gl::config_hash(back), gl::config_hash(cfg));
  EXPECT_EQ(gl::config_hash(cfg).size(), 16u);

  gl::ExperimentConfig other_seed = cfg;
  other_seed.seed = 12;
  other_seed.threads = 1;
  EXPECT_EQ(gl::config_hash(other_seed), gl::config_hash(cfg));
  gl::ExperimentConfig changed = cfg;
  changed.grid_p.push_back(0.9);
  EXPECT_NE(gl::config_hash(changed), gl::config_hash(cfg));

  for (const auto& [key, help] : gl::config_schema()) {
    EXPECT_FALSE(key.empty());
    EXPECT_FALSE(help.empty());
  }
}

TEST(Config, AttackerSpecs) {
  EXPECT_EQ(gl::attacker_spec_from_string("0,3").ids, (std::vector<gl::NodeId>{0, 3}));
  EXPECT_EQ(gl::attacker_spec_from_string("random:2").count, 2);
  EXPECT_EQ(gl::attacker_spec_from_string("rotate-all").kind, gl::AttackerSpec::Kind::kRotateAll);
  EXPECT_THROW(gl::attacker_spec_from_string("random:x"), gl::ConfigError);
  const gl::Graph g = gl::gen_line(10);
  const auto picked = gl::pick_attackers(gl::attacker_spec_from_string("random:3"), g, 5);
  EXPECT_EQ(picked.size(), 3u);
  EXPECT_TRUE(std::is_sorted(picked.begin(), picked.end()));
  EXPECT_EQ(picked, gl::pick_attackers(gl::attacker_spec_from_string("random:3"), g, 5));
}

TEST(Horizon, ResolvesSentinels) {
  EXPECT_EQ(gl::resolve_horizon(gl::gen_line(7), gl::kHorizonAuto), 8);
  EXPECT_EQ(gl::resolve_horizon(gl::gen_line(7), 3), 3);
  EXPECT_EQ(gl::resolve_horizon(gl::gen_line(7), gl::kHorizonSaturate), gl::kHorizonSaturate);
  const gl::Graph split(7, {{0, 1}, {1, 2}, {2, 3}, {5, 6}});
  EXPECT_EQ(gl::finite_diameter(split), 3);
  EXPECT_EQ(gl::dgd_horizon(split, gl::kHorizonAuto), 5);
  EXPECT_THROW(gl::dgd_horizon(split, gl::kHorizonSaturate), gl::ConfigError);
}

TEST(Export, EmptyTableIsHeaderOnly) {
  gl::Table t{"empty", {"a", "b", "c"}, {}};
  EXPECT_EQ(gl::to_csv(t), "a,b,c\n");
  gl::ResultRecord rec;
  rec.experiment = "void";
  rec.tables.push_back(t);
  const fs::path dir = scratch_dir("empty");
  const auto files = gl::export_record(rec, gl::ExportFormat::kCsv, dir);
  ASSERT_EQ(files.size(), 1u);
  EXPECT_EQ(slurp(files.front()), "a,b,c\n");
}

TEST(Export, CellFormatting) {
  EXPECT_EQ(gl::format_cell(gl::Cell(std::int64_t{42})), "42");
  EXPECT_EQ(gl::format_cell(gl::Cell(0.25)), "0.25");
  EXPECT_EQ(gl::format_cell(gl::Cell(std::numeric_limits<double>::quiet_NaN())), "nan");
  EXPECT_EQ(gl::format_cell(gl::Cell(std::string("a,b"))), "\"a,b\"");
}

TEST(Export, JsonRoundTrip) {
  gl::ResultRecord rec;
  rec.experiment = "demo";
  rec.config_hash = "0123456789abcdef";
  rec.seed = 99;
  rec.wall_clock_seconds = 1.5;
  rec.tables.push_back({"t", {"i", "x", "s"},
                        {{std::int64_t{1}, 0.5, std::string("hi")},
                         {std::int64_t{-2}, std::numeric_limits<double>::infinity(), std::string("")}}});
  rec.views.push_back(gl::make_view("v", gl::gen_line(3), {"red", "purple", "yellow"}, {0}));
  const gl::ResultRecord back = gl::record_from_json(gl::record_to_json(rec));
  EXPECT_TRUE(back == rec);
  EXPECT_THROW(gl::record_from_json("{not json"), gl::ParseError);
}

TEST(Export, DotIsWellFormed) {
  const gl::Graph g = gl::gen_florentine();
  const auto colors = gl::reconstruction_colors(g.num_nodes(), {1}, {0, 2, 3});
  EXPECT_EQ(colors[1], gl::kAttackerColor);
  EXPECT_EQ(colors[0], gl::kReconstructedColor);
  EXPECT_EQ(colors[14], gl::kNotReconstructedColor);
  const std::string dot = gl::view_to_dot(gl::make_view("map", g, colors, {1}));
  EXPECT_TRUE(dot_is_well_formed(dot)) << dot;
  EXPECT_TRUE(dot_is_well_formed(gl::to_dot(gl::gen_line(4), {"red", "yellow", "yellow", "purple"})));
  EXPECT_FALSE(dot_is_well_formed("graph { a -- ; }"));
}

TEST(Export, UnwritablePathFails) {
  gl::ResultRecord rec;
  rec.experiment = "x";
  rec.tables.push_back({"t", {"a"}, {}});
  const fs::path dir = scratch_dir("blocked");
  std::ofstream(dir / "file") << "x";
  EXPECT_THROW(gl::export_record(rec, gl::ExportFormat::kCsv, dir / "file" / "sub"), gl::Error);
}

TEST(Export, InputsCsvAndPgm) {
  std::vector<Eigen::VectorXd> inputs{Eigen::Vector3d(0.0, 0.5, 1.0), Eigen::Vector3d(0.25, 0.75, 0.125)};
  std::stringstream ss;
  gl::write_inputs_csv(ss, {4, 7}, inputs);
  std::vector<gl::NodeId> nodes;
  const auto back = gl::read_inputs_csv(ss, &nodes);
  EXPECT_EQ(nodes, (std::vector<gl::NodeId>{4, 7}));
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1], inputs[1]);

  std::stringstream pgm;
  gl::write_pgm(pgm, Eigen::Vector4d(0.0, 1.0, 0.5, 2.0), 2, 2);
  const std::string s = pgm.str();
  EXPECT_EQ(s.substr(0, 2), "P5");
  EXPECT_EQ(static_cast<unsigned char>(s[s.size() - 4]), 0);
  EXPECT_EQ(static_cast<unsigned char>(s.back()), 255);
}

TEST(Experiments, SeedDerivationAndParallelFor) {
  EXPECT_NE(gl::derive_seed(1, {0}), gl::derive_seed(1, {1}));
  EXPECT_NE(gl::derive_seed(1, {0, 1}), gl::derive_seed(1, {1, 0}));
  EXPECT_EQ(gl::derive_seed(5, {2, 3}), gl::derive_seed(5, {2, 3}));
  std::vector<int> out(100, 0);
  gl::parallel_for(100, 4, [&](int i) { out[i] = i * i; });
  for (int i = 0; i < 100; ++i) EXPECT_EQ(out[i], i * i);
  EXPECT_THROW(gl::parallel_for(10, 3, [](int i) { if (i == 7) throw gl::Error("boom"); }), gl::Error);
}

TEST(Experiments, SmoothImagesInUnitRange) {
  std::mt19937_64 rng(1);
  const Eigen::VectorXd img = gl::smooth_image(8, rng);
  EXPECT_EQ(img.size(), 64);
  EXPECT_NEAR(img.minCoeff(), 0.0, 1e-12);
  EXPECT_NEAR(img.maxCoeff(), 1.0, 1e-12);
}

TEST(Experiments, SerialAndThreadedRunsAgree) {
  gl::ExperimentConfig cfg = small(gl::ExperimentKind::kCentrality, 4);
  cfg.graphs = 12;
  cfg.threads = 1;
  const gl::ResultRecord serial = gl::run_experiment(cfg);
  cfg.threads = 4;
  const gl::ResultRecord threaded = gl::run_experiment(cfg);
  EXPECT_EQ(serial.tables, threaded.tables);
  EXPECT_EQ(serial.config_hash, threaded.config_hash);
}

TEST(Experiments, FlorentineHasFifteenAttackerRows) {
  gl::ExperimentConfig cfg = small(gl::ExperimentKind::kFlorentine, 2);
  cfg.repetitions = 2;
  const gl::ResultRecord rec = gl::run_experiment(cfg);
  const gl::Table& t = rec.table("attackers");
  ASSERT_EQ(t.rows.size(), 15u);
  for (const auto& row : t.rows) EXPECT_DOUBLE_EQ(std::get<double>(row[4]), 1.0);  // neighbours
}

TEST(Experiments, LrSweepSingleEtaGivesOneGroupPerDistance) {
  gl::ExperimentConfig cfg = small(gl::ExperimentKind::kLrSweep, 3);
  cfg.eta_grid = {1e-4};
  cfg.repetitions = 1;
  const gl::ResultRecord rec = gl::run_experiment(cfg);
  std::set<std::int64_t> distances;
  for (const auto& row : rec.table("groups").rows) {
    EXPECT_DOUBLE_EQ(std::get<double>(row[0]), 1e-4);
    EXPECT_TRUE(distances.insert(std::get<std::int64_t>(row[1])).second);
  }
}

TEST(Experiments, GeometricFirstHorizonIsNeighbourhood) {
  gl::ExperimentConfig cfg = small(gl::ExperimentKind::kGeometricSaturation, 6);
  cfg.graphs = 4;
  const gl::ResultRecord rec = gl::run_experiment(cfg);
  for (const auto& row : rec.table("summary").rows) EXPECT_EQ(std::get<std::int64_t>(row[2]), 1);  // nested
  const gl::Graph g = gl::make_graph(cfg.graph, gl::derive_seed(6, {0}));
  const auto attackers = gl::pick_attackers(cfg.attackers, g, gl::derive_seed(6, {0, 1}));
  const gl::AttackerSet set(g, attackers);
  std::vector<gl::NodeId> expected = set.neighbors();
  expected.insert(expected.end(), attackers.begin(), attackers.end());
  std::sort(expected.begin(), expected.end());
  std::string joined;
  for (std::size_t i = 0; i < expected.size(); ++i) joined += (i ? ";" : "") + std::to_string(expected[i]);
  const auto& first = rec.table("sets").rows.front();
  EXPECT_EQ(std::get<std::int64_t>(first[2]), 1);
  EXPECT_EQ(std::get<std::string>(first[5]), joined);
}

TEST(Cli, ExitCodes) {
  const fs::path dir = scratch_dir("cli");
  EXPECT_EQ(run_cli("audit --seed 1 --graph line --n 6 --out " + dir.string()), 0);
  EXPECT_TRUE(fs::exists(dir / "avg-audit_summary.csv"));
  EXPECT_EQ(run_cli("audit --graph line --n 6 --out " + dir.string()), 2);  // no seed
  EXPECT_EQ(run_cli("audit --seed 1 --graph nope"), 2);
  EXPECT_EQ(run_cli("audit --seed 1 --bogus-flag"), 2);
  EXPECT_EQ(run_cli("audit --seed 1 --graph-file " + (dir / "missing.txt").string() + " --out " + dir.string()), 1);
  EXPECT_EQ(run_cli("gen-graph er --n 8 --p 0.3 --seed 2 --out " + dir.string()), 0);
  EXPECT_EQ(run_cli("export " + (dir / "avg-audit.json").string() + " --format dot --out " + (dir / "re").string()), 0);
}
