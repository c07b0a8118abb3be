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

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gossipleak/analysis.hpp"
#include "gossipleak/attack_dgd.hpp"
#include "gossipleak/config.hpp"
#include "gossipleak/errors.hpp"
#include "gossipleak/experiments.hpp"
#include "gossipleak/export.hpp"
#include "gossipleak/inversion.hpp"

namespace gl = gossipleak;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct CommonOptions {
  std::string config_path;
  std::string out;
  long long seed = -1;
  int threads = -1;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "key = value config file");
  cmd->add_option("--seed", opts.seed, "base seed (overrides the config)");
  cmd->add_option("--out", opts.out, "output directory");
  cmd->add_option("--threads", opts.threads, "worker threads (0 = hardware)");
  cmd->add_option("--set", opts.overrides, "extra key=value override, repeatable");
}

// Config file, then subcommand defaults for missing keys, then flags.
gl::ExperimentConfig resolve(const CommonOptions& opts, const std::string& experiment,
                             const gl::KeyValues& flag_values) {
  gl::KeyValues kv;
  if (!opts.config_path.empty()) kv = gl::load_key_values(opts.config_path);
  if (!experiment.empty()) kv["experiment"] = experiment;
  for (const auto& [k, v] : flag_values) {
    if (k == "graph") kv.erase("graph_file");
    if (k == "graph_file") kv.erase("graph");
    kv[k] = v;
  }
  for (const std::string& item : opts.overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw gl::ConfigError("--set expects key=value, got '" + item + "'");
    kv[item.substr(0, eq)] = item.substr(eq + 1);
  }
  if (opts.seed >= 0) kv["seed"] = std::to_string(opts.seed);
  if (opts.threads >= 0) kv["threads"] = std::to_string(opts.threads);
  if (!opts.out.empty()) kv["out"] = opts.out;
  return gl::config_from_key_values(kv);
}

void run_and_export(const gl::ExperimentConfig& cfg) {
  const gl::ResultRecord rec = gl::run_experiment(cfg);
  std::vector<std::filesystem::path> files;
  for (auto format : {gl::ExportFormat::kCsv, gl::ExportFormat::kJson, gl::ExportFormat::kDot}) {
    auto written = gl::export_record(rec, format, cfg.out_dir);
    files.insert(files.end(), written.begin(), written.end());
  }
  std::cout << rec.experiment << " config_hash=" << rec.config_hash << " seed=" << rec.seed
            << " seconds=" << rec.wall_clock_seconds << "\n";
  for (const gl::Table& t : rec.tables) {
    if (t.name == "summary" || t.name == "cells" || t.name == "distances" || t.name == "attackers" ||
        t.name == "groups") {
      std::cout << gl::to_csv(t);
      break;
    }
  }
  for (const auto& f : files) std::cout << "wrote " << f.string() << "\n";
}

// Graph-related flags shared by several subcommands.
struct GraphFlags {
  std::string graph, graph_file, attackers, iterations, scheme, mode;
  std::string n, p, radius;

  void add(CLI::App* cmd) {
    cmd->add_option("--graph", graph, "generator: er, line, geometric, florentine, complete, star");
    cmd->add_option("--graph-file", graph_file, "edge-list file");
    cmd->add_option("--n", n, "node count");
    cmd->add_option("--p", p, "edge probability");
    cmd->add_option("--radius", radius, "geometric radius");
    cmd->add_option("--attackers", attackers, "ids '0,3', 'random:k' or 'rotate-all'");
    cmd->add_option("--iterations", iterations, "horizon T, 'auto' or 'saturate'");
    cmd->add_option("--scheme", scheme, "metropolis or max-degree");
    cmd->add_option("--mode", mode, "exact or float");
  }

  gl::KeyValues values() const {
    gl::KeyValues kv;
    auto put = [&kv](const char* key, const std::string& v) {
      if (!v.empty()) kv[key] = v;
    };
    put("graph", graph);
    put("graph_file", graph_file);
    put("n", n);
    put("p", p);
    put("radius", radius);
    put("attackers", attackers);
    put("iterations", iterations);
    put("scheme", scheme);
    put("mode", mode);
    return kv;
  }
};

// Writes the gradient estimates, trace and images of one D-GD repetition.
void dump_dgd(const gl::ExperimentConfig& cfg) {
  const std::uint64_t seed = *cfg.seed;
  const gl::Graph g = gl::make_graph(cfg.graph, gl::derive_seed(seed, {0}));
  const gl::GossipMatrix w(g, cfg.scheme);
  const std::vector<gl::NodeId> attackers = gl::pick_attackers(cfg.attackers, g, gl::derive_seed(seed, {1}));
  const int horizon = gl::dgd_horizon(g, cfg.iterations);

  gl::DgdConfig dc;
  dc.eta = cfg.eta;
  dc.iterations = std::max(0, cfg.t0) + horizon;
  dc.noise_sigma = cfg.sigma;
  dc.seed = gl::derive_seed(seed, {3, 0});
  Eigen::MatrixXd truth;
  gl::LogisticSetup setup;
  if (cfg.model == "logistic") {
    setup = gl::make_logistic_setup(g.num_nodes(), cfg.classes, cfg.image_side, cfg.pretrain_samples,
                                    cfg.pretrain_epochs, cfg.pretrain_rate, gl::derive_seed(seed, {2, 0}));
    dc.model = setup.model;
    dc.theta0 = setup.theta0;
  } else {
    std::mt19937_64 rng(gl::derive_seed(seed, {2, 0}));
    std::normal_distribution<double> normal(0.0, 1.0);
    gl::SyntheticModel m;
    m.gradients.resize(g.num_nodes(), cfg.dim);
    for (Eigen::Index i = 0; i < m.gradients.size(); ++i) m.gradients.data()[i] = normal(rng);
    truth = m.gradients;
    dc.model = m;
    dc.theta0 = Eigen::VectorXd::Zero(cfg.dim);
  }
  const gl::DgdTrace trace = gl::run_dgd(w, dc);
  const gl::AttackerSet set(g, attackers);
  gl::DgdAttackOptions options;
  options.method = cfg.solver;
  options.sigma = cfg.sigma;
  const gl::GradientEstimate est =
      gl::attack_dgd_pipeline(trace, w, set, {std::max(0, cfg.t0), horizon}, options);

  const std::filesystem::path dir(cfg.out_dir);
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "trace.csv");
    gl::write_trace_csv(out, trace);
  }
  Eigen::MatrixXd target_truth;
  if (truth.size() > 0) {
    target_truth.resize(est.g_hat.rows(), est.g_hat.cols());
    for (std::size_t i = 0; i < est.nodes.size(); ++i) target_truth.row(i) = truth.row(est.nodes[i]);
  }
  {
    std::ofstream out(dir / "gradient_estimates.csv");
    gl::write_gradient_estimates(out, est.nodes, est.g_hat, target_truth);
  }
  if (cfg.model == "logistic") {
    std::vector<Eigen::VectorXd> recovered;
    std::vector<gl::NodeId> nodes;
    for (std::size_t i = 0; i < est.nodes.size(); ++i) {
      const gl::NodeId v = est.nodes[i];
      Eigen::VectorXd x = Eigen::VectorXd::Zero(cfg.image_side * cfg.image_side);
      try {
        x = gl::invert_logistic_gradient(est.g_hat.row(i).transpose(), cfg.classes).input;
      } catch (const gl::InvalidArgument&) {
      }
      gl::write_pgm(dir / ("node" + std::to_string(v) + "_true.pgm"), setup.model.inputs.row(v).transpose(),
                    cfg.image_side, cfg.image_side);
      gl::write_pgm(dir / ("node" + std::to_string(v) + "_recovered.pgm"), x, cfg.image_side, cfg.image_side);
      recovered.push_back(x);
      nodes.push_back(v);
    }
    std::ofstream out(dir / "recovered_inputs.csv");
    gl::write_inputs_csv(out, nodes, recovered);
  }
  std::cout << "wrote trace, gradient estimates" << (cfg.model == "logistic" ? " and images" : "") << " to "
            << dir.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gossipleak: privacy attacks and audits for gossip averaging and decentralized gradient descent"};
  app.require_subcommand(1);

  CommonOptions common;
  GraphFlags graph_flags;

  auto* audit = app.add_subcommand("audit", "exact or float reconstructibility audit (no data needed)");
  add_common(audit, common);
  graph_flags.add(audit);

  auto* attack_avg = app.add_subcommand("attack-avg", "simulate gossip averaging and reconstruct private values");
  add_common(attack_avg, common);
  graph_flags.add(attack_avg);

  auto* attack_dgd = app.add_subcommand("attack-dgd", "attack decentralized gradient descent");
  add_common(attack_dgd, common);
  graph_flags.add(attack_dgd);
  std::string preset = "dgd-attack", model, eta, sigma, solver, repetitions;
  bool dump = false;
  attack_dgd->add_option("--preset", preset, "dgd-attack, dgd-line or florentine");
  attack_dgd->add_option("--model", model, "synthetic or logistic");
  attack_dgd->add_option("--eta", eta, "learning rate");
  attack_dgd->add_option("--sigma", sigma, "gradient noise (synthetic)");
  attack_dgd->add_option("--solver", solver, "ols or gls");
  attack_dgd->add_option("--repetitions", repetitions, "repetitions");
  attack_dgd->add_flag("--dump", dump, "write trace, gradient estimates and images of one run instead");

  auto* gen = app.add_subcommand("gen-graph", "generate a graph as an edge list and DOT file");
  std::string gen_kind = "er", gen_out;
  int gen_n = 20;
  double gen_p = 0.2, gen_radius = 0.2;
  long long gen_seed = -1;
  bool gen_connected = false;
  gen->add_option("kind", gen_kind, "er, line, geometric, florentine, complete, star");
  gen->add_option("--n", gen_n, "node count");
  gen->add_option("--p", gen_p, "edge probability");
  gen->add_option("--radius", gen_radius, "geometric radius");
  gen->add_flag("--connected", gen_connected, "resample until connected (er)");
  gen->add_option("--seed", gen_seed, "seed")->required();
  gen->add_option("--out", gen_out, "output directory (stdout if omitted)");

  auto* analyze = app.add_subcommand("analyze", "centrality or relationship correlation with leakage");
  add_common(analyze, common);
  graph_flags.add(analyze);
  std::string analysis = "centrality", graphs;
  analyze->add_option("--what", analysis, "centrality or relationship");
  analyze->add_option("--graphs", graphs, "number of random graphs");

  auto* sweep = app.add_subcommand("sweep", "run a preset experiment");
  add_common(sweep, common);
  graph_flags.add(sweep);
  std::string sweep_kind = "er-sweep";
  sweep->add_option("--experiment", sweep_kind,
                    "er-sweep, lr-sweep, geometric-saturation, dgd-line, florentine, centrality, relationship");

  auto* exporter = app.add_subcommand("export", "convert a result JSON to csv, json or dot");
  std::string input, format = "csv", export_out = ".";
  exporter->add_option("input", input, "result JSON")->required();
  exporter->add_option("--format", format, "csv, json or dot");
  exporter->add_option("--out", export_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*audit) {
      run_and_export(resolve(common, "avg-audit", graph_flags.values()));
    } else if (*attack_avg) {
      run_and_export(resolve(common, "avg-attack", graph_flags.values()));
    } else if (*attack_dgd) {
      gl::KeyValues kv = graph_flags.values();
      if (!model.empty()) kv["model"] = model;
      if (!eta.empty()) kv["eta"] = eta;
      if (!sigma.empty()) kv["sigma"] = sigma;
      if (!solver.empty()) kv["solver"] = solver;
      if (!repetitions.empty()) kv["repetitions"] = repetitions;
      if (preset != "dgd-attack" && preset != "dgd-line" && preset != "florentine") {
        throw gl::ConfigError("unknown preset '" + preset + "'");
      }
      const gl::ExperimentConfig cfg = resolve(common, common.config_path.empty() ? preset : "", kv);
      if (dump) {
        dump_dgd(cfg);
      } else {
        run_and_export(cfg);
      }
    } else if (*gen) {
      if (gen_seed < 0) throw gl::ConfigError("--seed must be nonnegative");
      gl::GraphSource source{gen_kind, "", gen_n, gen_p, gen_radius, gen_connected};
      const gl::Graph g = gl::make_graph(source, static_cast<std::uint64_t>(gen_seed));
      std::ostringstream edges;
      edges << "# " << gen_kind << " n=" << g.num_nodes() << " m=" << g.num_edges() << " seed=" << gen_seed << "\n";
      for (auto [u, v] : g.edges()) edges << u << " " << v << "\n";
      if (gen_out.empty()) {
        std::cout << edges.str();
      } else {
        std::filesystem::create_directories(gen_out);
        const auto base = std::filesystem::path(gen_out) / gen_kind;
        std::ofstream(base.string() + ".edges") << edges.str();
        std::ofstream(base.string() + ".dot") << gl::to_dot(g);
        std::cout << "wrote " << base.string() << ".edges and .dot\n";
      }
    } else if (*analyze) {
      if (analysis != "centrality" && analysis != "relationship") {
        throw gl::ConfigError("--what must be centrality or relationship");
      }
      gl::KeyValues kv = graph_flags.values();
      if (!graphs.empty()) kv["graphs"] = graphs;
      run_and_export(resolve(common, common.config_path.empty() ? analysis : "", kv));
    } else if (*sweep) {
      run_and_export(resolve(common, common.config_path.empty() ? sweep_kind : "", graph_flags.values()));
    } else if (*exporter) {
      std::ifstream in(input);
      if (!in) throw gl::ConfigError("cannot open '" + input + "'");
      std::stringstream buffer;
      buffer << in.rdbuf();
      const gl::ResultRecord rec = gl::record_from_json(buffer.str());
      for (const auto& f : gl::export_record(rec, gl::export_format_from_string(format), export_out)) {
        std::cout << "wrote " << f.string() << "\n";
      }
    }
  } catch (const gl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
