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

#include "gossipleak/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>

#include "gossipleak/analysis.hpp"
#include "gossipleak/attack_avg.hpp"
#include "gossipleak/attack_dgd.hpp"
#include "gossipleak/errors.hpp"
#include "gossipleak/export.hpp"
#include "gossipleak/inversion.hpp"

namespace gossipleak {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

Cell i64(long long v) { return static_cast<std::int64_t>(v); }

std::string join_ids(const std::vector<NodeId>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) out += (i ? ";" : "") + std::to_string(ids[i]);
  return out;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return kNaN;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stddev_of(const std::vector<double>& v) {
  if (v.size() < 2) return v.empty() ? kNaN : 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double median_of(std::vector<double> v) {
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 == 1 ? v[h] : (v[h - 1] + v[h]) / 2.0;
}

std::vector<double> finite_only(const std::vector<double>& v) {
  std::vector<double> out;
  for (double x : v)
    if (!std::isnan(x)) out.push_back(x);
  return out;
}

std::uint64_t seed_of(const ExperimentConfig& cfg) {
  if (!cfg.seed) throw ConfigError("experiment: seed is mandatory");
  return *cfg.seed;
}

// Attacker sets for a single-graph experiment.
std::vector<std::vector<NodeId>> attacker_sets(const ExperimentConfig& cfg, const Graph& g, std::uint64_t seed) {
  if (cfg.attackers.kind == AttackerSpec::Kind::kRotateAll) {
    std::vector<std::vector<NodeId>> sets;
    for (NodeId v = 0; v < g.num_nodes(); ++v) sets.push_back({v});
    return sets;
  }
  return {pick_attackers(cfg.attackers, g, seed)};
}

// Outcome of the D-GD attack against one target.
struct TargetOutcome {
  NodeId node = 0;
  int distance = 0;
  bool identifiable = false;
  double psnr = kNaN;
  double rsd = kNaN;
  double relative_error = kNaN;
};

struct DgdRun {
  DgdTrace trace;
  int t0 = 0;
};

DgdRun simulate_dgd(const GossipMatrix& w, const ExperimentConfig& cfg, const ModelSpec& model,
                    const Eigen::VectorXd& theta0, int horizon, double eta, std::uint64_t noise_seed) {
  DgdConfig dc;
  dc.eta = eta;
  dc.theta0 = theta0;
  dc.model = model;
  dc.noise_sigma = cfg.sigma;
  dc.seed = noise_seed;
  DgdRun run;
  if (cfg.t0 >= 0) {
    dc.iterations = cfg.t0 + horizon;
    run.trace = run_dgd(w, dc);
    run.t0 = cfg.t0;
  } else {
    dc.iterations = 200 + horizon;
    run.trace = run_dgd(w, dc);
    run.t0 = detect_convergence(run.trace);
  }
  return run;
}

std::vector<TargetOutcome> dgd_outcomes(const DgdRun& run, const GossipMatrix& w, const std::vector<NodeId>& attackers,
                                        int horizon, const ExperimentConfig& cfg, const ModelSpec& model) {
  const Graph& g = w.graph();
  AttackerSet set(g, attackers);
  DgdAttackOptions options;
  options.method = cfg.solver;
  options.sigma = cfg.sigma;
  GradientEstimate est = attack_dgd_pipeline(run.trace, w, set, {run.t0, horizon}, options);
  const std::vector<int> dist = distance_to_set(g, attackers);

  std::vector<TargetOutcome> out;
  for (std::size_t i = 0; i < est.nodes.size(); ++i) {
    TargetOutcome o;
    o.node = est.nodes[i];
    o.distance = dist[o.node];
    o.identifiable = est.identifiable[i];
    if (o.identifiable) {
      const Eigen::VectorXd g_hat = est.g_hat.row(static_cast<Eigen::Index>(i)).transpose();
      if (const auto* logistic = std::get_if<LogisticModel>(&model)) {
        const Eigen::VectorXd truth = logistic->inputs.row(o.node).transpose();
        try {
          ReconstructedDatum datum = invert_logistic_gradient(g_hat, logistic->classes);
          o.psnr = psnr(datum.input, truth);
          o.rsd = relative_square_distance(datum.input, truth);
        } catch (const InvalidArgument&) {
          // uninformative gradient: no reconstruction
        }
      } else {
        const Eigen::VectorXd truth = std::get<SyntheticModel>(model).gradients.row(o.node).transpose();
        const double norm = truth.norm();
        o.relative_error = norm > 0.0 ? (g_hat - truth).norm() / norm : (g_hat - truth).norm();
      }
    }
    out.push_back(o);
  }
  return out;
}

struct ModelDraw {
  ModelSpec model;
  Eigen::VectorXd theta0;
};

ModelDraw draw_model(const ExperimentConfig& cfg, int num_nodes, std::uint64_t seed) {
  ModelDraw draw;
  if (cfg.model == "logistic") {
    LogisticSetup setup = make_logistic_setup(num_nodes, cfg.classes, cfg.image_side, cfg.pretrain_samples,
                                              cfg.pretrain_epochs, cfg.pretrain_rate, seed);
    draw.model = std::move(setup.model);
    draw.theta0 = std::move(setup.theta0);
  } else {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    SyntheticModel m;
    m.gradients.resize(num_nodes, cfg.dim);
    for (int v = 0; v < num_nodes; ++v)
      for (int j = 0; j < cfg.dim; ++j) m.gradients(v, j) = normal(rng);
    draw.model = std::move(m);
    draw.theta0 = Eigen::VectorXd::Zero(cfg.dim);
  }
  return draw;
}

AuditResult audit_for(const GossipMatrix& w, const AttackerSet& set, int iterations, NumericMode mode) {
  iterations = resolve_horizon(w.graph(), iterations);
  if (iterations == kHorizonSaturate) {
    AuditResult sat = audit_saturated(w, set);
    if (mode == NumericMode::kExact) return sat;
    return audit_static(w, set, sat.iterations, mode);
  }
  return audit_static(w, set, iterations, mode);
}

std::vector<LeakageSample> leakage_samples(const ExperimentConfig& cfg) {
  const std::uint64_t seed = seed_of(cfg);
  std::vector<LeakageSample> samples;
  const bool single_graph = !cfg.graph.path.empty() || cfg.attackers.kind == AttackerSpec::Kind::kRotateAll;
  if (single_graph) {
    auto g = std::make_shared<const Graph>(make_graph(cfg.graph, derive_seed(seed, {0})));
    for (NodeId v = 0; v < g->num_nodes(); ++v) samples.push_back({g, v});
    return samples;
  }
  const NodeId attacker = cfg.attackers.kind == AttackerSpec::Kind::kExplicit ? cfg.attackers.ids.front() : 0;
  std::vector<std::shared_ptr<const Graph>> graphs(cfg.graphs);
  parallel_for(cfg.graphs, cfg.threads, [&](int i) {
    graphs[i] = std::make_shared<const Graph>(make_graph(cfg.graph, derive_seed(seed, {static_cast<std::uint64_t>(i)})));
  });
  for (int i = 0; i < cfg.graphs; ++i) {
    if (attacker < 0 || attacker >= graphs[i]->num_nodes()) throw ConfigError("experiment: attacker id out of range");
    samples.push_back({graphs[i], attacker});
  }
  return samples;
}

std::vector<LeakageObservation> audit_in_parallel(const std::vector<LeakageSample>& samples, const ExperimentConfig& cfg) {
  std::vector<LeakageObservation> obs(samples.size());
  parallel_for(static_cast<int>(samples.size()), cfg.threads, [&](int i) {
    const int horizon = resolve_horizon(*samples[i].graph, cfg.iterations);
    obs[i] = audit_samples({samples[i]}, horizon == kHorizonSaturate ? -1 : horizon, cfg.scheme).front();
  });
  return obs;
}

Cell optional_cell(const std::optional<double>& v) { return v ? Cell(*v) : Cell(kNaN); }

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = mix64(base + 0x9e3779b97f4a7c15ull);
  for (std::uint64_t p : path) s = mix64(s ^ mix64(p + 0x632be59bd9b4e019ull));
  return s;
}

void parallel_for(int count, int threads, const std::function<void(int)>& job) {
  if (count <= 0) return;
  int workers = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min(workers, count);
  if (workers == 1) {
    for (int i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (int i = next++; i < count && !failed; i = next++) {
      try {
        job(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed = true;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

Graph make_graph(const GraphSource& source, std::uint64_t seed) {
  if (!source.path.empty()) return load_edge_list(source.path).graph;
  const std::string& gen = source.generator;
  if (gen == "er") return gen_erdos_renyi(source.n, source.p, seed, source.require_connected);
  if (gen == "line") return gen_line(source.n);
  if (gen == "geometric") return gen_random_geometric(source.n, source.radius, seed);
  if (gen == "florentine") return gen_florentine();
  if (gen == "complete") return gen_complete(source.n);
  if (gen == "star") return gen_star(source.n);
  throw ConfigError("unknown graph generator '" + gen + "'");
}

std::vector<NodeId> pick_attackers(const AttackerSpec& spec, const Graph& g, std::uint64_t seed) {
  const int n = g.num_nodes();
  switch (spec.kind) {
    case AttackerSpec::Kind::kExplicit:
      for (NodeId v : spec.ids)
        if (v < 0 || v >= n) throw ConfigError("attacker id " + std::to_string(v) + " is out of range");
      return spec.ids;
    case AttackerSpec::Kind::kRandom: {
      if (spec.count > n) throw ConfigError("more random attackers than nodes");
      std::vector<NodeId> nodes(n);
      std::iota(nodes.begin(), nodes.end(), 0);
      std::mt19937_64 rng(seed);
      for (int i = 0; i < spec.count; ++i) {
        std::uniform_int_distribution<int> pick(i, n - 1);
        std::swap(nodes[i], nodes[pick(rng)]);
      }
      nodes.resize(spec.count);
      std::sort(nodes.begin(), nodes.end());
      return nodes;
    }
    case AttackerSpec::Kind::kRotateAll:
      break;
  }
  throw ConfigError("rotate-all does not name a single attacker set");
}

std::vector<int> distance_to_set(const Graph& g, const std::vector<NodeId>& sources) {
  std::vector<int> dist(g.num_nodes(), kUnreachable);
  for (NodeId s : sources) {
    const std::vector<int> d = shortest_path_lengths(g, s);
    for (int v = 0; v < g.num_nodes(); ++v) dist[v] = std::min(dist[v], d[v]);
  }
  return dist;
}

int finite_diameter(const Graph& g) {
  int best = 0;
  for (NodeId s = 0; s < g.num_nodes(); ++s) {
    for (int d : shortest_path_lengths(g, s))
      if (d != kUnreachable) best = std::max(best, d);
  }
  return best;
}

int resolve_horizon(const Graph& g, int iterations) {
  if (iterations > 0 || iterations == kHorizonSaturate) return iterations;
  if (iterations != kHorizonAuto) throw ConfigError("unknown horizon value " + std::to_string(iterations));
  return finite_diameter(g) + 2;
}

int dgd_horizon(const Graph& g, int iterations) {
  if (iterations == kHorizonSaturate) throw ConfigError("D-GD attacks need a finite horizon");
  return resolve_horizon(g, iterations);
}

Eigen::VectorXd smooth_image(int side, std::mt19937_64& rng) {
  constexpr int kModes = 4;
  constexpr double kPi = 3.14159265358979323846;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double amp[kModes], fx[kModes], fy[kModes], phase[kModes];
  for (int k = 0; k < kModes; ++k) {
    amp[k] = unit(rng);
    fx[k] = 2.0 * unit(rng);
    fy[k] = 2.0 * unit(rng);
    phase[k] = 2.0 * kPi * unit(rng);
  }
  Eigen::VectorXd x(side * side);
  for (int i = 0; i < side; ++i) {
    for (int j = 0; j < side; ++j) {
      double s = 0.0;
      for (int k = 0; k < kModes; ++k) s += amp[k] * std::cos(kPi * (fx[k] * i + fy[k] * j) / side + phase[k]);
      x[i * side + j] = s;
    }
  }
  const double lo = x.minCoeff();
  const double span = x.maxCoeff() - lo;
  if (span <= 0.0) return Eigen::VectorXd::Constant(side * side, 0.5);
  return (x.array() - lo) / span;
}

LogisticSetup make_logistic_setup(int num_nodes, int classes, int side, int public_samples, int epochs, double rate,
                                  std::uint64_t seed) {
  const int p = side * side;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> label(0, classes - 1);

  LogisticSetup setup;
  setup.theta0 = Eigen::VectorXd::Zero(parameter_count_logistic(classes, p));
  std::vector<Eigen::VectorXd> inputs;
  std::vector<int> labels;
  for (int i = 0; i < public_samples; ++i) {
    inputs.push_back(smooth_image(side, rng));
    labels.push_back(label(rng));
  }
  for (int e = 0; e < epochs && public_samples > 0; ++e) {
    Eigen::VectorXd step = Eigen::VectorXd::Zero(setup.theta0.size());
    for (int i = 0; i < public_samples; ++i) step += logistic_gradient(setup.theta0, inputs[i], labels[i], classes, 1.0);
    setup.theta0 += rate * step / static_cast<double>(public_samples);
  }

  setup.model.classes = classes;
  setup.model.inputs.resize(num_nodes, p);
  for (int v = 0; v < num_nodes; ++v) {
    setup.model.inputs.row(v) = smooth_image(side, rng).transpose();
    setup.model.labels.push_back(label(rng));
  }
  return setup;
}

int detect_convergence(const DgdTrace& trace, double tol, int cap) {
  const int last = std::min<int>(cap, static_cast<int>(trace.theta.size()) - 1);
  for (int t = 0; t < last; ++t) {
    if ((trace.theta[t + 1] - trace.theta[t]).norm() < tol) return t;
  }
  return std::max(0, last);
}

ResultRecord run_avg_audit(const ExperimentConfig& cfg) {
  const std::uint64_t seed = seed_of(cfg);
  const Graph g = make_graph(cfg.graph, derive_seed(seed, {0}));
  const GossipMatrix w(g, cfg.scheme);
  const auto sets = attacker_sets(cfg, g, derive_seed(seed, {1}));

  std::vector<AuditResult> audits(sets.size());
  parallel_for(static_cast<int>(sets.size()), cfg.threads,
               [&](int i) { audits[i] = audit_for(w, AttackerSet(g, sets[i]), cfg.iterations, cfg.mode); });

  ResultRecord rec;
  Table nodes{"nodes", {"attackers", "node", "label", "verdict", "numerically_leaked"}, {}};
  Table summary{"summary", {"attackers", "iterations", "rank", "saturated", "reconstructed", "fraction"}, {}};
  std::vector<double> counts(g.num_nodes(), 0.0);
  for (std::size_t s = 0; s < sets.size(); ++s) {
    const AttackerSet set(g, sets[s]);
    const AuditResult& a = audits[s];
    std::set<NodeId> hit(a.reconstructible.begin(), a.reconstructible.end());
    std::set<NodeId> loose(a.numerically_leaked.begin(), a.numerically_leaked.end());
    int reconstructed = 0;
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      std::string verdict = set.contains(v) ? "attacker" : (hit.count(v) ? "reconstructed" : "hidden");
      if (verdict == "reconstructed") ++reconstructed;
      nodes.rows.push_back({join_ids(sets[s]), i64(v), g.label(v), verdict, i64(loose.count(v))});
    }
    counts[sets[s].front()] = reconstructed;
    summary.rows.push_back({join_ids(sets[s]), i64(a.iterations), i64(a.rank_profile.empty() ? 0 : a.rank_profile.back()),
                            i64(a.saturated ? 1 : 0), i64(reconstructed),
                            reconstructed_fraction(a.reconstructible, set)});
  }
  rec.tables = {std::move(summary), std::move(nodes)};
  if (cfg.attackers.kind == AttackerSpec::Kind::kRotateAll) {
    std::vector<std::string> colors;
    const double denom = std::max(1, g.num_nodes() - 1);
    for (double c : counts) colors.push_back(ramp_color(c / denom));
    rec.views.push_back(make_view("leakage", g, colors));
  } else {
    const auto& a = audits.front();
    rec.views.push_back(make_view("map", g, reconstruction_colors(g.num_nodes(), sets.front(), a.reconstructible),
                                  sets.front()));
  }
  return rec;
}

ResultRecord run_avg_attack(const ExperimentConfig& cfg) {
  const std::uint64_t seed = seed_of(cfg);
  const Graph g = make_graph(cfg.graph, derive_seed(seed, {0}));
  const GossipMatrix w(g, cfg.scheme);
  const auto sets = attacker_sets(cfg, g, derive_seed(seed, {1}));

  std::mt19937_64 rng(derive_seed(seed, {2}));
  std::normal_distribution<double> normal(0.0, 1.0);
  PrivateValues x(g.num_nodes(), cfg.dim);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = normal(rng);

  ResultRecord rec;
  Table nodes{"nodes", {"attackers", "node", "verdict", "abs_error"}, {}};
  Table summary{"summary", {"attackers", "iterations", "reconstructed", "fraction", "max_abs_error"}, {}};
  std::vector<ReconstructionReport> reports(sets.size());
  std::vector<int> horizons(sets.size());
  parallel_for(static_cast<int>(sets.size()), cfg.threads, [&](int s) {
    const AttackerSet set(g, sets[s]);
    int horizon = resolve_horizon(g, cfg.iterations);
    if (horizon == kHorizonSaturate) horizon = audit_saturated(w, set).iterations;
    const GossipTrace trace = run_gossip_averaging(w, x, horizon);
    const Observation obs = observe_averaging(trace, set, horizon);
    const KnowledgeMatrix k = build_knowledge_matrix_avg(w, set, horizon, cfg.mode);
    reports[s] = reconstruct_values(rref(k, cfg.mode, true), obs.y, &x);
    horizons[s] = horizon;
  });
  for (std::size_t s = 0; s < sets.size(); ++s) {
    const AttackerSet set(g, sets[s]);
    const ReconstructionReport& r = reports[s];
    std::map<NodeId, double> err;
    for (std::size_t i = 0; i < r.reconstructible.size(); ++i) err[r.reconstructible[i]] = r.errors[i];
    double worst = 0.0;
    int reconstructed = 0;
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      const bool attacker = set.contains(v);
      const auto it = err.find(v);
      if (!attacker && it != err.end()) {
        ++reconstructed;
        worst = std::max(worst, it->second);
      }
      nodes.rows.push_back({join_ids(sets[s]), i64(v),
                            attacker ? "attacker" : (it != err.end() ? "reconstructed" : "hidden"),
                            it != err.end() ? it->second : kNaN});
    }
    summary.rows.push_back({join_ids(sets[s]), i64(horizons[s]), i64(reconstructed),
                            reconstructed_fraction(r.reconstructible, set), worst});
  }
  rec.tables = {std::move(summary), std::move(nodes)};
  rec.views.push_back(make_view("map", g,
                                reconstruction_colors(g.num_nodes(), sets.front(), reports.front().reconstructible),
                                sets.front()));
  return rec;
}

namespace {

// Shared by the D-GD presets: repetitions x attacker sets, per-target rows
// and a per-distance summary.
ResultRecord dgd_distance_study(const ExperimentConfig& cfg) {
  const std::uint64_t seed = seed_of(cfg);
  const Graph g = make_graph(cfg.graph, derive_seed(seed, {0}));
  const GossipMatrix w(g, cfg.scheme);
  const auto sets = attacker_sets(cfg, g, derive_seed(seed, {1}));
  const int horizon = dgd_horizon(g, cfg.iterations);
  const bool logistic = cfg.model == "logistic";

  std::vector<std::vector<std::vector<TargetOutcome>>> outcomes(cfg.repetitions);
  parallel_for(cfg.repetitions, cfg.threads, [&](int r) {
    const ModelDraw draw = draw_model(cfg, g.num_nodes(), derive_seed(seed, {2, static_cast<std::uint64_t>(r)}));
    const DgdRun run = simulate_dgd(w, cfg, draw.model, draw.theta0, horizon, cfg.eta,
                                    derive_seed(seed, {3, static_cast<std::uint64_t>(r)}));
    for (const auto& set : sets) outcomes[r].push_back(dgd_outcomes(run, w, set, horizon, cfg, draw.model));
  });

  // Per-target standard-error factors document the conditioning.
  std::vector<std::map<NodeId, double>> amplification(sets.size());
  for (std::size_t s = 0; s < sets.size(); ++s) {
    const AttackerSet set(g, sets[s]);
    const BlockPartition blocks = partition_blocks(w, set);
    const KnowledgeMatrix k = build_knowledge_matrix_dgd(blocks, set, horizon, NumericMode::kExact);
    const Eigen::VectorXd amp = ols_noise_amplification(k, identifiability(k));
    for (int i = 0; i < blocks.num_targets(); ++i) amplification[s][blocks.target_node(i)] = amp[i];
  }

  ResultRecord rec;
  Table trials{"trials",
               {"repetition", "attackers", "node", "distance", "identifiable", logistic ? "psnr" : "relative_error",
                logistic ? "relative_square_distance" : "noise_amplification"},
               {}};
  std::map<int, std::vector<double>> metric, secondary, amp_by_distance;
  for (int r = 0; r < cfg.repetitions; ++r) {
    for (std::size_t s = 0; s < sets.size(); ++s) {
      for (const TargetOutcome& o : outcomes[r][s]) {
        const double m = logistic ? o.psnr : o.relative_error;
        const double m2 = logistic ? o.rsd : amplification[s][o.node];
        trials.rows.push_back(
            {i64(r), join_ids(sets[s]), i64(o.node), i64(o.distance == kUnreachable ? -1 : o.distance),
             i64(o.identifiable ? 1 : 0), m, m2});
        metric[o.distance].push_back(m);
        secondary[o.distance].push_back(logistic ? o.rsd : o.relative_error);
        if (r == 0) amp_by_distance[o.distance].push_back(amplification[s][o.node]);
      }
    }
  }

  Table distances{"distances", {"distance", "targets"}, {}};
  if (logistic) {
    for (const char* c : {"mean_psnr", "std_psnr", "median_psnr", "mean_rsd", "std_rsd", "success_rate"})
      distances.columns.push_back(c);
  } else {
    for (const char* c : {"mean_relative_error", "median_relative_error", "max_relative_error"})
      distances.columns.push_back(c);
  }
  distances.columns.push_back("noise_amplification");
  for (const auto& [d, values] : metric) {
    const std::vector<double> ok = finite_only(values);
    std::vector<Cell> row{i64(d == kUnreachable ? -1 : d), i64(static_cast<long long>(values.size()))};
    if (logistic) {
      const std::vector<double> rsd = finite_only(secondary[d]);
      const double successes = static_cast<double>(
          std::count_if(values.begin(), values.end(), [&](double p) { return p > cfg.psnr_threshold; }));
      row.insert(row.end(), {mean_of(ok), stddev_of(ok), median_of(ok), mean_of(rsd), stddev_of(rsd),
                             successes / static_cast<double>(values.size())});
    } else {
      row.insert(row.end(), {mean_of(ok), median_of(ok), ok.empty() ? kNaN : *std::max_element(ok.begin(), ok.end())});
    }
    row.push_back(median_of(amp_by_distance[d]));
    distances.rows.push_back(std::move(row));
  }
  rec.tables = {std::move(distances), std::move(trials)};

  // Map for the first attacker set, first repetition.
  if (!outcomes.empty() && !sets.empty()) {
    std::vector<NodeId> good;
    for (const TargetOutcome& o : outcomes.front().front()) {
      const bool success = logistic ? o.psnr > cfg.psnr_threshold : o.relative_error <= 1e-3;
      if (success) good.push_back(o.node);
    }
    rec.views.push_back(make_view("map", g, reconstruction_colors(g.num_nodes(), sets.front(), good), sets.front()));
  }
  return rec;
}

}  // namespace

ResultRecord run_dgd_attack(const ExperimentConfig& cfg) { return dgd_distance_study(cfg); }

ResultRecord run_dgd_line(const ExperimentConfig& cfg) { return dgd_distance_study(cfg); }

ResultRecord run_er_sweep(const ExperimentConfig& cfg) {
  const std::uint64_t seed = seed_of(cfg);
  struct Cellkey {
    int n;
    std::size_t pi;
    int k;
  };
  std::vector<Cellkey> cells;
  for (int n : cfg.grid_n)
    for (std::size_t pi = 0; pi < cfg.grid_p.size(); ++pi)
      for (int k : cfg.grid_attackers) {
        if (k < 1 || k > n) throw ConfigError("er-sweep: attacker count outside [1, n]");
        cells.push_back({n, pi, k});
      }
  const int per_cell = cfg.graphs;
  std::vector<double> fractions(cells.size() * per_cell);
  parallel_for(static_cast<int>(fractions.size()), cfg.threads, [&](int job) {
    const Cellkey& c = cells[job / per_cell];
    const int gi = job % per_cell;
    // Same graph for every attacker count: larger coalitions see a superset.
    const Graph g = gen_erdos_renyi(c.n, cfg.grid_p[c.pi], derive_seed(seed, {static_cast<std::uint64_t>(c.n), c.pi,
                                                                               static_cast<std::uint64_t>(gi)}),
                                    cfg.graph.require_connected);
    std::vector<NodeId> attackers(c.k);
    std::iota(attackers.begin(), attackers.end(), 0);
    const GossipMatrix w(g, cfg.scheme);
    const AttackerSet set(g, attackers);
    fractions[job] = reconstructed_fraction(audit_for(w, set, cfg.iterations, cfg.mode).reconstructible, set);
  });

  ResultRecord rec;
  Table cell_table{"cells", {"n", "p", "attackers", "graphs", "mean_fraction", "std_fraction"}, {}};
  Table trials{"trials", {"n", "p", "attackers", "graph", "fraction"}, {}};
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    const Cellkey& c = cells[ci];
    std::vector<double> f(fractions.begin() + ci * per_cell, fractions.begin() + (ci + 1) * per_cell);
    cell_table.rows.push_back({i64(c.n), cfg.grid_p[c.pi], i64(c.k), i64(per_cell), mean_of(f), stddev_of(f)});
    for (int gi = 0; gi < per_cell; ++gi) trials.rows.push_back({i64(c.n), cfg.grid_p[c.pi], i64(c.k), i64(gi), f[gi]});
  }
  rec.tables = {std::move(cell_table), std::move(trials)};
  return rec;
}

ResultRecord run_centrality(const ExperimentConfig& cfg) {
  const std::vector<LeakageSample> samples = leakage_samples(cfg);
  const std::vector<LeakageObservation> obs = audit_in_parallel(samples, cfg);

  ResultRecord rec;
  Table table{"samples", {"sample", "attacker", "degree", "eigenvector", "betweenness", "fraction"}, {}};
  const Graph* cached = nullptr;
  CentralityProfile profile;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].graph.get() != cached) {
      cached = samples[i].graph.get();
      profile = centralities(*cached);
    }
    const NodeId a = samples[i].attacker;
    table.rows.push_back({i64(static_cast<long long>(i)), i64(a), profile.degree[a], profile.eigenvector[a],
                          profile.betweenness[a], obs[i].fraction});
  }
  const CentralityCorrelation corr = correlate_centrality_vs_leakage(samples, obs);
  Table summary{"summary", {"centrality", "spearman"}, {}};
  summary.rows.push_back({"degree", optional_cell(corr.degree)});
  summary.rows.push_back({"eigenvector", optional_cell(corr.eigenvector)});
  summary.rows.push_back({"betweenness", optional_cell(corr.betweenness)});
  rec.tables = {std::move(summary), std::move(table)};

  if (samples.size() > 1 && samples.front().graph == samples.back().graph) {
    std::vector<std::string> colors;
    for (const auto& o : obs) colors.push_back(ramp_color(o.fraction));
    rec.views.push_back(make_view("leakage", *samples.front().graph, colors));
  }
  return rec;
}

ResultRecord run_relationship(const ExperimentConfig& cfg) {
  const std::vector<LeakageSample> samples = leakage_samples(cfg);
  const std::vector<LeakageObservation> obs = audit_in_parallel(samples, cfg);

  ResultRecord rec;
  Table per_sample{"samples", {"sample", "attacker", "fraction", "kendall_shortest_path", "kendall_communicability"}, {}};
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const RelationshipCorrelation one = correlate_relationships({samples[i]}, {obs[i]});
    per_sample.rows.push_back({i64(static_cast<long long>(i)), i64(samples[i].attacker), obs[i].fraction,
                               one.shortest_path.samples_used ? one.shortest_path.mean : kNaN,
                               one.communicability.samples_used ? one.communicability.mean : kNaN});
  }
  const RelationshipCorrelation all = correlate_relationships(samples, obs);
  Table summary{"summary", {"relation", "mean_kendall", "std_kendall", "samples_used"}, {}};
  summary.rows.push_back({"shortest_path", all.shortest_path.mean, all.shortest_path.stddev,
                          i64(all.shortest_path.samples_used)});
  summary.rows.push_back({"communicability", all.communicability.mean, all.communicability.stddev,
                          i64(all.communicability.samples_used)});
  rec.tables = {std::move(summary), std::move(per_sample)};
  return rec;
}

ResultRecord run_lr_sweep(const ExperimentConfig& cfg) {
  const std::uint64_t seed = seed_of(cfg);
  const Graph g = make_graph(cfg.graph, derive_seed(seed, {0}));
  const GossipMatrix w(g, cfg.scheme);
  if (cfg.attackers.kind == AttackerSpec::Kind::kRotateAll) throw ConfigError("lr-sweep needs one attacker set");
  const std::vector<NodeId> attackers = pick_attackers(cfg.attackers, g, derive_seed(seed, {1}));
  const int horizon = dgd_horizon(g, cfg.iterations);
  const std::vector<double> grid = cfg.eta_grid.empty() ? std::vector<double>{cfg.eta} : cfg.eta_grid;

  const int jobs = static_cast<int>(grid.size()) * cfg.repetitions;
  std::vector<std::vector<TargetOutcome>> outcomes(jobs);
  parallel_for(jobs, cfg.threads, [&](int job) {
    const std::size_t ei = static_cast<std::size_t>(job / cfg.repetitions);
    const auto r = static_cast<std::uint64_t>(job % cfg.repetitions);
    // The same data for every learning rate: paired comparison.
    const ModelDraw draw = draw_model(cfg, g.num_nodes(), derive_seed(seed, {2, r}));
    const DgdRun run = simulate_dgd(w, cfg, draw.model, draw.theta0, horizon, grid[ei], derive_seed(seed, {3, r}));
    outcomes[job] = dgd_outcomes(run, w, attackers, horizon, cfg, draw.model);
  });

  ResultRecord rec;
  Table nodes{"nodes", {"eta", "node", "label", "distance", "mean_psnr"}, {}};
  Table groups{"groups", {"eta", "distance", "targets", "mean_psnr"}, {}};
  for (std::size_t ei = 0; ei < grid.size(); ++ei) {
    std::map<NodeId, std::vector<double>> per_node;
    std::map<NodeId, int> distance;
    for (int r = 0; r < cfg.repetitions; ++r) {
      for (const TargetOutcome& o : outcomes[ei * cfg.repetitions + r]) {
        per_node[o.node].push_back(cfg.model == "logistic" ? o.psnr : o.relative_error);
        distance[o.node] = o.distance;
      }
    }
    std::map<int, std::vector<double>> per_distance;
    for (const auto& [v, values] : per_node) {
      const double m = mean_of(finite_only(values));
      nodes.rows.push_back({grid[ei], i64(v), g.label(v), i64(distance[v]), m});
      per_distance[distance[v]].push_back(m);
    }
    for (const auto& [d, values] : per_distance) {
      groups.rows.push_back({grid[ei], i64(d), i64(static_cast<long long>(values.size())), mean_of(finite_only(values))});
    }
  }
  rec.tables = {std::move(groups), std::move(nodes)};
  return rec;
}

ResultRecord run_geometric_saturation(const ExperimentConfig& cfg) {
  const std::uint64_t seed = seed_of(cfg);
  std::vector<int> horizons = cfg.horizons;
  std::sort(horizons.begin(), horizons.end());
  if (horizons.empty() || horizons.front() < 1) throw ConfigError("geometric-saturation: horizons must be >= 1");
  if (cfg.attackers.kind == AttackerSpec::Kind::kRotateAll) {
    throw ConfigError("geometric-saturation needs one attacker set per draw");
  }

  struct Draw {
    Graph graph;
    std::vector<NodeId> attackers;
    std::vector<std::vector<NodeId>> sets;
  };
  std::vector<Draw> draws(cfg.graphs);
  parallel_for(cfg.graphs, cfg.threads, [&](int i) {
    const auto di = static_cast<std::uint64_t>(i);
    Draw d{make_graph(cfg.graph, derive_seed(seed, {di})), {}, {}};
    d.attackers = pick_attackers(cfg.attackers, d.graph, derive_seed(seed, {di, 1}));
    const GossipMatrix w(d.graph, cfg.scheme);
    const AttackerSet set(d.graph, d.attackers);
    for (int t : horizons) d.sets.push_back(audit_static(w, set, t, cfg.mode).reconstructible);
    draws[i] = std::move(d);
  });

  ResultRecord rec;
  Table sets_table{"sets", {"draw", "attackers", "horizon", "reconstructed", "fraction", "nodes"}, {}};
  Table summary{"summary", {"draw", "attackers", "nested", "last_two_equal"}, {}};
  for (int i = 0; i < cfg.graphs; ++i) {
    const Draw& d = draws[i];
    const AttackerSet set(d.graph, d.attackers);
    bool nested = true;
    for (std::size_t h = 0; h < horizons.size(); ++h) {
      if (h > 0) nested = nested && std::includes(d.sets[h].begin(), d.sets[h].end(), d.sets[h - 1].begin(),
                                                  d.sets[h - 1].end());
      sets_table.rows.push_back({i64(i), join_ids(d.attackers), i64(horizons[h]),
                                 i64(static_cast<long long>(d.sets[h].size())),
                                 reconstructed_fraction(d.sets[h], set), join_ids(d.sets[h])});
    }
    const bool equal = horizons.size() < 2 || d.sets[horizons.size() - 1] == d.sets[horizons.size() - 2];
    summary.rows.push_back({i64(i), join_ids(d.attackers), i64(nested ? 1 : 0), i64(equal ? 1 : 0)});
  }
  rec.tables = {std::move(summary), std::move(sets_table)};
  for (std::size_t h = 0; h < horizons.size() && !draws.empty(); ++h) {
    const Draw& d = draws.front();
    rec.views.push_back(make_view("draw0_T" + std::to_string(horizons[h]), d.graph,
                                  reconstruction_colors(d.graph.num_nodes(), d.attackers, d.sets[h]), d.attackers));
  }
  return rec;
}

ResultRecord run_florentine(const ExperimentConfig& cfg) {
  const std::uint64_t seed = seed_of(cfg);
  const Graph g = make_graph(cfg.graph, derive_seed(seed, {0}));
  const GossipMatrix w(g, cfg.scheme);
  const auto sets = attacker_sets(cfg, g, derive_seed(seed, {1}));
  const int horizon = dgd_horizon(g, cfg.iterations);

  // One D-GD run per repetition serves every attacker.
  std::vector<std::vector<std::vector<TargetOutcome>>> outcomes(cfg.repetitions);
  parallel_for(cfg.repetitions, cfg.threads, [&](int r) {
    const auto rr = static_cast<std::uint64_t>(r);
    const ModelDraw draw = draw_model(cfg, g.num_nodes(), derive_seed(seed, {2, rr}));
    const DgdRun run = simulate_dgd(w, cfg, draw.model, draw.theta0, horizon, cfg.eta, derive_seed(seed, {3, rr}));
    for (const auto& set : sets) outcomes[r].push_back(dgd_outcomes(run, w, set, horizon, cfg, draw.model));
  });

  auto success = [&](const TargetOutcome& o) {
    return cfg.model == "logistic" ? o.psnr > cfg.psnr_threshold : o.relative_error <= 1e-3;
  };
  ResultRecord rec;
  Table attackers_table{"attackers",
                        {"attackers", "label", "degree", "success_rate", "neighbor_success_rate"},
                        {}};
  Table trials{"trials", {"repetition", "attackers", "node", "distance", "psnr", "relative_error"}, {}};
  std::vector<std::string> colors(g.num_nodes(), "");
  for (std::size_t s = 0; s < sets.size(); ++s) {
    std::vector<double> rates, neighbor_rates;
    for (int r = 0; r < cfg.repetitions; ++r) {
      int hits = 0, near_hits = 0, near = 0;
      for (const TargetOutcome& o : outcomes[r][s]) {
        hits += success(o) ? 1 : 0;
        if (o.distance == 1) {
          ++near;
          near_hits += success(o) ? 1 : 0;
        }
        trials.rows.push_back({i64(r), join_ids(sets[s]), i64(o.node), i64(o.distance), o.psnr, o.relative_error});
      }
      const auto targets = static_cast<double>(outcomes[r][s].size());
      rates.push_back(targets > 0 ? hits / targets : kNaN);
      neighbor_rates.push_back(near > 0 ? static_cast<double>(near_hits) / near : kNaN);
    }
    const double rate = mean_of(rates);
    const NodeId first = sets[s].front();
    attackers_table.rows.push_back({join_ids(sets[s]), sets[s].size() == 1 ? g.label(first) : std::string("coalition"),
                                    i64(sets[s].size() == 1 ? g.degree(first) : 0), rate,
                                    mean_of(finite_only(neighbor_rates))});
    if (sets[s].size() == 1) colors[first] = ramp_color(rate);
  }
  rec.tables = {std::move(attackers_table), std::move(trials)};
  rec.views.push_back(make_view("success", g, colors));
  return rec;
}

ResultRecord run_experiment(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  ResultRecord rec;
  switch (cfg.kind) {
    case ExperimentKind::kAvgAudit: rec = run_avg_audit(cfg); break;
    case ExperimentKind::kAvgAttack: rec = run_avg_attack(cfg); break;
    case ExperimentKind::kDgdAttack: rec = run_dgd_attack(cfg); break;
    case ExperimentKind::kErSweep: rec = run_er_sweep(cfg); break;
    case ExperimentKind::kCentrality: rec = run_centrality(cfg); break;
    case ExperimentKind::kRelationship: rec = run_relationship(cfg); break;
    case ExperimentKind::kLrSweep: rec = run_lr_sweep(cfg); break;
    case ExperimentKind::kGeometricSaturation: rec = run_geometric_saturation(cfg); break;
    case ExperimentKind::kDgdLine: rec = run_dgd_line(cfg); break;
    case ExperimentKind::kFlorentine: rec = run_florentine(cfg); break;
  }
  rec.experiment = to_string(cfg.kind);
  rec.config_hash = config_hash(cfg);
  rec.seed = seed_of(cfg);
  rec.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

}  // namespace gossipleak
