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

#include "gossipleak/protocol.hpp"

#include <cmath>
#include <ostream>
#include <random>

#include "gossipleak/errors.hpp"

namespace gossipleak {

GossipTrace run_gossip_averaging(const GossipMatrix& w, const PrivateValues& x, int iterations) {
  if (x.rows() != w.size()) throw InvalidArgument("run_gossip_averaging: x has wrong row count");
  if (iterations < 0) throw InvalidArgument("run_gossip_averaging: negative iteration count");
  GossipTrace trace;
  trace.theta.reserve(iterations + 1);
  trace.theta.push_back(x);
  for (int t = 0; t < iterations; ++t) trace.theta.push_back(w.weights() * trace.theta.back());
  return trace;
}

int parameter_count_logistic(int classes, int input_dim) { return classes * (input_dim + 1); }

int parameter_count(const ModelSpec& model) {
  if (const auto* s = std::get_if<SyntheticModel>(&model)) return static_cast<int>(s->gradients.cols());
  const auto& l = std::get<LogisticModel>(model);
  return parameter_count_logistic(l.classes, l.input_dim());
}

namespace {

Eigen::VectorXd softmax_probabilities(const Eigen::VectorXd& theta, const Eigen::VectorXd& x,
                                      int classes) {
  const int p = static_cast<int>(x.size());
  if (theta.size() != parameter_count_logistic(classes, p)) {
    throw InvalidArgument("logistic: parameter vector has wrong size");
  }
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> weights(
      theta.data(), classes, p);
  Eigen::VectorXd logits = weights * x + theta.tail(classes);
  logits.array() -= logits.maxCoeff();
  Eigen::VectorXd probs = logits.array().exp();
  probs /= probs.sum();
  return probs;
}

void check_datum(const Eigen::VectorXd& theta, const Eigen::VectorXd& x, int label, int classes) {
  if (classes < 1) throw InvalidArgument("logistic: need at least one class");
  if (label < 0 || label >= classes) throw InvalidArgument("logistic: label out of range");
  if (!x.allFinite() || !theta.allFinite()) throw InvalidArgument("logistic: non-finite input");
}

}  // namespace

double logistic_loss(const Eigen::VectorXd& theta, const Eigen::VectorXd& x, int label, int classes) {
  check_datum(theta, x, label, classes);
  return -std::log(softmax_probabilities(theta, x, classes)[label]);
}

Eigen::VectorXd logistic_gradient(const Eigen::VectorXd& theta, const Eigen::VectorXd& x, int label,
                                  int classes, double eta) {
  check_datum(theta, x, label, classes);
  const int p = static_cast<int>(x.size());
  Eigen::VectorXd residual = softmax_probabilities(theta, x, classes);
  residual[label] -= 1.0;
  Eigen::VectorXd g(parameter_count_logistic(classes, p));
  for (int c = 0; c < classes; ++c) g.segment(c * p, p) = residual[c] * x;
  g.tail(classes) = residual;
  return -eta * g;
}

DgdTrace run_dgd(const GossipMatrix& w, const DgdConfig& cfg) {
  const int n = w.size();
  const int dim = parameter_count(cfg.model);
  if (cfg.eta <= 0.0) throw InvalidArgument("run_dgd: eta must be positive");
  if (cfg.iterations < 1) throw InvalidArgument("run_dgd: need at least one iteration");
  if (cfg.theta0.size() != dim) throw InvalidArgument("run_dgd: theta0 has wrong dimension");
  if (cfg.noise_sigma < 0.0) throw InvalidArgument("run_dgd: negative noise sigma");

  const auto* synthetic = std::get_if<SyntheticModel>(&cfg.model);
  const auto* logistic = std::get_if<LogisticModel>(&cfg.model);
  if (synthetic && synthetic->gradients.rows() != n) {
    throw InvalidArgument("run_dgd: synthetic gradients need one row per node");
  }
  if (logistic && (logistic->inputs.rows() != n || static_cast<int>(logistic->labels.size()) != n)) {
    throw InvalidArgument("run_dgd: logistic model needs one datum per node");
  }

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> noise(0.0, 1.0);

  DgdTrace trace;
  trace.theta.reserve(cfg.iterations + 1);
  trace.theta.push_back(cfg.theta0.transpose().replicate(n, 1));
  for (int t = 0; t < cfg.iterations; ++t) {
    const Eigen::MatrixXd& current = trace.theta.back();
    Eigen::MatrixXd g(n, dim);
    if (synthetic) {
      g = synthetic->gradients;
      if (cfg.noise_sigma > 0.0) {
        for (int v = 0; v < n; ++v)
          for (int j = 0; j < dim; ++j) g(v, j) += cfg.noise_sigma * noise(rng);
      }
    } else {
      for (int v = 0; v < n; ++v) {
        g.row(v) = logistic_gradient(current.row(v).transpose(), logistic->inputs.row(v).transpose(),
                                     logistic->labels[v], logistic->classes, cfg.eta)
                       .transpose();
      }
    }
    Eigen::MatrixXd half = current + g;
    trace.theta.push_back(w.weights() * half);
    trace.half_steps.push_back(std::move(half));
    trace.gradients.push_back(std::move(g));
  }
  return trace;
}

std::vector<RowTag> averaging_row_order(const AttackerSet& attackers, int iterations) {
  std::vector<RowTag> rows;
  for (NodeId a : attackers.attackers()) rows.push_back({RowKind::kOwn, 0, a});
  for (int t = 0; t < iterations; ++t)
    for (NodeId v : attackers.neighbors()) rows.push_back({RowKind::kReceived, t, v});
  return rows;
}

std::vector<RowTag> dgd_row_order(const AttackerSet& attackers, int iterations) {
  std::vector<RowTag> rows;
  for (int t = 0; t < iterations; ++t)
    for (NodeId v : attackers.neighbors()) rows.push_back({RowKind::kReceived, t, v});
  return rows;
}

Observation observe_averaging(const GossipTrace& trace, const AttackerSet& attackers, int iterations) {
  if (static_cast<int>(trace.theta.size()) < iterations) {
    throw InvalidArgument("observe_averaging: trace shorter than the attack horizon");
  }
  Observation obs;
  obs.rows = averaging_row_order(attackers, iterations);
  const int d = static_cast<int>(trace.theta.front().cols());
  obs.y.resize(static_cast<Eigen::Index>(obs.rows.size()), d);
  for (std::size_t i = 0; i < obs.rows.size(); ++i) {
    const RowTag& tag = obs.rows[i];
    obs.y.row(static_cast<Eigen::Index>(i)) = trace.theta[tag.t].row(tag.node);
  }
  return obs;
}

Observation observe_dgd(const DgdTrace& trace, const AttackerSet& attackers, int t0, int iterations) {
  if (t0 < 0 || t0 + iterations > static_cast<int>(trace.half_steps.size())) {
    throw InvalidArgument("observe_dgd: window outside the trace");
  }
  Observation obs;
  obs.t0 = t0;
  obs.rows = dgd_row_order(attackers, iterations);
  const int d = static_cast<int>(trace.theta.front().cols());
  obs.y.resize(static_cast<Eigen::Index>(obs.rows.size()), d);
  for (std::size_t i = 0; i < obs.rows.size(); ++i) {
    const RowTag& tag = obs.rows[i];
    obs.y.row(static_cast<Eigen::Index>(i)) = trace.half_steps[t0 + tag.t].row(tag.node);
  }
  const int na = attackers.size();
  obs.attacker_start.resize(na, d);
  for (int i = 0; i < na; ++i) obs.attacker_start.row(i) = trace.theta[t0].row(attackers.attackers()[i]);
  for (int t = 0; t < iterations; ++t) {
    Eigen::MatrixXd sent(na, d);
    for (int i = 0; i < na; ++i) sent.row(i) = trace.half_steps[t0 + t].row(attackers.attackers()[i]);
    obs.attacker_half_steps.push_back(std::move(sent));
  }
  return obs;
}

namespace {

void write_states(std::ostream& out, const std::vector<Eigen::MatrixXd>& states, const char* label,
                  double offset) {
  for (std::size_t t = 0; t < states.size(); ++t) {
    const Eigen::MatrixXd& m = states[t];
    for (Eigen::Index v = 0; v < m.rows(); ++v)
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        out << label << ',' << static_cast<double>(t) + offset << ',' << v << ',' << j << ','
            << m(v, j) << '\n';
  }
}

}  // namespace

void write_trace_csv(std::ostream& out, const GossipTrace& trace) {
  auto old = out.precision(17);
  out << "kind,iteration,node,coordinate,value\n";
  write_states(out, trace.theta, "theta", 0.0);
  out.precision(old);
}

void write_trace_csv(std::ostream& out, const DgdTrace& trace) {
  auto old = out.precision(17);
  out << "kind,iteration,node,coordinate,value\n";
  write_states(out, trace.theta, "theta", 0.0);
  write_states(out, trace.half_steps, "half_step", 0.5);
  write_states(out, trace.gradients, "gradient", 0.0);
  out.precision(old);
}

}  // namespace gossipleak
