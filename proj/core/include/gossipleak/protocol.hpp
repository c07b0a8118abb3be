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
#include <cstdint>
#include <iosfwd>
#include <variant>
#include <vector>

#include "gossipleak/gossip_matrix.hpp"

namespace gossipleak {

// One row per node.
using PrivateValues = Eigen::MatrixXd;

// theta[t] for t = 0..T, theta[0] = x.
struct GossipTrace {
  std::vector<Eigen::MatrixXd> theta;
};

// theta^{t+1} = W theta^t.
GossipTrace run_gossip_averaging(const GossipMatrix& w, const PrivateValues& x, int iterations);

// Each node's gradient is a fixed (already eta-scaled) vector plus optional
// Gaussian noise.
struct SyntheticModel {
  Eigen::MatrixXd gradients;  // n x dim
};

// Softmax regression with bias, one datum per node. Parameters are laid out
// as the C x p weight matrix (row-major) followed by the C biases.
struct LogisticModel {
  int classes = 0;
  Eigen::MatrixXd inputs;  // n x p
  std::vector<int> labels;

  int input_dim() const { return static_cast<int>(inputs.cols()); }
};

using ModelSpec = std::variant<SyntheticModel, LogisticModel>;

int parameter_count(const ModelSpec& model);
int parameter_count_logistic(int classes, int input_dim);

struct DgdConfig {
  double eta = 1e-4;
  int iterations = 1;
  Eigen::VectorXd theta0;  // shared by every node
  ModelSpec model;
  double noise_sigma = 0.0;  // synthetic model only
  std::uint64_t seed = 0;
};

// theta[t] for t = 0..T, half_steps[t] = theta^{t+1/2} and gradients[t] the
// eta-scaled negative gradients g^t, t = 0..T-1. All matrices are n x dim.
struct DgdTrace {
  std::vector<Eigen::MatrixXd> theta;
  std::vector<Eigen::MatrixXd> half_steps;
  std::vector<Eigen::MatrixXd> gradients;
};

// Cross-entropy of softmax(W x + b) against `label`.
double logistic_loss(const Eigen::VectorXd& theta, const Eigen::VectorXd& x, int label, int classes);

// -eta * grad of logistic_loss with respect to theta.
Eigen::VectorXd logistic_gradient(const Eigen::VectorXd& theta, const Eigen::VectorXd& x, int label,
                                  int classes, double eta);

// theta^{t+1/2} = theta^t + g^t; theta^{t+1} = W theta^{t+1/2}.
DgdTrace run_dgd(const GossipMatrix& w, const DgdConfig& cfg);

// What the attackers see, row-aligned with the matching knowledge matrix.
enum class RowKind { kOwn, kReceived };

struct RowTag {
  RowKind kind = RowKind::kReceived;
  int t = 0;
  NodeId node = 0;

  bool operator==(const RowTag&) const = default;
};

// |A| own rows, then for t = 0..T-1 one row per v in N(A).
std::vector<RowTag> averaging_row_order(const AttackerSet& attackers, int iterations);
// For t = 0..T-1 one row per v in N(A).
std::vector<RowTag> dgd_row_order(const AttackerSet& attackers, int iterations);

struct Observation {
  Eigen::MatrixXd y;  // m x d
  std::vector<RowTag> rows;
  // D-GD only: attackers' own sent half-steps theta_A^{t0+t+1/2}, each
  // |A| x d with attackers in ascending order, and their state theta_A^{t0}.
  std::vector<Eigen::MatrixXd> attacker_half_steps;
  Eigen::MatrixXd attacker_start;
  int t0 = 0;
};

Observation observe_averaging(const GossipTrace& trace, const AttackerSet& attackers, int iterations);
// Window of `iterations` steps starting at t0.
Observation observe_dgd(const DgdTrace& trace, const AttackerSet& attackers, int t0, int iterations);

// Columnar dumps: iteration,node,coordinate,value.
void write_trace_csv(std::ostream& out, const GossipTrace& trace);
void write_trace_csv(std::ostream& out, const DgdTrace& trace);

}  // namespace gossipleak
