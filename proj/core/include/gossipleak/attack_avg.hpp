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
#include <vector>

#include "gossipleak/gossip_matrix.hpp"
#include "gossipleak/protocol.hpp"
#include "gossipleak/rational.hpp"
#include "gossipleak/rref.hpp"

namespace gossipleak {

// Rows express each attacker observation as a linear combination of the
// unknowns. `exact` is only populated for matrices built in exact mode; `k`
// always holds the double values.
struct KnowledgeMatrix {
  Eigen::MatrixXd k;
  RationalMatrix exact;
  std::vector<RowTag> rows;
  bool built_exact = false;

  bool has_exact() const { return built_exact; }
  int num_rows() const { return static_cast<int>(k.rows()); }
  int num_cols() const { return static_cast<int>(k.cols()); }
};

// Rows e_a for a in A, then W^t[v, :] for t = 0..T-1 and v in N(A). Powers
// are accumulated by repeated multiplication.
KnowledgeMatrix build_knowledge_matrix_avg(const GossipMatrix& w, const AttackerSet& attackers,
                                           int iterations, NumericMode mode = NumericMode::kFloat);

// Float mode needs only `k`; exact mode requires a matrix built in exact mode.
RrefDecomposition rref(const KnowledgeMatrix& k, NumericMode mode, bool with_transform = true);

// Nodes v such that some row of U is e_v.
std::vector<NodeId> classify_reconstructible(const RrefDecomposition& dec);
// Float mode only: rows within kNearOneHotTolerance of a one-hot vector that
// miss the strict test.
std::vector<NodeId> numerically_leaked(const RrefDecomposition& dec);

// A non-trivial row of U together with the matching entry of L Y: the
// attackers learn coefficients . x = value.
struct ResidualRelation {
  Eigen::RowVectorXd coefficients;
  Eigen::RowVectorXd value;
};

struct ReconstructionReport {
  std::vector<NodeId> reconstructible;
  std::vector<NodeId> numerically_leaked;
  Eigen::MatrixXd values;  // one row per reconstructible node
  std::vector<ResidualRelation> residual_relations;
  // Max-abs error per reconstructible node; empty without ground truth.
  std::vector<double> errors;
};

// values[v] = (L Y)_row(v) for each reconstructible v. Requires a
// decomposition computed with its transform.
ReconstructionReport reconstruct_values(const RrefDecomposition& dec, const Eigen::MatrixXd& y,
                                        const Eigen::MatrixXd* truth = nullptr);

struct AuditResult {
  NumericMode mode = NumericMode::kExact;
  int iterations = 0;
  std::vector<NodeId> reconstructible;
  std::vector<NodeId> numerically_leaked;
  // rank(K_t) for t = 1..iterations.
  std::vector<int> rank_profile;
  // Set once a whole round of messages added no rank: no later round can
  // reveal anything new.
  bool saturated = false;
  int saturation_iteration = -1;
};

// Data-free leakage prediction: which nodes T rounds of gossip expose.
AuditResult audit_static(const GossipMatrix& w, const AttackerSet& attackers, int iterations,
                         NumericMode mode = NumericMode::kExact);

// Exact audit run until the attackers' view stops growing (at most
// max_iterations rounds, default n).
AuditResult audit_saturated(const GossipMatrix& w, const AttackerSet& attackers, int max_iterations = -1);

// Fraction of non-attacker nodes that are reconstructible.
double reconstructed_fraction(const std::vector<NodeId>& reconstructible, const AttackerSet& attackers);

}  // namespace gossipleak
