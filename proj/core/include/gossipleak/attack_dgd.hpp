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

#include "gossipleak/attack_avg.hpp"
#include "gossipleak/gossip_matrix.hpp"
#include "gossipleak/protocol.hpp"
#include "gossipleak/rational.hpp"

namespace gossipleak {

// Gradient attack on D-GD.
//
// Unknowns are the constant gradient parts g_T of the targets, indexed by
// BlockPartition::target_index. Observation rows are (t, v) for
// t = 0..T-1 and v in N(A), the same order as dgd_row_order().

// Row (t, v) = (sum_{j<=t} W_TT^j)[v_T, :] where v_T is v's index in the
// target block.
KnowledgeMatrix build_knowledge_matrix_dgd(const BlockPartition& blocks, const AttackerSet& attackers,
                                           int iterations, NumericMode mode = NumericMode::kFloat);

// Subtracts what the attackers themselves injected. `theta0_targets` is the
// (|T| x d) state of the targets at the start of the window; with a shared
// zero initialization this is exactly the recursion
//
//   Yhat[t] = Y[t] - B^t[N(A)],  B^{t+1} = W_TT B^t + W_TA theta_A^{t+1/2}.
Eigen::MatrixXd remove_attacker_contributions(const Observation& obs, const BlockPartition& blocks,
                                              const AttackerSet& attackers,
                                              const Eigen::MatrixXd& theta0_targets);

struct CovarianceMatrix {
  Eigen::MatrixXd sigma_matrix;
  double sigma = 0.0;
};

// Covariance of the noise part of Yhat under i.i.d. per-step noise of
// standard deviation sigma:
//
//   C[(t,v),(t',v')] = sigma^2 * sum_{l=0}^{min(t,t')} (W_TT^{t+t'-2l})[v, v'].
CovarianceMatrix build_covariance(const BlockPartition& blocks, const AttackerSet& attackers,
                                  int iterations, double sigma);

enum class Solver { kOls, kGls };

// Columns of K whose value is pinned down by the observations.
struct Identifiability {
  std::vector<int> pivot_cols;
  std::vector<bool> identifiable;
};

// Uses the exact knowledge matrix when available.
Identifiability identifiability(const KnowledgeMatrix& k);

struct GradientEstimate {
  Solver method = Solver::kOls;
  Eigen::MatrixXd g_hat;  // one row per K column
  std::vector<NodeId> nodes;  // original node id per row, filled by the pipeline
  std::vector<bool> identifiable;
  // (K^T Sigma^-1 K)^-1 restricted to the pivot columns; zero elsewhere.
  // Empty for OLS.
  Eigen::MatrixXd estimator_covariance;
};

// Least squares on the pivot columns of K (free columns fixed to zero), so
// identifiable entries are exact whenever the system is consistent.
GradientEstimate ols_solve(const KnowledgeMatrix& k, const Eigen::MatrixXd& y_hat);
GradientEstimate ols_solve(const KnowledgeMatrix& k, const Eigen::MatrixXd& y_hat, const Identifiability& id);

// Generalized least squares. Falls back to OLS when Sigma is identically zero.
GradientEstimate gls_solve(const KnowledgeMatrix& k, const Eigen::MatrixXd& y_hat, const CovarianceMatrix& cov);
GradientEstimate gls_solve(const KnowledgeMatrix& k, const Eigen::MatrixXd& y_hat, const CovarianceMatrix& cov,
                           const Identifiability& id);

// sqrt(diag((K_p^T K_p)^-1)) over the pivot columns; +inf for non-identifiable columns.
// sqrt(diag((K_p^T K_p)^-1)) over the pivot columns; +inf elsewhere.
Eigen::VectorXd ols_noise_amplification(const KnowledgeMatrix& k, const Identifiability& id);

struct AttackWindow {
  int t0 = 0;
  int iterations = 1;
};

struct DgdAttackOptions {
  Solver method = Solver::kOls;
  double sigma = 0.0;  // used by GLS
  // Identifiability from the exact knowledge matrix (float RREF otherwise).
  bool exact_identifiability = true;
};

// observe -> remove attacker contributions -> build K (and Sigma) -> solve.
// The targets' starting state is taken to be the attackers' own state at t0
// (exact for a shared initialization at t0 = 0).
GradientEstimate attack_dgd_pipeline(const DgdTrace& trace, const GossipMatrix& w,
                                     const AttackerSet& attackers, const AttackWindow& window,
                                     const DgdAttackOptions& options = {});

// Same pipeline run entirely over the rationals on a noise-free synthetic
// model: exact simulation, exact contribution removal, exact least squares.
struct ExactDgdResult {
  RationalMatrix g_hat;  // |T| x d, target-index order
  std::vector<NodeId> nodes;
  std::vector<bool> identifiable;
};

ExactDgdResult attack_dgd_exact_synthetic(const GossipMatrix& w, const AttackerSet& attackers,
                                          const RationalMatrix& gradients, const std::vector<Rational>& theta0,
                                          int iterations);

}  // namespace gossipleak
