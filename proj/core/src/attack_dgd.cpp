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

#include "gossipleak/attack_dgd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gossipleak/errors.hpp"

namespace gossipleak {

KnowledgeMatrix build_knowledge_matrix_dgd(const BlockPartition& blocks, const AttackerSet& attackers,
                                           int iterations, NumericMode mode) {
  if (iterations < 1) throw InvalidArgument("knowledge matrix: need at least one iteration");
  const int nt = blocks.num_targets();
  const auto& neighbors = attackers.neighbors();
  const int nn = static_cast<int>(neighbors.size());
  const bool exact = mode == NumericMode::kExact;

  KnowledgeMatrix km;
  km.rows = dgd_row_order(attackers, iterations);
  km.k = Eigen::MatrixXd::Zero(iterations * nn, nt);
  km.built_exact = exact;
  if (exact) km.exact = RationalMatrix(iterations * nn, nt);

  for (int j = 0; j < nn; ++j) {
    const int vt = blocks.target_index(neighbors[j]);
    if (exact) {
      std::vector<Rational> power(nt);
      power[vt] = 1;
      std::vector<Rational> partial = power;
      for (int t = 0; t < iterations; ++t) {
        const int row = t * nn + j;
        km.exact.set_row(row, partial);
        for (int c = 0; c < nt; ++c) km.k(row, c) = partial[c].get_d();
        if (t + 1 == iterations) break;
        power = multiply(power, blocks.exact_tt);
        for (int c = 0; c < nt; ++c) partial[c] += power[c];
      }
    } else {
      Eigen::RowVectorXd power = Eigen::RowVectorXd::Zero(nt);
      power[vt] = 1.0;
      Eigen::RowVectorXd partial = power;
      for (int t = 0; t < iterations; ++t) {
        km.k.row(t * nn + j) = partial;
        power = power * blocks.tt;
        partial += power;
      }
    }
  }
  return km;
}

Eigen::MatrixXd remove_attacker_contributions(const Observation& obs, const BlockPartition& blocks,
                                              const AttackerSet& attackers,
                                              const Eigen::MatrixXd& theta0_targets) {
  const int nt = blocks.num_targets();
  const Eigen::Index d = obs.y.cols();
  if (theta0_targets.rows() != nt || theta0_targets.cols() != d) {
    throw InvalidArgument("remove_attacker_contributions: theta0 has the wrong shape");
  }
  int horizon = 0;
  for (const RowTag& tag : obs.rows) horizon = std::max(horizon, tag.t + 1);
  if (static_cast<int>(obs.attacker_half_steps.size()) < horizon) {
    throw InvalidArgument("remove_attacker_contributions: missing half-step record");
  }
  for (const auto& sent : obs.attacker_half_steps) {
    if (sent.rows() != attackers.size() || sent.cols() != d) {
      throw InvalidArgument("remove_attacker_contributions: half-step record has the wrong shape");
    }
  }

  Eigen::MatrixXd y_hat = obs.y;
  Eigen::MatrixXd b = theta0_targets;
  std::size_t row = 0;
  for (int t = 0; t < horizon; ++t) {
    while (row < obs.rows.size() && obs.rows[row].t == t) {
      y_hat.row(static_cast<Eigen::Index>(row)) -= b.row(blocks.target_index(obs.rows[row].node));
      ++row;
    }
    b = blocks.tt * b + blocks.ta * obs.attacker_half_steps[t];
  }
  if (row != obs.rows.size()) {
    throw InvalidArgument("remove_attacker_contributions: observation rows are not in time order");
  }
  return y_hat;
}

CovarianceMatrix build_covariance(const BlockPartition& blocks, const AttackerSet& attackers, int iterations,
                                  double sigma) {
  if (sigma < 0.0) throw InvalidArgument("build_covariance: sigma must be >= 0");
  if (iterations < 1) throw InvalidArgument("build_covariance: need at least one iteration");
  const int nt = blocks.num_targets();
  const auto& neighbors = attackers.neighbors();
  const int nn = static_cast<int>(neighbors.size());
  std::vector<int> idx(nn);
  for (int j = 0; j < nn; ++j) idx[j] = blocks.target_index(neighbors[j]);

  std::vector<Eigen::MatrixXd> powers;
  powers.push_back(Eigen::MatrixXd::Identity(nt, nt));
  for (int k = 1; k <= 2 * (iterations - 1); ++k) powers.push_back(powers.back() * blocks.tt);

  const double var = sigma * sigma;
  CovarianceMatrix cov;
  cov.sigma = sigma;
  cov.sigma_matrix = Eigen::MatrixXd::Zero(iterations * nn, iterations * nn);
  for (int t = 0; t < iterations; ++t) {
    for (int tp = t; tp < iterations; ++tp) {
      Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(nt, nt);
      for (int l = 0; l <= std::min(t, tp); ++l) sum += powers[t + tp - 2 * l];
      for (int a = 0; a < nn; ++a) {
        for (int b = 0; b < nn; ++b) {
          const double value = var * sum(idx[a], idx[b]);
          cov.sigma_matrix(t * nn + a, tp * nn + b) = value;
          cov.sigma_matrix(tp * nn + b, t * nn + a) = value;
        }
      }
    }
  }
  return cov;
}

Identifiability identifiability(const KnowledgeMatrix& k) {
  Identifiability id;
  const int n = k.num_cols();
  id.identifiable.assign(n, false);
  std::vector<int> one_hot;
  if (k.has_exact()) {
    ExactRowReducer reducer(n);
    for (int r = 0; r < k.num_rows() && reducer.rank() < n; ++r) reducer.add_row(k.exact.row(r));
    id.pivot_cols = reducer.pivots();
    one_hot = reducer.one_hot_columns();
  } else {
    RrefDecomposition dec = rref_float(k.k, kPivotTolerance, false);
    id.pivot_cols = dec.pivot_cols;
    one_hot = one_hot_columns(dec, kOneHotTolerance);
  }
  for (int c : one_hot) id.identifiable[c] = true;
  return id;
}

namespace {

struct LeastSquares {
  Eigen::MatrixXd solution;    // r x d
  Eigen::MatrixXd covariance;  // r x r, (A^T A)^-1
};

// Full-column-rank least squares. Columns are equilibrated before a
// Householder QR so that badly scaled columns (far targets contribute tiny
// coefficients) keep their relative accuracy.
LeastSquares solve_full_rank(const Eigen::MatrixXd& a, const Eigen::MatrixXd& y) {
  const Eigen::Index r = a.cols();
  Eigen::VectorXd norms = a.colwise().norm().transpose();
  for (Eigen::Index c = 0; c < r; ++c) {
    if (norms[c] == 0.0) norms[c] = 1.0;
  }
  Eigen::MatrixXd scaled = a * norms.cwiseInverse().asDiagonal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(scaled);
  Eigen::MatrixXd qty = qr.householderQ().transpose() * y;
  auto upper = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
  LeastSquares out;
  out.solution = norms.cwiseInverse().asDiagonal() * upper.solve(qty.topRows(r));
  Eigen::MatrixXd r_inv = upper.solve(Eigen::MatrixXd::Identity(r, r));
  out.covariance = norms.cwiseInverse().asDiagonal() * (r_inv * r_inv.transpose()) *
                   norms.cwiseInverse().asDiagonal();
  return out;
}

GradientEstimate solve_on_pivots(const Eigen::MatrixXd& k, const Eigen::MatrixXd& y, const Identifiability& id,
                                 Solver method, bool keep_covariance) {
  const Eigen::Index n = k.cols();
  GradientEstimate est;
  est.method = method;
  est.identifiable = id.identifiable;
  est.g_hat = Eigen::MatrixXd::Zero(n, y.cols());
  if (keep_covariance) est.estimator_covariance = Eigen::MatrixXd::Zero(n, n);
  if (id.pivot_cols.empty()) return est;

  const Eigen::Index r = static_cast<Eigen::Index>(id.pivot_cols.size());
  Eigen::MatrixXd reduced(k.rows(), r);
  for (Eigen::Index c = 0; c < r; ++c) reduced.col(c) = k.col(id.pivot_cols[c]);
  LeastSquares ls = solve_full_rank(reduced, y);
  for (Eigen::Index c = 0; c < r; ++c) {
    est.g_hat.row(id.pivot_cols[c]) = ls.solution.row(c);
    if (keep_covariance) {
      for (Eigen::Index c2 = 0; c2 < r; ++c2) {
        est.estimator_covariance(id.pivot_cols[c], id.pivot_cols[c2]) = ls.covariance(c, c2);
      }
    }
  }
  return est;
}

void check_shapes(const KnowledgeMatrix& k, const Eigen::MatrixXd& y_hat) {
  if (y_hat.rows() != k.k.rows()) throw InvalidArgument("solve: observation rows do not match K");
}

}  // namespace

GradientEstimate ols_solve(const KnowledgeMatrix& k, const Eigen::MatrixXd& y_hat) {
  return ols_solve(k, y_hat, identifiability(k));
}

GradientEstimate ols_solve(const KnowledgeMatrix& k, const Eigen::MatrixXd& y_hat, const Identifiability& id) {
  check_shapes(k, y_hat);
  return solve_on_pivots(k.k, y_hat, id, Solver::kOls, false);
}

GradientEstimate gls_solve(const KnowledgeMatrix& k, const Eigen::MatrixXd& y_hat, const CovarianceMatrix& cov) {
  return gls_solve(k, y_hat, cov, identifiability(k));
}

GradientEstimate gls_solve(const KnowledgeMatrix& k, const Eigen::MatrixXd& y_hat, const CovarianceMatrix& cov,
                           const Identifiability& id) {
  check_shapes(k, y_hat);
  const Eigen::Index m = k.k.rows();
  if (cov.sigma_matrix.rows() != m || cov.sigma_matrix.cols() != m) {
    throw InvalidArgument("gls_solve: covariance does not match K");
  }
  const double trace = cov.sigma_matrix.trace();
  if (m == 0 || trace <= 0.0) return solve_on_pivots(k.k, y_hat, id, Solver::kOls, false);

  Eigen::LLT<Eigen::MatrixXd> llt(cov.sigma_matrix);
  if (llt.info() != Eigen::Success) {
    Eigen::MatrixXd jittered = cov.sigma_matrix;
    jittered.diagonal().array() += 1e-10 * trace / static_cast<double>(m);
    llt.compute(jittered);
    if (llt.info() != Eigen::Success) throw Error("gls_solve: covariance is not positive semidefinite");
  }
  Eigen::MatrixXd k_white = llt.matrixL().solve(k.k);
  Eigen::MatrixXd y_white = llt.matrixL().solve(y_hat);
  return solve_on_pivots(k_white, y_white, id, Solver::kGls, true);
}

Eigen::VectorXd ols_noise_amplification(const KnowledgeMatrix& k, const Identifiability& id) {
  const Eigen::Index n = k.k.cols();
  Eigen::VectorXd out = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());
  if (id.pivot_cols.empty()) return out;
  const Eigen::Index r = static_cast<Eigen::Index>(id.pivot_cols.size());
  Eigen::MatrixXd reduced(k.k.rows(), r);
  for (Eigen::Index c = 0; c < r; ++c) reduced.col(c) = k.k.col(id.pivot_cols[c]);
  LeastSquares ls = solve_full_rank(reduced, Eigen::MatrixXd::Zero(k.k.rows(), 1));
  for (Eigen::Index c = 0; c < r; ++c) {
    const int col = id.pivot_cols[c];
    if (id.identifiable[col]) out[col] = std::sqrt(ls.covariance(c, c));
  }
  return out;
}

GradientEstimate attack_dgd_pipeline(const DgdTrace& trace, const GossipMatrix& w, const AttackerSet& attackers,
                                     const AttackWindow& window, const DgdAttackOptions& options) {
  Observation obs = observe_dgd(trace, attackers, window.t0, window.iterations);
  BlockPartition blocks = partition_blocks(w, attackers);

  Eigen::MatrixXd theta0_targets;
  if (attackers.size() > 0) {
    Eigen::RowVectorXd start = obs.attacker_start.colwise().mean();
    theta0_targets = start.replicate(blocks.num_targets(), 1);
  } else {
    theta0_targets = Eigen::MatrixXd::Zero(blocks.num_targets(), obs.y.cols());
  }
  Eigen::MatrixXd y_hat = remove_attacker_contributions(obs, blocks, attackers, theta0_targets);

  KnowledgeMatrix km = build_knowledge_matrix_dgd(
      blocks, attackers, window.iterations,
      options.exact_identifiability ? NumericMode::kExact : NumericMode::kFloat);
  Identifiability id = identifiability(km);

  GradientEstimate est;
  if (options.method == Solver::kGls) {
    est = gls_solve(km, y_hat, build_covariance(blocks, attackers, window.iterations, options.sigma), id);
  } else {
    est = ols_solve(km, y_hat, id);
  }
  est.nodes.resize(blocks.num_targets());
  for (int i = 0; i < blocks.num_targets(); ++i) est.nodes[i] = blocks.target_node(i);
  return est;
}

ExactDgdResult attack_dgd_exact_synthetic(const GossipMatrix& w, const AttackerSet& attackers,
                                          const RationalMatrix& gradients, const std::vector<Rational>& theta0,
                                          int iterations) {
  const int n = w.size();
  const int d = gradients.cols();
  if (gradients.rows() != n || static_cast<int>(theta0.size()) != d) {
    throw InvalidArgument("attack_dgd_exact_synthetic: shape mismatch");
  }
  BlockPartition blocks = partition_blocks(w, attackers);
  const int nt = blocks.num_targets();
  const int na = attackers.size();

  // Exact D-GD. Columns of theta are propagated as row vectors (W symmetric).
  RationalMatrix theta(n, d);
  for (int v = 0; v < n; ++v)
    for (int j = 0; j < d; ++j) theta(v, j) = theta0[j];
  std::vector<RationalMatrix> half_steps;
  for (int t = 0; t < iterations; ++t) {
    RationalMatrix half = theta + gradients;
    for (int j = 0; j < d; ++j) {
      std::vector<Rational> column(n);
      for (int v = 0; v < n; ++v) column[v] = half(v, j);
      std::vector<Rational> mixed = w.times(column);
      for (int v = 0; v < n; ++v) theta(v, j) = mixed[v];
    }
    half_steps.push_back(std::move(half));
  }

  // Contribution removal with B^0 = theta0 for every target.
  std::vector<RowTag> rows = dgd_row_order(attackers, iterations);
  RationalMatrix y_hat(static_cast<int>(rows.size()), d);
  RationalMatrix b(nt, d);
  for (int i = 0; i < nt; ++i)
    for (int j = 0; j < d; ++j) b(i, j) = theta0[j];
  std::size_t row = 0;
  for (int t = 0; t < iterations; ++t) {
    for (; row < rows.size() && rows[row].t == t; ++row) {
      const int vt = blocks.target_index(rows[row].node);
      for (int j = 0; j < d; ++j) {
        y_hat(static_cast<int>(row), j) = half_steps[t](rows[row].node, j) - b(vt, j);
      }
    }
    RationalMatrix sent(na, d);
    for (int i = 0; i < na; ++i)
      for (int j = 0; j < d; ++j) sent(i, j) = half_steps[t](attackers.attackers()[i], j);
    b = blocks.exact_tt * b + (na > 0 ? blocks.exact_ta * sent : RationalMatrix(nt, d));
  }

  KnowledgeMatrix km = build_knowledge_matrix_dgd(blocks, attackers, iterations, NumericMode::kExact);
  Identifiability id = identifiability(km);

  ExactDgdResult result;
  result.g_hat = RationalMatrix(nt, d);
  result.identifiable = id.identifiable;
  for (int i = 0; i < nt; ++i) result.nodes.push_back(blocks.target_node(i));
  const int r = static_cast<int>(id.pivot_cols.size());
  if (r == 0) return result;
  RationalMatrix reduced(km.exact.rows(), r);
  for (int i = 0; i < km.exact.rows(); ++i)
    for (int c = 0; c < r; ++c) reduced(i, c) = km.exact(i, id.pivot_cols[c]);
  RationalMatrix reduced_t = reduced.transpose();
  RationalMatrix solution = solve_exact(reduced_t * reduced, reduced_t * y_hat);
  for (int c = 0; c < r; ++c)
    for (int j = 0; j < d; ++j) result.g_hat(id.pivot_cols[c], j) = solution(c, j);
  return result;
}

}  // namespace gossipleak
