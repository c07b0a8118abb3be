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

#include "gossipleak/attack_avg.hpp"

#include <algorithm>

#include "gossipleak/errors.hpp"

namespace gossipleak {

KnowledgeMatrix build_knowledge_matrix_avg(const GossipMatrix& w, const AttackerSet& attackers,
                                           int iterations, NumericMode mode) {
  if (iterations < 1) throw InvalidArgument("knowledge matrix: need at least one iteration");
  const int n = w.size();
  const auto& neighbors = attackers.neighbors();
  const int na = attackers.size();
  const int nn = static_cast<int>(neighbors.size());
  const int m = na + iterations * nn;

  KnowledgeMatrix km;
  km.rows = averaging_row_order(attackers, iterations);
  km.k = Eigen::MatrixXd::Zero(m, n);
  const bool exact = mode == NumericMode::kExact;
  km.built_exact = exact;
  if (exact) km.exact = RationalMatrix(m, n);

  for (int i = 0; i < na; ++i) {
    km.k(i, attackers.attackers()[i]) = 1.0;
    if (exact) km.exact(i, attackers.attackers()[i]) = 1;
  }

  // W is symmetric, so W^t[v, :] = e_v^T W^t.
  std::vector<Eigen::RowVectorXd> power(nn, Eigen::RowVectorXd::Zero(n));
  std::vector<std::vector<Rational>> exact_power;
  for (int j = 0; j < nn; ++j) power[j][neighbors[j]] = 1.0;
  if (exact) {
    exact_power.assign(nn, std::vector<Rational>(n));
    for (int j = 0; j < nn; ++j) exact_power[j][neighbors[j]] = 1;
  }
  for (int t = 0; t < iterations; ++t) {
    for (int j = 0; j < nn; ++j) {
      const int row = na + t * nn + j;
      if (exact) {
        km.exact.set_row(row, exact_power[j]);
        for (int c = 0; c < n; ++c) km.k(row, c) = exact_power[j][c].get_d();
      } else {
        km.k.row(row) = power[j];
      }
    }
    if (t + 1 == iterations) break;
    for (int j = 0; j < nn; ++j) {
      if (exact) {
        exact_power[j] = w.times(exact_power[j]);
      } else {
        power[j] = w.times(power[j]);
      }
    }
  }
  return km;
}

RrefDecomposition rref(const KnowledgeMatrix& k, NumericMode mode, bool with_transform) {
  if (mode == NumericMode::kFloat) return rref_float(k.k, kPivotTolerance, with_transform);
  if (!k.has_exact()) throw InvalidArgument("rref: exact mode needs a knowledge matrix built exactly");
  return rref_exact(k.exact, with_transform);
}

std::vector<NodeId> classify_reconstructible(const RrefDecomposition& dec) {
  return one_hot_columns(dec, kOneHotTolerance);
}

std::vector<NodeId> numerically_leaked(const RrefDecomposition& dec) {
  if (dec.mode == NumericMode::kExact) return {};
  std::vector<int> strict = one_hot_columns(dec, kOneHotTolerance);
  std::vector<int> loose = one_hot_columns(dec, kNearOneHotTolerance);
  std::vector<NodeId> out;
  std::set_difference(loose.begin(), loose.end(), strict.begin(), strict.end(), std::back_inserter(out));
  return out;
}

ReconstructionReport reconstruct_values(const RrefDecomposition& dec, const Eigen::MatrixXd& y,
                                        const Eigen::MatrixXd* truth) {
  if (!dec.has_transform()) throw InvalidArgument("reconstruct_values: decomposition lacks L");
  if (y.rows() != dec.l.cols()) throw InvalidArgument("reconstruct_values: dimension mismatch");

  Eigen::MatrixXd ly;
  if (dec.mode == NumericMode::kExact) {
    // L can have huge entries; form L Y exactly before rounding.
    RationalMatrix exact_y = RationalMatrix::from_double(y);
    ly = (dec.exact_l.block(0, 0, dec.rank, dec.exact_l.cols()) * exact_y).to_double();
  } else {
    ly = dec.l.topRows(dec.rank) * y;
  }

  ReconstructionReport report;
  report.reconstructible = classify_reconstructible(dec);
  report.numerically_leaked = numerically_leaked(dec);
  report.values.resize(static_cast<Eigen::Index>(report.reconstructible.size()), y.cols());
  std::size_t next = 0;
  for (int r = 0; r < dec.rank; ++r) {
    const int pivot = dec.pivot_cols[r];
    if (next < report.reconstructible.size() && report.reconstructible[next] == pivot) {
      report.values.row(static_cast<Eigen::Index>(next)) = ly.row(r);
      if (truth != nullptr) {
        report.errors.push_back((ly.row(r) - truth->row(pivot)).cwiseAbs().maxCoeff());
      }
      ++next;
    } else {
      report.residual_relations.push_back({dec.u.row(r), ly.row(r)});
    }
  }
  return report;
}

namespace {

AuditResult audit_exact(const GossipMatrix& w, const AttackerSet& attackers, int iterations,
                        bool stop_at_saturation) {
  const int n = w.size();
  const auto& neighbors = attackers.neighbors();
  AuditResult result;
  result.mode = NumericMode::kExact;

  ExactRowReducer reducer(n);
  for (NodeId a : attackers.attackers()) {
    std::vector<Rational> row(n);
    row[a] = 1;
    reducer.add_row(row);
  }
  std::vector<std::vector<Rational>> power(neighbors.size(), std::vector<Rational>(n));
  for (std::size_t j = 0; j < neighbors.size(); ++j) power[j][neighbors[j]] = 1;

  for (int t = 0; t < iterations; ++t) {
    if (result.saturated) {
      result.rank_profile.push_back(reducer.rank());
      continue;
    }
    bool grew = false;
    for (auto& row : power) {
      if (reducer.rank() < n && reducer.add_row(row)) grew = true;
    }
    result.rank_profile.push_back(reducer.rank());
    // A round with no new rank (or full rank) means the row space is
    // W-invariant: it already contains e_v for every v in N(A), and W maps
    // e_a (a in A) into span{e_A, e_N(A)}.
    if (!grew || reducer.rank() == n) {
      result.saturated = true;
      result.saturation_iteration = t + (grew ? 1 : 0);
      if (stop_at_saturation) break;
      continue;
    }
    if (t + 1 < iterations) {
      for (auto& row : power) row = w.times(row);
    }
  }
  result.iterations = static_cast<int>(result.rank_profile.size());
  result.reconstructible = reducer.one_hot_columns();
  return result;
}

}  // namespace

AuditResult audit_static(const GossipMatrix& w, const AttackerSet& attackers, int iterations,
                         NumericMode mode) {
  if (iterations < 1) throw InvalidArgument("audit_static: need at least one iteration");
  if (mode == NumericMode::kExact) return audit_exact(w, attackers, iterations, false);

  AuditResult result;
  result.mode = NumericMode::kFloat;
  result.iterations = iterations;
  KnowledgeMatrix km = build_knowledge_matrix_avg(w, attackers, iterations, NumericMode::kFloat);
  const int na = attackers.size();
  const int nn = static_cast<int>(attackers.neighbors().size());
  for (int t = 1; t <= iterations; ++t) {
    RrefDecomposition prefix = rref_float(km.k.topRows(na + t * nn), kPivotTolerance, false);
    result.rank_profile.push_back(prefix.rank);
    if (t == iterations) {
      result.reconstructible = classify_reconstructible(prefix);
      result.numerically_leaked = numerically_leaked(prefix);
    }
  }
  return result;
}

AuditResult audit_saturated(const GossipMatrix& w, const AttackerSet& attackers, int max_iterations) {
  if (max_iterations < 0) max_iterations = std::max(1, w.size());
  return audit_exact(w, attackers, max_iterations, true);
}

double reconstructed_fraction(const std::vector<NodeId>& reconstructible, const AttackerSet& attackers) {
  const int targets = attackers.num_nodes() - attackers.size();
  if (targets == 0) return 1.0;
  int hits = 0;
  for (NodeId v : reconstructible) {
    if (!attackers.contains(v)) ++hits;
  }
  return static_cast<double>(hits) / targets;
}

}  // namespace gossipleak
