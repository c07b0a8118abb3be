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

#include <algorithm>
#include <random>

#include "gossipleak/attack_avg.hpp"
#include "gossipleak/errors.hpp"
#include "gossipleak/protocol.hpp"
#include "gossipleak/rref.hpp"

namespace gl = gossipleak;

namespace {

// Textbook Gauss-Jordan over mpq, returning (RREF, pivot columns).
std::pair<gl::RationalMatrix, std::vector<int>> naive_rref(gl::RationalMatrix m) {
  std::vector<int> pivots;
  int row = 0;
  for (int c = 0; c < m.cols() && row < m.rows(); ++c) {
    int p = row;
    while (p < m.rows() && m(p, c) == 0) ++p;
    if (p == m.rows()) continue;
    for (int j = 0; j < m.cols(); ++j) std::swap(m(row, j), m(p, j));
    const gl::Rational lead = m(row, c);
    for (int j = 0; j < m.cols(); ++j) m(row, j) /= lead;
    for (int i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, c) == 0) continue;
      const gl::Rational f = m(i, c);
      for (int j = 0; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
    }
    pivots.push_back(c);
    ++row;
  }
  return {m, pivots};
}

Eigen::MatrixXd naive_power(const Eigen::MatrixXd& w, int t) {
  const Eigen::Index n = w.rows();
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(n, n);
  for (int s = 0; s < t; ++s) {
    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = 0; k < n; ++k) next(i, j) += out(i, k) * w(k, j);
    out = next;
  }
  return out;
}

std::vector<int> iota(int n) {
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = i;
  return v;
}

}  // namespace

TEST(Rref, IdentityAndDuplicateRow) {
  const gl::RrefDecomposition id = gl::rref_float(Eigen::MatrixXd::Identity(4, 4));
  EXPECT_EQ(id.u, Eigen::MatrixXd::Identity(4, 4));
  EXPECT_EQ(id.l, Eigen::MatrixXd::Identity(4, 4));

  Eigen::MatrixXd k(3, 3);
  k << 1, 2, 3, 0, 1, 4, 1, 2, 3;
  for (auto mode : {gl::NumericMode::kFloat, gl::NumericMode::kExact}) {
    const gl::RrefDecomposition d = mode == gl::NumericMode::kFloat
                                        ? gl::rref_float(k)
                                        : gl::rref_exact(gl::RationalMatrix::from_double(k));
    EXPECT_EQ(d.rank, 2);
    EXPECT_EQ(d.pivot_cols, (std::vector<int>{0, 1}));
    EXPECT_LE(d.u.row(2).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Rref, RandomRationalMatricesAgreeWithOracle) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> num(-6, 6), den(1, 7), kind(0, 3);
  for (int trial = 0; trial < 100; ++trial) {
    gl::RationalMatrix m(8, 6);
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 6; ++j) m(i, j) = gl::Rational(num(rng), den(rng));
    // Make a third of the matrices rank deficient in a column.
    if (kind(rng) == 0) {
      for (int i = 0; i < 8; ++i) m(i, 4) = m(i, 1) * 3 - m(i, 2);
    }
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 6; ++j) m(i, j).canonicalize();

    const auto [oracle_u, oracle_pivots] = naive_rref(m);
    const gl::RrefDecomposition exact = gl::rref_exact(m);
    EXPECT_EQ(exact.pivot_cols, oracle_pivots) << "trial " << trial;
    EXPECT_TRUE(exact.exact_u == oracle_u) << "trial " << trial;
    EXPECT_TRUE(exact.exact_l * m == exact.exact_u);

    const gl::RrefDecomposition flt = gl::rref_float(m.to_double());
    EXPECT_EQ(flt.pivot_cols, oracle_pivots) << "trial " << trial;
    const Eigen::MatrixXd k = m.to_double();
    EXPECT_LE((flt.l * k - flt.u).cwiseAbs().maxCoeff(), 1e-8 * k.cwiseAbs().maxCoeff());
  }
}

TEST(Rref, FloatSatisfiesRrefAxioms) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd k(7, 9);
  for (Eigen::Index i = 0; i < k.size(); ++i) k.data()[i] = normal(rng);
  k.row(6) = k.row(0) + 2 * k.row(3);
  const gl::RrefDecomposition d = gl::rref_float(k);
  EXPECT_EQ(d.rank, 6);
  int last = -1;
  for (int r = 0; r < d.rank; ++r) {
    const int c = d.pivot_cols[r];
    EXPECT_GT(c, last);
    last = c;
    EXPECT_NEAR(d.u(r, c), 1.0, 1e-12);
    for (int i = 0; i < d.u.rows(); ++i)
      if (i != r) EXPECT_NEAR(d.u(i, c), 0.0, 1e-12);
    for (int j = 0; j < c; ++j) EXPECT_NEAR(d.u(r, j), 0.0, 1e-12);
  }
}

TEST(RowReducer, MatchesExactRref) {
  const gl::Graph g = gl::gen_erdos_renyi(15, 0.25, 8);
  const gl::GossipMatrix w(g, gl::WeightScheme::kMetropolisHastings);
  const gl::KnowledgeMatrix k = gl::build_knowledge_matrix_avg(w, gl::AttackerSet(g, {0}), 6, gl::NumericMode::kExact);
  gl::ExactRowReducer reducer(k.num_cols());
  for (int r = 0; r < k.num_rows(); ++r) reducer.add_row(k.exact.row(r));
  const gl::RrefDecomposition d = gl::rref_exact(k.exact);
  EXPECT_EQ(reducer.rank(), d.rank);
  EXPECT_EQ(reducer.pivots(), d.pivot_cols);
  EXPECT_EQ(reducer.one_hot_columns(), gl::classify_reconstructible(d));
}

TEST(KnowledgeMatrix, RowsFollowTheProtocol) {
  const gl::Graph g = gl::gen_erdos_renyi(12, 0.3, 11);
  const gl::GossipMatrix w(g, gl::WeightScheme::kMetropolisHastings);
  const gl::AttackerSet set(g, {0, 5});
  const int horizon = 4;
  const gl::KnowledgeMatrix k = gl::build_knowledge_matrix_avg(w, set, horizon, gl::NumericMode::kExact);
  const auto& nb = set.neighbors();
  ASSERT_EQ(k.num_rows(), 2 + horizon * static_cast<int>(nb.size()));
  EXPECT_EQ(k.rows, gl::averaging_row_order(set, horizon));
  EXPECT_EQ(k.k.row(0), Eigen::RowVectorXd::Unit(12, 0));
  EXPECT_EQ(k.k.row(1), Eigen::RowVectorXd::Unit(12, 5));
  int r = 2;
  for (int t = 0; t < horizon; ++t) {
    const Eigen::MatrixXd power = naive_power(w.weights(), t);
    for (gl::NodeId v : nb) {
      EXPECT_LE((k.k.row(r) - power.row(v)).cwiseAbs().maxCoeff(), 1e-14) << "t=" << t << " v=" << v;
      ++r;
    }
  }
  EXPECT_TRUE(k.exact.to_double().isApprox(k.k, 1e-14));
}

TEST(KnowledgeMatrix, SingleRoundIsOneHot) {
  const gl::Graph g = gl::gen_erdos_renyi(10, 0.4, 2);
  const gl::GossipMatrix w(g, gl::WeightScheme::kMetropolisHastings);
  const gl::AttackerSet set(g, {3});
  const gl::KnowledgeMatrix k = gl::build_knowledge_matrix_avg(w, set, 1);
  EXPECT_EQ(k.num_rows(), 1 + static_cast<int>(set.neighbors().size()));
  for (int r = 0; r < k.num_rows(); ++r) EXPECT_EQ(k.k.row(r).sum(), 1.0);
  EXPECT_THROW(gl::build_knowledge_matrix_avg(w, set, 0), gl::InvalidArgument);
}

TEST(Classify, SmallGraphs) {
  const gl::Graph complete = gl::gen_complete(6);
  EXPECT_EQ(gl::audit_static(gl::GossipMatrix(complete, gl::WeightScheme::kMetropolisHastings),
                             gl::AttackerSet(complete, {2}), 1)
                .reconstructible,
            iota(6));

  const gl::Graph path = gl::gen_line(3);
  EXPECT_EQ(gl::audit_static(gl::GossipMatrix(path, gl::WeightScheme::kMetropolisHastings),
                             gl::AttackerSet(path, {0}), 2)
                .reconstructible,
            iota(3));
}

TEST(Classify, StarLeafAttackerOnlySeesCenterAndSum) {
  const gl::Graph star = gl::gen_star(7);
  const gl::GossipMatrix w(star, gl::WeightScheme::kMetropolisHastings);
  const gl::AttackerSet set(star, {3});
  for (int horizon : {1, 2, 5, 12}) {
    EXPECT_EQ(gl::audit_static(w, set, horizon).reconstructible, (std::vector<gl::NodeId>{0, 3}));
  }

  Eigen::MatrixXd x(7, 1);
  x << 0.5, -1.0, 2.0, 7.0, 0.25, 3.0, -4.0;
  const int horizon = 6;
  const gl::GossipTrace trace = gl::run_gossip_averaging(w, x, horizon);
  const gl::Observation obs = gl::observe_averaging(trace, set, horizon);
  const gl::KnowledgeMatrix k = gl::build_knowledge_matrix_avg(w, set, horizon, gl::NumericMode::kExact);
  const gl::ReconstructionReport rep = gl::reconstruct_values(gl::rref(k, gl::NumericMode::kExact), obs.y, &x);
  ASSERT_EQ(rep.residual_relations.size(), 1u);
  const auto& rel = rep.residual_relations.front();
  // The remaining relation weighs every other leaf equally.
  const double c = rel.coefficients[1];
  EXPECT_NE(c, 0.0);
  for (int leaf : {1, 2, 4, 5, 6}) EXPECT_NEAR(rel.coefficients[leaf], c, 1e-12);
  const double leaf_sum = x(1, 0) + x(2, 0) + x(4, 0) + x(5, 0) + x(6, 0);
  EXPECT_NEAR(rel.value[0] / c, leaf_sum, 1e-8);
}

TEST(Reconstruct, RecoversValuesOnRandomGraph) {
  const gl::Graph g = gl::gen_erdos_renyi(20, 0.2, 77, true);
  const gl::GossipMatrix w(g, gl::WeightScheme::kMetropolisHastings);
  const gl::AttackerSet set(g, {4});
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd x(20, 3);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = normal(rng);
  const gl::GossipTrace trace = gl::run_gossip_averaging(w, x, 20);
  const gl::Observation obs = gl::observe_averaging(trace, set, 20);
  for (auto mode : {gl::NumericMode::kExact, gl::NumericMode::kFloat}) {
    const gl::KnowledgeMatrix k = gl::build_knowledge_matrix_avg(w, set, 20, mode);
    EXPECT_EQ(k.rows, obs.rows);
    const gl::ReconstructionReport rep = gl::reconstruct_values(gl::rref(k, mode), obs.y, &x);
    EXPECT_FALSE(rep.reconstructible.empty());
    EXPECT_TRUE(std::binary_search(rep.reconstructible.begin(), rep.reconstructible.end(), 4));
    for (double e : rep.errors) EXPECT_LE(e, 1e-8);
    for (const auto& rel : rep.residual_relations) {
      EXPECT_LE((rel.coefficients * x - rel.value).cwiseAbs().maxCoeff(), 1e-8);
    }
  }
}

TEST(Reconstruct, AttackersOwnValuesExact) {
  const gl::Graph g = gl::gen_line(6);
  const gl::GossipMatrix w(g, gl::WeightScheme::kMetropolisHastings);
  const gl::AttackerSet set(g, {2});
  Eigen::MatrixXd x = Eigen::MatrixXd::Random(6, 2);
  const gl::Observation obs = gl::observe_averaging(gl::run_gossip_averaging(w, x, 3), set, 3);
  EXPECT_EQ(obs.y.row(0), x.row(2));
  EXPECT_EQ(obs.y.row(1), x.row(1));  // t = 0 rows are raw inputs
  const gl::KnowledgeMatrix k = gl::build_knowledge_matrix_avg(w, set, 3);
  EXPECT_THROW(gl::reconstruct_values(gl::rref(k, gl::NumericMode::kFloat), obs.y.topRows(2)), gl::InvalidArgument);
}

TEST(Audit, MonotoneRankAndSets) {
  for (int s = 0; s < 10; ++s) {
    const gl::Graph g = gl::gen_erdos_renyi(25, 0.12, 300 + s);
    const gl::GossipMatrix w(g, gl::WeightScheme::kMetropolisHastings);
    const gl::AttackerSet set(g, {0});
    const gl::AuditResult full = gl::audit_static(w, set, 12);
    ASSERT_EQ(full.rank_profile.size(), 12u);
    EXPECT_TRUE(std::is_sorted(full.rank_profile.begin(), full.rank_profile.end()));
    std::vector<gl::NodeId> previous;
    for (int t = 1; t <= 12; ++t) {
      const gl::AuditResult a = gl::audit_static(w, set, t);
      EXPECT_TRUE(std::includes(a.reconstructible.begin(), a.reconstructible.end(), previous.begin(), previous.end()));
      EXPECT_EQ(a.rank_profile.back(), full.rank_profile[t - 1]);
      if (a.rank_profile.back() == 25) EXPECT_EQ(a.reconstructible, iota(25));
      previous = a.reconstructible;
    }
  }
}

TEST(Audit, SaturationMatchesLongHorizon) {
  for (int s = 0; s < 8; ++s) {
    const gl::Graph g = gl::gen_random_geometric(30, 0.25, 40 + s);
    const gl::GossipMatrix w(g, gl::WeightScheme::kMetropolisHastings);
    const gl::AttackerSet set(g, {s});
    const gl::AuditResult sat = gl::audit_saturated(w, set);
    EXPECT_TRUE(sat.saturated);
    EXPECT_EQ(sat.reconstructible, gl::audit_static(w, set, 40).reconstructible);
  }
}

TEST(Audit, StaticMatchesDataDrivenAttack) {
  const gl::Graph g = gl::gen_erdos_renyi(18, 0.2, 19);
  const gl::GossipMatrix w(g, gl::WeightScheme::kMetropolisHastings);
  const gl::AttackerSet set(g, {1, 9});
  const gl::AuditResult a = gl::audit_static(w, set, 7);
  const Eigen::MatrixXd x = Eigen::MatrixXd::Random(18, 1);
  const gl::Observation obs = gl::observe_averaging(gl::run_gossip_averaging(w, x, 7), set, 7);
  const gl::KnowledgeMatrix k = gl::build_knowledge_matrix_avg(w, set, 7, gl::NumericMode::kExact);
  EXPECT_EQ(gl::reconstruct_values(gl::rref(k, gl::NumericMode::kExact), obs.y).reconstructible, a.reconstructible);
}

TEST(Audit, FractionExcludesAttackers) {
  const gl::Graph g = gl::gen_complete(5);
  const gl::AttackerSet set(g, {0, 1});
  EXPECT_DOUBLE_EQ(gl::reconstructed_fraction({0, 1, 2, 3, 4}, set), 1.0);
  EXPECT_DOUBLE_EQ(gl::reconstructed_fraction({0, 1, 2}, set), 1.0 / 3.0);
}
