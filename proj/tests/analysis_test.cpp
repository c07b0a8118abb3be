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

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>

#include "gossipleak/analysis.hpp"
#include "gossipleak/errors.hpp"

namespace gl = gossipleak;

namespace {

// Pair-count tau-b.
double brute_kendall(const std::vector<double>& x, const std::vector<double>& y) {
  double concordant = 0, discordant = 0, tie_x = 0, tie_y = 0;
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = x[i] - x[j], dy = y[i] - y[j];
      if (dx == 0 && dy == 0) continue;
      if (dx == 0) {
        ++tie_x;
      } else if (dy == 0) {
        ++tie_y;
      } else if (dx * dy > 0) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  return (concordant - discordant) / std::sqrt((concordant + discordant + tie_x) * (concordant + discordant + tie_y));
}

std::vector<std::vector<int>> floyd_warshall(const gl::Graph& g) {
  const int n = g.num_nodes();
  const int inf = 1 << 28;
  std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
  for (int v = 0; v < n; ++v) d[v][v] = 0;
  for (auto [u, v] : g.edges()) d[u][v] = d[v][u] = 1;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  for (auto& row : d)
    for (int& x : row)
      if (x >= inf) x = gl::kUnreachable;
  return d;
}

Eigen::MatrixXd adjacency(const gl::Graph& g) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(g.num_nodes(), g.num_nodes());
  for (auto [u, v] : g.edges()) a(u, v) = a(v, u) = 1.0;
  return a;
}

}  // namespace

TEST(Centrality, SymmetricTriangle) {
  const gl::CentralityProfile c = gl::centralities(gl::gen_complete(3));
  for (int v = 1; v < 3; ++v) {
    EXPECT_NEAR(c.degree[v], c.degree[0], 1e-12);
    EXPECT_NEAR(c.eigenvector[v], c.eigenvector[0], 1e-9);
    EXPECT_NEAR(c.betweenness[v], c.betweenness[0], 1e-12);
  }
  EXPECT_DOUBLE_EQ(c.degree[0], 1.0);
}

TEST(Centrality, PathBetweenness) {
  const std::vector<double> b = gl::betweenness_centrality(gl::gen_line(3));
  EXPECT_DOUBLE_EQ(b[1], 1.0);
  EXPECT_DOUBLE_EQ(b[0], 0.0);
  EXPECT_DOUBLE_EQ(b[2], 0.0);
}

TEST(Centrality, BetweennessMatchesPathCounting) {
  const gl::Graph g = gl::gen_erdos_renyi(14, 0.3, 8, true);
  const int n = g.num_nodes();
  const auto d = floyd_warshall(g);
  // sigma[s][t]: number of shortest paths, by dynamic programming on distance.
  std::vector<std::vector<double>> sigma(n, std::vector<double>(n, 0.0));
  for (int s = 0; s < n; ++s) {
    std::vector<int> order(n);
    for (int v = 0; v < n; ++v) order[v] = v;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return d[s][a] < d[s][b]; });
    sigma[s][s] = 1;
    for (int v : order) {
      if (v == s) continue;
      for (int u : g.neighbors(v))
        if (d[s][u] + 1 == d[s][v]) sigma[s][v] += sigma[s][u];
    }
  }
  const std::vector<double> b = gl::betweenness_centrality(g);
  for (int v = 0; v < n; ++v) {
    double total = 0.0;
    for (int s = 0; s < n; ++s) {
      for (int t = s + 1; t < n; ++t) {
        if (s == v || t == v) continue;
        if (d[s][v] + d[v][t] == d[s][t]) total += sigma[s][v] * sigma[v][t] / sigma[s][t];
      }
    }
    EXPECT_NEAR(b[v], total / ((n - 1) * (n - 2) / 2.0), 1e-12) << v;
  }
}

TEST(Centrality, StarCenterDominatesEigenvector) {
  const gl::Graph star = gl::gen_star(6);
  const std::vector<double> ev = gl::eigenvector_centrality(star);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(adjacency(star));
  Eigen::VectorXd lead = solver.eigenvectors().col(solver.eigenvectors().cols() - 1).cwiseAbs();
  lead.normalize();
  for (int v = 0; v < 6; ++v) EXPECT_NEAR(ev[v], lead[v], 1e-8);
  for (int v = 1; v < 6; ++v) EXPECT_GT(ev[0], ev[v]);
}

TEST(Centrality, EigenvectorResidual) {
  const gl::Graph g = gl::gen_erdos_renyi(30, 0.2, 3, true);
  const std::vector<double> ev = gl::eigenvector_centrality(g);
  const Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(ev.data(), 30);
  const Eigen::VectorXd av = adjacency(g) * v;
  const double lambda = v.dot(av);
  EXPECT_LE((av - lambda * v).norm(), 1e-8 * lambda);
  EXPECT_NEAR(v.norm(), 1.0, 1e-12);
  EXPECT_GE(v.minCoeff(), 0.0);
}

TEST(Centrality, DisconnectedGraphUsesLargestComponent) {
  const gl::Graph g(6, {{0, 1}, {1, 2}, {2, 0}, {3, 4}});
  bool flag = false;
  const std::vector<double> ev = gl::eigenvector_centrality(g, 1e-10, 10000, &flag);
  EXPECT_TRUE(flag);
  EXPECT_EQ(ev[3], 0.0);
  EXPECT_EQ(ev[5], 0.0);
  EXPECT_GT(ev[0], 0.0);
}

TEST(Correlation, SpearmanBasics) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  EXPECT_NEAR(*gl::spearman(x, {2, 4, 8, 16, 32}), 1.0, 1e-12);
  EXPECT_NEAR(*gl::spearman(x, {5, 4, 3, 2, 1}), -1.0, 1e-12);
  EXPECT_FALSE(gl::spearman(x, {1, 1, 1, 1, 1}).has_value());
  EXPECT_THROW(gl::spearman({1, 2}, {1, 2}), gl::InvalidArgument);
  EXPECT_THROW(gl::spearman({1, 2, 3}, {1, 2}), gl::InvalidArgument);
}

TEST(Correlation, SpearmanWithTiesByHand) {
  // Mid-ranks: x -> 1, 2.5, 2.5, 4, 5 ; y -> 2, 1, 4, 4, 4.
  const std::vector<double> x{10, 20, 20, 30, 40};
  const std::vector<double> y{2, 1, 7, 7, 7};
  EXPECT_EQ(gl::mid_ranks(x), (std::vector<double>{1, 2.5, 2.5, 4, 5}));
  const std::vector<double> rx{1, 2.5, 2.5, 4, 5}, ry{2, 1, 4, 4, 4};
  const double mx = 3, my = 3;
  double sxy = 0, sxx = 0, syy = 0;
  for (int i = 0; i < 5; ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  EXPECT_NEAR(*gl::spearman(x, y), sxy / std::sqrt(sxx * syy), 1e-12);
}

TEST(Correlation, KendallAgainstPairCounts) {
  EXPECT_NEAR(*gl::kendall({1, 2, 3, 4}, {1, 3, 5, 7}), 1.0, 1e-12);
  EXPECT_NEAR(*gl::kendall({1, 2, 3, 4}, {4, 3, 2, 1}), -1.0, 1e-12);
  const std::vector<double> x{1, 2, 2, 4, 5}, y{3, 1, 4, 1, 5};
  EXPECT_NEAR(*gl::kendall(x, y), brute_kendall(x, y), 1e-12);

  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> small(0, 4);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> a(12), b(12);
    for (int i = 0; i < 12; ++i) {
      a[i] = small(rng);
      b[i] = small(rng);
    }
    const auto tau = gl::kendall(a, b);
    ASSERT_TRUE(tau.has_value());
    EXPECT_NEAR(*tau, brute_kendall(a, b), 1e-12);
    EXPECT_GE(*tau, -1.0);
    EXPECT_LE(*tau, 1.0);
  }
  EXPECT_FALSE(gl::kendall({1, 2, 3}, {0, 0, 0}).has_value());
}

TEST(Correlation, InvariantUnderMonotoneMaps) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  std::vector<double> a(40), b(40), ea(40), cb(40);
  for (int i = 0; i < 40; ++i) {
    a[i] = normal(rng);
    b[i] = a[i] + normal(rng);
    ea[i] = std::exp(a[i]);
    cb[i] = b[i] * b[i] * b[i];
  }
  EXPECT_NEAR(*gl::spearman(a, b), *gl::spearman(ea, cb), 1e-12);
  EXPECT_NEAR(*gl::kendall(a, b), *gl::kendall(ea, cb), 1e-12);
}

TEST(Paths, BfsMatchesFloydWarshall) {
  const gl::Graph line = gl::gen_line(31);
  const std::vector<int> d = gl::shortest_path_lengths(line, 0);
  for (int k = 0; k < 31; ++k) EXPECT_EQ(d[k], k);

  for (int s = 0; s < 5; ++s) {
    const gl::Graph g = gl::gen_erdos_renyi(30, 0.07, 90 + s);
    const auto oracle = floyd_warshall(g);
    for (int src = 0; src < 30; ++src) EXPECT_EQ(gl::shortest_path_lengths(g, src), oracle[src]);
  }
}

TEST(Communicability, ClosedForms) {
  EXPECT_TRUE(gl::communicability(gl::Graph(4, {})).isApprox(Eigen::MatrixXd::Identity(4, 4)));
  const Eigen::MatrixXd c = gl::communicability(gl::gen_line(2));
  EXPECT_NEAR(c(0, 0), std::cosh(1.0), 1e-10);
  EXPECT_NEAR(c(1, 1), std::cosh(1.0), 1e-10);
  EXPECT_NEAR(c(0, 1), std::sinh(1.0), 1e-10);
  EXPECT_THROW(gl::communicability(gl::gen_line(10), 5), gl::InvalidArgument);
}

TEST(Communicability, MatchesTaylorSeries) {
  const gl::Graph g = gl::gen_erdos_renyi(15, 0.15, 4);
  const Eigen::MatrixXd a = adjacency(g);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
  ASSERT_LE(eig.eigenvalues().cwiseAbs().maxCoeff(), 4.0);
  Eigen::MatrixXd series = Eigen::MatrixXd::Identity(15, 15);
  Eigen::MatrixXd term = series;
  for (int k = 1; k <= 20; ++k) {
    term = term * a / k;
    series += term;
  }
  const Eigen::MatrixXd c = gl::communicability(g);
  EXPECT_LE((c - series).cwiseAbs().maxCoeff(), 1e-8 * series.cwiseAbs().maxCoeff());
  EXPECT_LE((c - c.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  // exp(A) from the eigen-decomposition as a second oracle.
  const Eigen::MatrixXd spectral =
      eig.eigenvectors() * eig.eigenvalues().array().exp().matrix().asDiagonal() * eig.eigenvectors().transpose();
  EXPECT_LE((c - spectral).cwiseAbs().maxCoeff(), 1e-10 * spectral.cwiseAbs().maxCoeff());
}

TEST(Leakage, PerfectScoresCorrelatePerfectly) {
  std::vector<gl::AttackerScores> scores;
  std::vector<double> fractions;
  for (int i = 0; i < 10; ++i) {
    scores.push_back({i * 0.1, i * 0.1, i * 0.1});
    fractions.push_back(i * 0.1);
  }
  const gl::CentralityCorrelation c = gl::correlate_scores(scores, fractions);
  EXPECT_NEAR(*c.degree, 1.0, 1e-12);
  EXPECT_NEAR(*c.eigenvector, 1.0, 1e-12);
  EXPECT_NEAR(*c.betweenness, 1.0, 1e-12);
}

TEST(Leakage, AuditAndRelationshipsOnSmallSample) {
  std::vector<gl::LeakageSample> samples;
  for (int s = 0; s < 12; ++s) {
    samples.push_back({std::make_shared<const gl::Graph>(gl::gen_erdos_renyi(20, 0.15, 700 + s, true)), 0});
  }
  const auto obs = gl::audit_samples(samples, 3);
  ASSERT_EQ(obs.size(), 12u);
  for (std::size_t i = 0; i < obs.size(); ++i) {
    EXPECT_EQ(obs[i].iterations, 3);
    EXPECT_GE(obs[i].fraction, 0.0);
    EXPECT_LE(obs[i].fraction, 1.0);
    // Direct neighbours are always recovered.
    for (int v : samples[i].graph->neighbors(0)) EXPECT_TRUE(obs[i].reconstructed[v]);
  }
  const gl::RelationshipCorrelation r = gl::correlate_relationships(samples, obs);
  EXPECT_GT(r.shortest_path.samples_used, 0);
  EXPECT_LT(r.shortest_path.mean, 0.0);
  const gl::CentralityCorrelation c = gl::correlate_centrality_vs_leakage(samples, obs);
  ASSERT_TRUE(c.degree.has_value());
  EXPECT_GT(*c.degree, 0.0);
}
