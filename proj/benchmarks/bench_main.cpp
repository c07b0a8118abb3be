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

#include <benchmark/benchmark.h>

#include "gossipleak/attack_avg.hpp"
#include "gossipleak/attack_dgd.hpp"
#include "gossipleak/experiments.hpp"
#include "gossipleak/graph.hpp"
#include "gossipleak/rref.hpp"

namespace gl = gossipleak;

namespace {

struct Fixture {
  gl::Graph graph;
  gl::GossipMatrix w;
  gl::AttackerSet attackers;
  int horizon;
};

Fixture er_fixture(int n) {
  gl::Graph g = gl::gen_erdos_renyi(n, 0.1, 7, true);
  gl::GossipMatrix w(g, gl::WeightScheme::kMetropolisHastings);
  gl::AttackerSet a(g, {0});
  const int t = gl::resolve_horizon(g, gl::kHorizonAuto);
  return {std::move(g), std::move(w), std::move(a), t};
}

void BM_RrefExact(benchmark::State& state) {
  const Fixture f = er_fixture(static_cast<int>(state.range(0)));
  const gl::KnowledgeMatrix k = gl::build_knowledge_matrix_avg(f.w, f.attackers, f.horizon, gl::NumericMode::kExact);
  for (auto _ : state) benchmark::DoNotOptimize(gl::rref(k, gl::NumericMode::kExact));
}
BENCHMARK(BM_RrefExact)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_RrefFloat(benchmark::State& state) {
  const Fixture f = er_fixture(static_cast<int>(state.range(0)));
  const gl::KnowledgeMatrix k = gl::build_knowledge_matrix_avg(f.w, f.attackers, f.horizon, gl::NumericMode::kFloat);
  for (auto _ : state) benchmark::DoNotOptimize(gl::rref(k, gl::NumericMode::kFloat));
}
BENCHMARK(BM_RrefFloat)->Arg(20)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_AuditExact(benchmark::State& state) {
  const Fixture f = er_fixture(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gl::audit_static(f.w, f.attackers, f.horizon, gl::NumericMode::kExact));
}
BENCHMARK(BM_AuditExact)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_AuditSaturated(benchmark::State& state) {
  const Fixture f = er_fixture(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gl::audit_saturated(f.w, f.attackers));
}
BENCHMARK(BM_AuditSaturated)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_DgdKnowledgeMatrix(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const gl::Graph g = gl::gen_line(n);
  const gl::GossipMatrix w(g, gl::WeightScheme::kMetropolisHastings);
  const gl::AttackerSet a(g, {0});
  const gl::BlockPartition blocks = gl::partition_blocks(w, a);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gl::build_knowledge_matrix_dgd(blocks, a, n + 2, gl::NumericMode::kFloat));
  }
}
BENCHMARK(BM_DgdKnowledgeMatrix)->Arg(31)->Arg(61)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
