// Copyright 2026 The crf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "crf/scenarios.hpp"
#include "crf/solver.hpp"
#include "crf/spectral.hpp"

namespace {

using namespace crf;

PhysicalField wave(const GridPtr& g, Rank rank) {
  PhysicalField f(g, rank);
  for (int c = 0; c < f.components(); ++c) {
    auto comp = f.component(c);
    for (std::size_t x = 0; x < g->points(); ++x) {
      const auto p = g->point(x);
      comp[x] = std::sin(2 * std::numbers::pi * (p[0] + (c + 1) * p[1] + p[2]));
    }
  }
  return f;
}

void BM_ForwardTransform(benchmark::State& st) {
  const GridPtr g = make_grid(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
  const PhysicalField f = wave(g, Rank::vector);
  for (auto _ : st) benchmark::DoNotOptimize(to_spectral(f));
}
BENCHMARK(BM_ForwardTransform)->Args({2, 64})->Args({2, 256})->Args({3, 32})->Args({3, 64});

void BM_RoundTrip(benchmark::State& st) {
  const GridPtr g = make_grid(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
  const SpectralField f = to_spectral(wave(g, Rank::scalar));
  for (auto _ : st) benchmark::DoNotOptimize(to_spectral(to_physical(f)));
}
BENCHMARK(BM_RoundTrip)->Args({2, 128})->Args({3, 32});

void BM_LerayProject(benchmark::State& st) {
  const GridPtr g = make_grid(3, static_cast<int>(st.range(0)));
  const SpectralField v = to_spectral(wave(g, Rank::vector));
  for (auto _ : st) benchmark::DoNotOptimize(leray_project(v));
}
BENCHMARK(BM_LerayProject)->Arg(32);

void BM_SolverStep(benchmark::State& st) {
  SolverConfig cfg;
  cfg.d = static_cast<int>(st.range(0));
  cfg.n = static_cast<int>(st.range(1));
  cfg.dt = 5e-4;
  cfg.t_end = 0.0;
  cfg.model = {0.05, PowerLawIndex::tanh_profile(2.0, 2.9, 0.5, 0.15)};
  ScenarioSpec spec;
  spec.velocity_amplitude = 0.5;
  const Scenario sc = build_scenario(cfg, spec);
  const State s = make_initial_state(cfg, sc.v0, sc.c0);
  for (auto _ : st) {
    const SpectralField c1 = step_concentration(s, cfg, std::nullopt);
    benchmark::DoNotOptimize(step_velocity(s, c1, cfg, std::nullopt));
  }
}
BENCHMARK(BM_SolverStep)->Args({2, 64})->Args({3, 32})->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
