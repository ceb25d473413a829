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

#include <gtest/gtest.h>

#include <cmath>

#include "crf/error.hpp"
#include "crf/scenarios.hpp"
#include "crf/solver.hpp"
#include "test_support.hpp"

namespace crf {
namespace {

using testing::sample;
using testing::two_pi;

SolverConfig newtonian(int d, int n, double dt, double t_end, double nu0 = 0.1) {
  SolverConfig c;
  c.d = d;
  c.n = n;
  c.dt = dt;
  c.t_end = t_end;
  c.model = {nu0, PowerLawIndex::constant(2.0)};
  return c;
}

SolverConfig variable(int d, int n, double dt, double t_end) {
  SolverConfig c = newtonian(d, n, dt, t_end, 0.05);
  c.model.index = PowerLawIndex::tanh_profile(2.0, 2.9, 0.5, 0.15);
  return c;
}

TEST(Regime, Thresholds) {
  auto r = compute_regime(2, 2.0, 2.9);
  EXPECT_TRUE(r.strong_regime);
  EXPECT_TRUE(r.unique_regime);
  r = compute_regime(3, 2.5, 3.0);
  EXPECT_TRUE(r.strong_regime);
  EXPECT_FALSE(r.unique_regime);
  r = compute_regime(2, 1.8, 2.0);
  EXPECT_FALSE(r.strong_regime);
  EXPECT_FALSE(r.unique_regime);
  // boundaries: 2p- = d+2 is strong; 2p+ = 3p- is not unique
  EXPECT_TRUE(compute_regime(3, 2.5, 2.5).strong_regime);
  EXPECT_FALSE(compute_regime(2, 2.0, 3.0).unique_regime);
  EXPECT_TRUE(compute_regime(3, 3.0, 3.49).unique_regime);
  EXPECT_FALSE(compute_regime(3, 3.0, 3.5).unique_regime);
  EXPECT_THROW(compute_regime(2, 1.0, 2.0), InvalidArgument);
  EXPECT_THROW(compute_regime(4, 2.0, 2.0), InvalidArgument);
}

TEST(Config, Validation) {
  SolverConfig c = newtonian(2, 16, 1e-3, 0.1);
  EXPECT_NO_THROW(c.validate());
  EXPECT_DOUBLE_EQ(c.q(), 6.0);
  EXPECT_DOUBLE_EQ(c.delta(), 4.5);
  EXPECT_EQ(c.steps(), 100);
  c.q_monitor = 4.0;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = newtonian(2, 15, 1e-3, 0.1);
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = newtonian(2, 16, -1e-3, 0.1);
  EXPECT_THROW(c.validate(), InvalidArgument);
}

TEST(InitialState, ProjectsAndDealiases) {
  const SolverConfig cfg = newtonian(2, 16, 1e-3, 0.0);
  const GridPtr g = make_grid(2, 16);
  const PhysicalField v0 = testing::random_field(g, Rank::vector, 3, 7);
  const PhysicalField c0 = testing::random_field(g, Rank::scalar, 4, 7);
  bool projected = false;
  const State s = make_initial_state(cfg, v0, c0, &projected);
  EXPECT_TRUE(projected);
  EXPECT_LT(divergence_ratio(s.v), 1e-14);
  EXPECT_EQ(mean(s.v, 0), 0.0);
  for (std::size_t k = 0; k < g->spectral_size(); ++k)
    if (3 * g->max_abs_frequency(k) > 16) {
      EXPECT_EQ(std::abs(s.c.component(0)[k]), 0.0);
    }
}

TEST(Concentration, SingleModeDecaysByImplicitFactor) {
  const SolverConfig cfg = newtonian(2, 16, 1e-3, 0.0);
  const GridPtr g = make_grid(2, 16);
  const PhysicalField c0 = sample(g, Rank::scalar, [](const std::array<double, 3>& x) {
    return std::array<double, 1>{0.3 + std::cos(two_pi * (x[0] + 2 * x[1]))};
  });
  State s = make_initial_state(cfg, PhysicalField(g, Rank::vector), c0);
  const SpectralField c1 = step_concentration(s, cfg, std::nullopt);
  const double k2 = 5 * two_pi * two_pi;
  for (std::size_t k = 0; k < g->spectral_size(); ++k) {
    const auto a = s.c.component(0)[k];
    if (std::abs(a) < 1e-12) continue;
    const double factor = (k == 0) ? 1.0 : 1.0 / (1.0 + cfg.dt * k2);
    EXPECT_NEAR(std::abs(c1.component(0)[k] / a - factor), 0.0, 1e-14);
  }
}

TEST(Concentration, MeanIsConservedUnderTransportAndFlux) {
  const SolverConfig cfg = newtonian(3, 16, 1e-2, 0.0);
  const GridPtr g = make_grid(3, 16);
  State s = make_initial_state(cfg, testing::random_field(g, Rank::vector, 1), testing::random_field(g, Rank::scalar, 2));
  const std::optional<SpectralField> gh = to_spectral(testing::random_field(g, Rank::vector, 3));
  const double m0 = mean(s.c);
  for (int i = 0; i < 5; ++i) s.c = step_concentration(s, cfg, gh);
  EXPECT_NEAR(mean(s.c), m0, 1e-14);
}

TEST(Velocity, NewtonianStokesModeDecaysExactly) {
  for (int d : {2, 3}) {
    SolverConfig cfg = newtonian(d, 16, 2e-3, 0.0, 0.3);
    ScenarioSpec spec;
    spec.kind = ScenarioKind::stokes_mode;
    spec.mode = {2, 1, d == 3 ? 1 : 0};
    const Scenario sc = build_scenario(cfg, spec);
    State s = make_initial_state(cfg, sc.v0, sc.c0);
    const VelocityStep step = step_velocity(s, s.c, cfg, std::nullopt);
    EXPECT_TRUE(step.stats.converged);
    EXPECT_EQ(step.stats.iterations, 1);
    EXPECT_DOUBLE_EQ(step.stats.nu_split, 0.3);
    const double k2 = (d == 3 ? 6.0 : 5.0) * two_pi * two_pi;
    const double factor = 1.0 / (1.0 + cfg.dt * 0.3 * k2);
    for (int i = 0; i < d; ++i)
      for (std::size_t k = 0; k < s.v.grid()->spectral_size(); ++k) {
        const auto a = s.v.component(i)[k];
        if (std::abs(a) < 1e-3) continue;
        EXPECT_NEAR(std::abs(step.v.component(i)[k] / a - factor), 0.0, 1e-12);
      }
  }
}

TEST(Velocity, AutomaticSplitIsNuZeroForNewtonian) {
  const StressModel m{0.7, PowerLawIndex::constant(2.0)};
  EXPECT_DOUBLE_EQ(automatic_split(m, 0.0), 0.7);
  EXPECT_DOUBLE_EQ(automatic_split(m, 100.0), 0.7);
  const StressModel v{0.7, PowerLawIndex::tanh_profile(2.0, 3.0, 0.0, 1.0)};
  EXPECT_GT(automatic_split(v, 10.0), 0.7);
}

TEST(Velocity, PicardContractsForVariableExponent) {
  SolverConfig cfg = variable(2, 32, 1e-3, 0.0);
  ScenarioSpec spec;
  spec.kind = ScenarioKind::synovial;
  const Scenario sc = build_scenario(cfg, spec);
  State s = make_initial_state(cfg, sc.v0, sc.c0);
  const VelocityStep step = step_velocity(s, s.c, cfg, std::nullopt);
  EXPECT_TRUE(step.stats.converged);
  EXPECT_GT(step.stats.iterations, 1);
  EXPECT_LT(step.stats.contraction, 1.0);
  EXPECT_LE(step.stats.last_update, cfg.picard_tol);
  EXPECT_LT(divergence_ratio(step.v), 1e-13);
}

TEST(Velocity, DivergingPicardThrows) {
  SolverConfig cfg = newtonian(2, 16, 0.05, 0.0, 1.0);
  cfg.model.index = PowerLawIndex::constant(4.0);
  cfg.split = ViscousSplit::constant;
  cfg.nu_split = 1.0;
  ScenarioSpec spec;
  spec.kind = ScenarioKind::taylor_green;
  spec.velocity_amplitude = 2.0;
  const Scenario sc = build_scenario(cfg, spec);
  State s = make_initial_state(cfg, sc.v0, sc.c0);
  EXPECT_THROW(step_velocity(s, s.c, cfg, std::nullopt), PicardFailure);
}

TEST(Pressure, TaylorGreenMatchesClassicalField) {
  const SolverConfig cfg = newtonian(2, 32, 1e-3, 0.0);
  ScenarioSpec spec;
  spec.kind = ScenarioKind::taylor_green;
  spec.velocity_amplitude = 0.8;
  const Scenario sc = build_scenario(cfg, spec);
  const State s = make_initial_state(cfg, sc.v0, sc.c0);
  const SpectralField pi = recover_pressure(s, cfg, std::nullopt);
  const PhysicalField expected = sample(s.v.grid(), Rank::scalar, [](const std::array<double, 3>& x) {
    return std::array<double, 1>{0.64 / 4 * (std::cos(2 * two_pi * x[0]) + std::cos(2 * two_pi * x[1]))};
  });
  EXPECT_LT(testing::max_abs_diff(to_physical(pi), expected), 1e-12);
  EXPECT_LT(pressure_consistency(s, cfg, std::nullopt, pi), 1e-12);
}

TEST(Run, RecordsAtCadenceAndIsDeterministic) {
  SolverConfig cfg = variable(2, 16, 1e-3, 0.02);
  cfg.cadence = 5;
  ScenarioSpec spec;
  spec.kind = ScenarioKind::synovial;
  spec.shear_forcing = 1.0;
  spec.source_flux = 0.5;
  const Scenario sc = build_scenario(cfg, spec);
  const RunResult a = run(cfg, sc.v0, sc.c0, sc.forcing);
  const RunResult b = run(cfg, sc.v0, sc.c0, sc.forcing);
  ASSERT_EQ(a.termination, Termination::completed);
  EXPECT_EQ(a.steps_taken, 20);
  ASSERT_EQ(a.records.size(), 5u);
  EXPECT_DOUBLE_EQ(a.records.back().t, 0.02);
  for (std::size_t i = 0; i < a.records.size(); ++i) EXPECT_EQ(a.records[i].values(), b.records[i].values());
}

TEST(Run, NewtonianTaylorGreenEnergyDecreases) {
  SolverConfig cfg = newtonian(2, 32, 1e-3, 0.1);
  ScenarioSpec spec;
  spec.kind = ScenarioKind::taylor_green;
  const Scenario sc = build_scenario(cfg, spec);
  const RunResult r = run(cfg, sc.v0, sc.c0, sc.forcing);
  ASSERT_EQ(r.termination, Termination::completed);
  for (std::size_t i = 1; i < r.records.size(); ++i) EXPECT_LT(r.records[i].kinetic, r.records[i - 1].kinetic);
}

TEST(Run, BlowUpKeepsLastValidState) {
  SolverConfig cfg = newtonian(2, 16, 1e-2, 0.2);
  cfg.blowup_threshold = 1e-3;
  ScenarioSpec spec;
  spec.kind = ScenarioKind::taylor_green;
  const Scenario sc = build_scenario(cfg, spec);
  const RunResult r = run(cfg, sc.v0, sc.c0, sc.forcing);
  EXPECT_EQ(r.termination, Termination::blowup);
  EXPECT_EQ(r.steps_taken, 0);
  EXPECT_EQ(r.final_state.t, 0.0);
  EXPECT_FALSE(r.message.empty());
}

TEST(Run, ZeroStateStaysZero) {
  const SolverConfig cfg = newtonian(2, 16, 1e-3, 0.01);
  ScenarioSpec spec;
  spec.kind = ScenarioKind::zero;
  spec.conc_mean = 0.0;
  const Scenario sc = build_scenario(cfg, spec);
  const RunResult r = run(cfg, sc.v0, sc.c0, sc.forcing);
  for (const auto& rec : r.records) {
    EXPECT_EQ(rec.kinetic, 0.0);
    EXPECT_EQ(rec.conc_l2, 0.0);
    EXPECT_EQ(rec.energy_residual, 0.0);
  }
}

TEST(Run, EnergyResidualIsFirstOrder) {
  // backward Euler leaves -|v+ - v|^2 / (2 dt) in the budget
  double prev = 0.0;
  for (double dt : {2e-3, 1e-3, 5e-4}) {
    SolverConfig cfg = newtonian(2, 16, dt, 2e-3);
    ScenarioSpec spec;
    spec.kind = ScenarioKind::taylor_green;
    const Scenario sc = build_scenario(cfg, spec);
    const RunResult r = run(cfg, sc.v0, sc.c0, sc.forcing);
    const double res = std::abs(r.records.back().energy_residual);
    if (prev > 0.0) {
      EXPECT_NEAR(prev / res, 2.0, 0.1);
    }
    prev = res;
  }
}

TEST(Termination, Names) {
  EXPECT_STREQ(to_string(Termination::completed), "completed");
  EXPECT_STREQ(to_string(Termination::blowup), "blowup");
  EXPECT_STREQ(to_string(Termination::picard_failure), "picard_failure");
}

}  // namespace
}  // namespace crf
