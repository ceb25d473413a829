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
#include <limits>

#include "crf/diagnostics.hpp"
#include "crf/error.hpp"
#include "crf/solver.hpp"
#include "test_support.hpp"

namespace crf {
namespace {

using testing::sample;
using testing::two_pi;
constexpr double pi = std::numbers::pi;

PhysicalField constant_field(const GridPtr& g, Rank rank, double value) {
  PhysicalField f(g, rank);
  for (int c = 0; c < f.components(); ++c)
    for (double& v : f.component(c)) v = value;
  return f;
}

TEST(Record, ColumnsAndRoundTrip) {
  const auto& cols = DiagnosticsRecord::columns();
  EXPECT_EQ(cols.size(), 20u);
  EXPECT_EQ(cols.front(), "t");
  EXPECT_EQ(cols.back(), "energy_residual");
  std::array<double, 20> v{};
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 0.5 + static_cast<double>(i);
  EXPECT_EQ(DiagnosticsRecord::from_values(v).values(), v);
}

TEST(Norms, ModularAndLuxemburgOfConstants) {
  const GridPtr g = make_grid(2, 8);
  const PhysicalField u = constant_field(g, Rank::scalar, 2.0);
  EXPECT_DOUBLE_EQ(modular_norm(u, constant_field(g, Rank::scalar, 3.0)), 8.0);
  EXPECT_NEAR(luxemburg_norm(u, constant_field(g, Rank::scalar, 2.0)), 2.0, 1e-7);
  EXPECT_EQ(luxemburg_norm(PhysicalField(g, Rank::scalar), constant_field(g, Rank::scalar, 2.0)), 0.0);
  EXPECT_THROW(modular_norm(u, constant_field(g, Rank::scalar, 1.0)), InvalidArgument);
  PhysicalField bad = constant_field(g, Rank::scalar, 2.0);
  bad.component(0)[0] = std::numeric_limits<double>::infinity();
  EXPECT_THROW(modular_norm(u, bad), InvalidArgument);
}

TEST(Norms, LuxemburgSolvesUnitModular) {
  const GridPtr g = make_grid(2, 16);
  const PhysicalField u = testing::random_field(g, Rank::vector, 3);
  PhysicalField p(g, Rank::scalar);
  for (std::size_t x = 0; x < g->points(); ++x) p.component(0)[x] = 2.0 + 0.8 * std::sin(two_pi * g->point(x)[0]);
  const double lam = luxemburg_norm(u, p, 1e-12);
  PhysicalField scaled = u;
  for (int c = 0; c < 2; ++c)
    for (double& v : scaled.component(c)) v /= lam;
  EXPECT_NEAR(modular_norm(scaled, p), 1.0, 1e-9);
}

TEST(Norms, Lebesgue) {
  const GridPtr g = make_grid(2, 16);
  const PhysicalField f = sample(g, Rank::scalar, [](const std::array<double, 3>& x) {
    return std::array<double, 1>{std::sin(two_pi * x[0])};
  });
  EXPECT_NEAR(lebesgue_norm(f, 2.0), std::sqrt(0.5), 1e-14);
  EXPECT_NEAR(lebesgue_norm(f, std::numeric_limits<double>::infinity()), 1.0, 1e-14);
  EXPECT_NEAR(lebesgue_norm(f, 4.0), std::pow(3.0 / 8.0, 0.25), 1e-14);
}

TEST(GradCQ, SingleModeClosedForm) {
  const GridPtr g = make_grid(2, 32);
  const SpectralField c = to_spectral(sample(g, Rank::scalar, [](const std::array<double, 3>& x) {
    return std::array<double, 1>{std::sin(two_pi * x[0])};
  }));
  const GradCQ q2 = gradc_q_monitor(c, 2.0);
  EXPECT_NEAR(q2.norm, std::sqrt(2.0) * pi, 1e-12);
  // |grad c|^2 = 2 pi^2 (1 + cos 4 pi x)
  const GradCQ q4 = gradc_q_monitor(c, 4.0);
  EXPECT_NEAR(q4.norm, two_pi * std::pow(3.0 / 8.0, 0.25), 1e-12);
  EXPECT_NEAR(q4.dissipation, 32.0 * std::pow(pi, 6), 1e-8 * std::pow(pi, 6));
}

TEST(Eta, ZeroVelocity) {
  const GridPtr g = make_grid(2, 16);
  const StressModel m{1.0, PowerLawIndex::tanh_profile(2.0, 2.9, 0.5, 0.2)};
  const SpectralField v(g, Rank::vector);
  const SpectralField c = to_spectral(testing::random_field(g, Rank::scalar, 8));
  const EtaNorms e = eta_norms(v, c, m);
  EXPECT_NEAR(e.l2, 1.0, 1e-15);
  EXPECT_NEAR(e.high, 1.0, 1e-15);
  EXPECT_NEAR(e.l1, 1.0, 1e-15);
  EXPECT_NEAR(e.grad_l2, 0.0, 1e-15);
  EXPECT_NEAR(e.gn_ratio(), 1.0, 1e-15);
  const W22 w = w22_monitor(v, c, m);
  EXPECT_EQ(w.weighted, 0.0);
  EXPECT_EQ(w.laplacian_sq, 0.0);
  EXPECT_TRUE(w.weight_checked);
}

TEST(W22, LaplacianBoundAndWeight) {
  const GridPtr g = make_grid(3, 16);
  const StressModel m{1.0, PowerLawIndex::tanh_profile(2.0, 2.9, 0.5, 0.2)};
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SpectralField v = testing::random_solenoidal(g, seed);
    const SpectralField c = to_spectral(testing::random_field(g, Rank::scalar, seed + 100));
    const W22 w = w22_monitor(v, c, m);
    EXPECT_TRUE(w.laplacian_dominated);
    EXPECT_TRUE(w.weight_dominates);
    // for solenoidal fields |lap v|^2 = 2 int |grad Dv|^2 exactly
    EXPECT_NEAR(w.laplacian_sq, 2.0 * w.grad_dv_sq, 1e-9 * w.laplacian_sq);
  }
}

TEST(TimeDerivatives, SteadyZeroState) {
  const GridPtr g = make_grid(2, 16);
  const StressModel m{1.0, PowerLawIndex::affine_clamped(2.0, 3.0, 1.0, 2.0)};
  State s;
  s.v = SpectralField(g, Rank::vector);
  const PhysicalField c = constant_field(g, Rank::scalar, 0.5);
  s.c = to_spectral(c);
  State s2 = s;
  s2.t = 0.1;
  const TimeDerivatives td = time_derivative_monitor(s, s2, m, std::nullopt, 4.5, 0.0);
  EXPECT_EQ(td.dt_v_l2, 0.0);
  EXPECT_EQ(td.dt_c_l2, 0.0);
  EXPECT_EQ(td.dt_c_ldelta, 0.0);
  EXPECT_NEAR(td.potential, 1.0 / 2.5, 1e-14);
}

TEST(Budgets, ZeroForZeroState) {
  const GridPtr g = make_grid(2, 8);
  State s;
  s.v = SpectralField(g, Rank::vector);
  s.c = SpectralField(g, Rank::scalar);
  const StressModel m;
  EXPECT_EQ(energy_budget_velocity(s, s, m, std::nullopt, 1e-3), 0.0);
  EXPECT_EQ(energy_budget_concentration(s, s, std::nullopt, 1e-3), 0.0);
}

TEST(Gronwall, CertificateCases) {
  std::vector<double> t, y, phi, psi;
  for (int i = 0; i <= 10; ++i) {
    t.push_back(0.1 * i);
    y.push_back(std::exp(0.1 * i));
    phi.push_back(1.0);
    psi.push_back(0.0);
  }
  // trapezoid of a constant is exact
  const Certificate ok = gronwall_certificate(t, y, phi, psi);
  EXPECT_TRUE(ok.passed);
  EXPECT_NEAR(ok.margin, 0.0, 1e-12);
  std::vector<double> zero(t.size(), 0.0);
  EXPECT_FALSE(gronwall_certificate(t, y, zero, zero).passed);
  std::vector<double> flat(t.size(), 2.0);
  const Certificate c = gronwall_certificate(t, flat, zero, zero);
  EXPECT_TRUE(c.passed);
  EXPECT_EQ(c.margin, 0.0);
  std::vector<double> neg = phi;
  neg[3] = -1.0;
  EXPECT_THROW(gronwall_certificate(t, y, neg, psi), InvalidArgument);
  EXPECT_THROW(gronwall_certificate(t, std::vector<double>{1.0}, phi, psi), InvalidArgument);
  // source term only: y = 1 + t with phi = 0, psi = 1
  std::vector<double> lin, one(t.size(), 1.0);
  for (double s : t) lin.push_back(1.0 + s);
  EXPECT_TRUE(gronwall_certificate(t, lin, zero, one).passed);
}

TEST(Gronwall, CalibrationFindsRate) {
  const std::vector<double> t{0.0, 0.1, 0.2};
  const std::vector<double> y{1.0, std::exp(0.3), std::exp(0.6)};
  const std::vector<double> phi{1.0, 1.0, 1.0}, psi{0.0, 0.0, 0.0};
  EXPECT_NEAR(calibrate_gronwall_constant(t, y, phi, psi), 3.0, 1e-10);
  const std::vector<double> dec{1.0, 0.5, 0.25};
  EXPECT_EQ(calibrate_gronwall_constant(t, dec, phi, psi), 0.0);
}

TEST(Elliptic, CalderonZygmundMultiplierIsOne) {
  for (int d : {2, 3}) {
    const GridPtr g = make_grid(d, 16);
    const double m = calderon_zygmund_multiplier_max(*g);
    EXPECT_LE(m, 1.0 + 1e-15);
    EXPECT_NEAR(m, 1.0, 1e-15);
  }
}

TEST(Elliptic, KornRatio) {
  const GridPtr g = make_grid(2, 16);
  for (std::uint64_t seed = 1; seed <= 10; ++seed)
    EXPECT_NEAR(korn_ratio(testing::random_solenoidal(g, seed)), std::sqrt(2.0), 1e-12);
  const SpectralField grad = gradient(to_spectral(testing::random_field(g, Rank::scalar, 3)));
  EXPECT_NEAR(korn_ratio(grad), 1.0, 1e-12);
  EXPECT_EQ(korn_ratio(SpectralField(g, Rank::vector)), 0.0);
}

TEST(Monitor, FirstSampleHasNoTimeDerivatives) {
  SolverConfig cfg;
  cfg.n = 16;
  cfg.model = {1.0, PowerLawIndex::tanh_profile(2.0, 2.9, 0.5, 0.2)};
  const GridPtr g = make_grid(2, 16);
  State s;
  s.v = testing::random_solenoidal(g, 4);
  s.c = to_spectral(testing::random_field(g, Rank::scalar, 5));
  DiagnosticsMonitor mon(cfg, s);
  const auto a = mon.sample(s, std::nullopt, 0, 0.0, 0.0);
  EXPECT_EQ(a.record.dt_v_l2, 0.0);
  EXPECT_NEAR(a.record.kinetic, 0.5 * l2_squared(s.v), 1e-15);
  EXPECT_GE(a.record.visc_diss, 0.0);
  EXPECT_NEAR(a.monitors.korn_ratio, std::sqrt(2.0), 1e-12);
  for (double v : a.record.values()) EXPECT_TRUE(std::isfinite(v));
  State s2 = s;
  s2.t = 0.01;
  s2.c = 2.0 * s.c;
  const auto b = mon.sample(s2, std::nullopt, 1, 0.0, 0.0);
  EXPECT_NEAR(b.record.dt_c_l2, std::sqrt(l2_squared(s.c)) / 0.01, 1e-9 * b.record.dt_c_l2);
}

}  // namespace
}  // namespace crf
