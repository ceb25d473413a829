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

#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "crf/state.hpp"

namespace crf {

/// One time sample of every monitored functional. Field order matches the
/// diagnostics CSV columns.
struct DiagnosticsRecord {
  double t = 0.0;
  double kinetic = 0.0;         // 1/2 |v|_2^2
  double visc_diss = 0.0;       // int S:Dv
  double modular_gradv = 0.0;   // int |grad v|^p(c)
  double stress_dual = 0.0;     // int |S|^p'(c)
  double conc_l2 = 0.0;         // |c|_2^2
  double conc_diss = 0.0;       // |grad c|_2^2
  double gradc_q = 0.0;         // |grad c|_q
  double gradc_q_diss = 0.0;    // int |grad(|grad c|^(q/2))|^2
  double eta_l2 = 0.0;          // |eta|_2
  double eta_high = 0.0;        // |eta|_4 (d=2) or |eta|_3 (d=3)
  double grad_eta_l2 = 0.0;     // |grad eta|_2
  double w22_weighted = 0.0;    // int (1+|Dv|^2)^((p-2)/2) |grad Dv|^2
  double laplacian_v_l2 = 0.0;  // |lap v|_2
  double dt_v_l2 = 0.0;         // |d_t v|_2, backward difference
  double dt_c_l2 = 0.0;         // |d_t c|_2
  double dt_c_ldelta = 0.0;     // |d_t c|_delta
  double potential = 0.0;       // int (1+|Dv|^2)^(p/2) / p
  double picard_iters = 0.0;
  double energy_residual = 0.0;

  static constexpr std::size_t column_count = 20;
  static const std::array<std::string_view, column_count>& columns();
  std::array<double, column_count> values() const;
  static DiagnosticsRecord from_values(const std::array<double, column_count>& v);
};

/// Per-sample quantities that feed the certificates but are not part of the
/// CSV schema.
struct MonitorSample {
  double t = 0.0;
  double gradv_pminus = 0.0;   // |grad v|_{p-}
  double gradv_l3 = 0.0;       // |grad v|_3
  double v_inf = 0.0;          // |v|_inf
  double gradc_inf = 0.0;      // |grad c|_inf
  double g_w1q = 0.0;          // |g|_{1,q}
  double mean_c = 0.0;
  double divergence = 0.0;     // divergence_ratio(v)
  double conc_residual = 0.0;  // concentration energy budget residual
  double mr_ratio = 0.0;       // maximal-regularity ratio
  double gn_ratio = 0.0;       // |eta|_high / (|eta|_2^(1/2) |grad eta|_2^(1/2) + |eta|_1)
  double korn_ratio = 0.0;     // |grad v|_2 / |Dv|_2
};

/// int |u(x)|^p(x) dx by the rectangle rule; |u| is the Euclidean/Frobenius
/// magnitude over components. Throws InvalidArgument if the exponent is not
/// finite and > 1 everywhere.
double modular_norm(const PhysicalField& field, const PhysicalField& exponent);
/// Luxemburg norm inf{lambda > 0 : int |u/lambda|^p <= 1} by bisection.
double luxemburg_norm(const PhysicalField& field, const PhysicalField& exponent, double tol = 1e-8);

/// (1/2|v+|^2 - 1/2|v|^2)/dt + int S(c+, Dv+):Dv+ - int f.v+.
double energy_budget_velocity(const State& before, const State& after, const StressModel& model,
                              const std::optional<SpectralField>& f_hat, double dt);
/// (1/2|c+|^2 - 1/2|c|^2)/dt + |grad c+|^2 - int g.grad c+.
double energy_budget_concentration(const State& before, const State& after,
                                   const std::optional<SpectralField>& g_hat, double dt);

struct GradCQ {
  double norm = 0.0;         // |grad c|_q
  double dissipation = 0.0;  // int |grad(|grad c|^(q/2))|^2
};
/// The power |grad c|^(q/2) is formed pointwise and differentiated
/// spectrally without dealiasing.
GradCQ gradc_q_monitor(const SpectralField& c, double q);

struct EtaNorms {
  double l2 = 0.0;
  double high = 0.0;  // L4 in 2D, L3 in 3D
  double grad_l2 = 0.0;
  double l1 = 0.0;
  /// high / (l2^(1/2) grad_l2^(1/2) + l1)
  double gn_ratio() const;
};
/// eta = (1 + |Dv|^2)^(p(c)/4), gradient taken spectrally.
EtaNorms eta_norms(const SpectralField& v, const SpectralField& c, const StressModel& model);

struct W22 {
  double weighted = 0.0;      // int (1+|Dv|^2)^((p-2)/2) |grad Dv|^2
  double laplacian_sq = 0.0;  // |lap v|_2^2
  double grad_sq = 0.0;       // |grad v|_2^2
  double grad_dv_sq = 0.0;    // int |grad Dv|^2
  bool laplacian_dominated = true;  // |lap v|^2 <= 9 int |grad Dv|^2
  bool weight_checked = false;      // p- >= 2
  bool weight_dominates = true;     // int |grad Dv|^2 <= weighted (when checked)
};
W22 w22_monitor(const SpectralField& v, const SpectralField& c, const StressModel& model);

struct TimeDerivatives {
  double dt_v_l2 = 0.0;
  double dt_c_l2 = 0.0;
  double dt_c_ldelta = 0.0;
  double potential = 0.0;
  double mr_ratio = 0.0;
};
/// Backward differences between two consecutive samples. lap_c0_delta is
/// |lap c0|_delta of the initial concentration; g_hat the flux at cur.t.
TimeDerivatives time_derivative_monitor(const State& prev, const State& cur, const StressModel& model,
                                        const std::optional<SpectralField>& g_hat, double delta,
                                        double lap_c0_delta);

/// |u|_r of a physical field over components, r >= 1 (r = inf allowed).
double lebesgue_norm(const PhysicalField& field, double r);

struct Certificate {
  bool passed = true;
  double margin = 0.0;  // min_m (envelope_m - y_m)
  std::vector<double> envelope;
};

/// Checks y(t_m) <= exp(int_0^t_m phi) [y(0) + int_0^t_m psi] at every
/// sample, integrals by the trapezoid rule. Throws InvalidArgument on
/// misaligned series or negative phi/psi.
Certificate gronwall_certificate(std::span<const double> t, std::span<const double> y, std::span<const double> phi,
                                 std::span<const double> psi);

/// Smallest C >= 0 for which the certificate with (C phi, C psi) holds over
/// the first interval [t_0, t_1].
double calibrate_gronwall_constant(std::span<const double> t, std::span<const double> y, std::span<const double> phi,
                                   std::span<const double> psi);

/// max over nonzero modes of |k_j k_l| / |k|^2; the L2 Calderon-Zygmund
/// multiplier bound states this is <= 1.
double calderon_zygmund_multiplier_max(const Grid& grid);

/// |grad v|_2 / |Dv|_2 for a vector field (0 for the zero field).
double korn_ratio(const SpectralField& v);

/// Stateful sampler that evaluates records along a trajectory.
class DiagnosticsMonitor {
 public:
  DiagnosticsMonitor(const SolverConfig& config, const State& initial);

  struct Sample {
    DiagnosticsRecord record;
    MonitorSample monitors;
  };

  Sample sample(const State& state, const std::optional<SpectralField>& g_hat, int picard_iters,
                double velocity_residual, double concentration_residual);

 private:
  SolverConfig config_;
  double lap_c0_delta_ = 0.0;
  std::optional<State> prev_;
};

}  // namespace crf
