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
#include <string>
#include <string_view>
#include <vector>

#include "crf/manufactured.hpp"
#include "crf/solver.hpp"

namespace crf {

enum class ScenarioKind { zero, taylor_green, stokes_mode, heat_mode, synovial, manufactured };

ScenarioKind parse_scenario_kind(std::string_view name);
std::string_view to_string(ScenarioKind kind);

/// Initial data, forcing and study parameters of a named scenario.
struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::synovial;

  double velocity_amplitude = 1.0;
  std::array<int, 3> mode{1, 1, 0};  // wave numbers for stokes_mode / heat_mode
  double conc_mean = 0.5;
  double conc_amplitude = 0.5;
  double blob_width = 0.1;   // synovial concentration blob
  double shear_forcing = 0.0;  // f = (F sin 2 pi y, 0, 0)
  double source_flux = 0.0;    // steady flux g = G (sin 2 pi x, 0, 0)

  ManufacturedKind manufactured = ManufacturedKind::decaying_mode_2d;
  ManufacturedParams manufactured_params;

  double epsilon = 1e-6;  // twin-run perturbation size

  std::vector<int> n_ladder{16, 32, 64};
  double ladder_dt = 1e-5;  // time step of the spatial ladder
  std::vector<double> dt_ladder{4e-4, 2e-4, 1e-4};
  int ladder_n = 64;  // resolution of the temporal ladder
};

struct Scenario {
  SolverConfig config;
  PhysicalField v0;
  PhysicalField c0;
  Forcing forcing;
  std::optional<ManufacturedCase> exact;
};

/// Samples the initial data and forcing of spec on the grid of config.
Scenario build_scenario(const SolverConfig& config, const ScenarioSpec& spec);

/// Fixed divergence-free single-mode perturbation directions of the twin run.
PhysicalField perturbation_velocity(const GridPtr& grid);
PhysicalField perturbation_concentration(const GridPtr& grid);

/// Final-time L2 errors against the exact solution.
struct ErrorPair {
  double v = 0.0;
  double c = 0.0;
};
ErrorPair solution_error(const ManufacturedCase& exact, const State& state);

struct ConvergenceRow {
  int n = 0;
  double dt = 0.0;
  ErrorPair error;
  Termination termination = Termination::completed;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> spatial;   // increasing n at fixed dt
  std::vector<ConvergenceRow> temporal;  // decreasing dt at fixed n
  std::vector<ErrorPair> spatial_ratios;   // e(n_i) / e(n_{i+1})
  std::vector<ErrorPair> temporal_slopes;  // log(e_i/e_{i+1}) / log(dt_i/dt_{i+1})
  bool spatial_passed = false;   // every ratio >= 4
  bool temporal_passed = false;  // every slope within 1 +- 0.1
  bool passed() const { return spatial_passed && temporal_passed; }
};

/// Runs the spatial and temporal ladders of spec on the manufactured case.
/// Throws InvalidArgument for ladders shorter than 3.
ConvergenceTable convergence_study(const ManufacturedCase& exact, const SolverConfig& base, const ScenarioSpec& spec);

struct TwinRunReport {
  std::vector<double> t;
  std::vector<double> v_diff_sq;      // |v1 - v2|_2^2
  std::vector<double> gradc_diff_sq;  // |grad(c1 - c2)|_2^2
  std::vector<double> y;              // sum of the two
  std::vector<double> dv_diss;        // int |D(v1 - v2)|^2
  std::vector<double> lapc_diss;      // int |lap(c1 - c2)|^2
  std::vector<double> phi;            // C (|v2|_inf^2 + |grad c1|_inf^2 + |grad v1|_3^2 + 1)
  std::vector<double> envelope;       // exp(int phi) y(0)
  double constant = 0.0;
  bool envelope_holds = false;
  double margin = 0.0;
  RegimeFlags regime;
  Termination termination = Termination::completed;
  std::vector<std::string> warnings;
};

/// Integrates (v0, c0) and (v0 + eps dv, c0 + eps dc) concurrently with the
/// same forcing and evaluates the difference functional. Blow-up of either
/// run throws BlowUp.
TwinRunReport uniqueness_experiment(const Scenario& scenario, double epsilon);

/// Builds and runs the synovial scenario.
RunResult synovial_demo(const SolverConfig& config, const ScenarioSpec& spec, const SampleObserver& observer = {});

}  // namespace crf
