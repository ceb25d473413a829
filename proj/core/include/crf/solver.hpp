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

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "crf/diagnostics.hpp"
#include "crf/state.hpp"

namespace crf {

/// Projects initial data onto the discrete space: dealiased, velocity
/// Leray-projected with zero mean. Sets *was_projected when the supplied
/// velocity had a divergence above 1e-12 relative.
State make_initial_state(const SolverConfig& config, const PhysicalField& v0, const PhysicalField& c0,
                         bool* was_projected = nullptr);

/// Implicit diffusion, explicit transport and source:
///   (c+ - c)/dt = lap c+ - div(c v) - div g,
/// solved per mode. g_hat is the flux at t + dt.
SpectralField step_concentration(const State& state, const SolverConfig& config,
                                 const std::optional<SpectralField>& g_hat);

struct PicardStats {
  int iterations = 0;  // corrections applied before the fixed point was confirmed
  bool converged = false;
  double last_update = 0.0;  // relative L2 size of the final update
  double contraction = 0.0;  // largest ratio of successive updates
  double nu_split = 0.0;
};

struct VelocityStep {
  SpectralField v;
  PicardStats stats;
};

/// IMEX velocity update with Picard iteration on the stress:
///   (v+ - v)/dt + P N(v) = nu_s lap v+ + P div(S(c+, Dw) - 2 nu_s Dw) + P f,
/// iterated over w until the relative update falls below picard_tol.
/// Throws PicardFailure if the update grows three iterations in a row and
/// BlowUp on non-finite output.
VelocityStep step_velocity(const State& state, const SpectralField& c_new, const SolverConfig& config,
                           const std::optional<SpectralField>& f_hat);

/// Splitting constant used by ViscousSplit::automatic: midpoint of the
/// tangent-viscosity range for strain rates up to max_strain.
double automatic_split(const StressModel& model, double max_strain);

/// Zero-mean pressure solving -lap pi = div(div(v x v) - div S(c, Dv) - f).
SpectralField recover_pressure(const State& state, const SolverConfig& config,
                               const std::optional<SpectralField>& f_hat);

/// Relative size of the gradient part of the momentum residual after adding
/// grad pi: |(I-P)(N(v) - div S - f) + grad pi| / |(I-P)(N(v) - div S - f)|.
double pressure_consistency(const State& state, const SolverConfig& config,
                            const std::optional<SpectralField>& f_hat, const SpectralField& pressure);

enum class Termination { completed, blowup, picard_failure };
const char* to_string(Termination t);

struct RunResult {
  std::vector<DiagnosticsRecord> records;
  std::vector<MonitorSample> monitors;
  State final_state;  // last valid state
  Termination termination = Termination::completed;
  std::string message;
  std::vector<std::string> warnings;
  long steps_taken = 0;
  int picard_nonconverged = 0;
  int max_picard_iterations = 0;
  double max_contraction = 0.0;
  double max_divergence = 0.0;  // over every step
  double max_mean_drift = 0.0;  // |mean c - mean c0| over every step
};

/// Called on every diagnostics sample with the state it was taken from.
using SampleObserver = std::function<void(const State&, const DiagnosticsMonitor::Sample&)>;

/// Steps from the initial data to t_end. Blow-up and Picard failure end the
/// run early with the last valid state in final_state.
RunResult run(const SolverConfig& config, const PhysicalField& v0, const PhysicalField& c0, const Forcing& forcing,
              const SampleObserver& observer = {});

/// Same, starting from an already discrete state.
RunResult run(const SolverConfig& config, State initial, const Forcing& forcing,
              const SampleObserver& observer = {});

}  // namespace crf
