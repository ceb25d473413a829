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

#include "crf/constitutive.hpp"
#include "crf/field.hpp"
#include "crf/spectral.hpp"

namespace crf {

/// Which of the existence/uniqueness regimes the exponent bounds fall in.
struct RegimeFlags {
  bool strong_regime = false;  // p- >= (d+2)/2
  bool unique_regime = false;  // strong and p+ < 3/2 p- (d=2) or p+ < 7/6 p- (d=3)
};

/// Throws InvalidArgument unless 1 < p- <= p+ and d in {2,3}.
RegimeFlags compute_regime(int d, double p_minus, double p_plus);

enum class ViscousSplit { automatic, constant };
enum class ConvectionForm { divergence, skew_symmetric, off };

struct SolverConfig {
  int d = 2;
  int n = 64;
  double dt = 1e-3;
  double t_end = 1.0;
  StressModel model;

  double picard_tol = 1e-10;
  int picard_max = 50;
  ViscousSplit split = ViscousSplit::automatic;
  double nu_split = 0.0;  // used with ViscousSplit::constant; 0 selects nu0

  double q_monitor = 0.0;      // 0 selects 2d+2
  double delta_monitor = 0.0;  // 0 selects 4.5 (d=2) or 3.25 (d=3)

  DealiasRule dealias = DealiasRule::two_thirds;
  ConvectionForm convection = ConvectionForm::divergence;

  int cadence = 1;  // steps between diagnostics records
  double blowup_threshold = 1e12;

  /// Throws InvalidArgument on an inconsistent configuration.
  void validate() const;
  double q() const;
  double delta() const;
  long steps() const;
  RegimeFlags regime() const { return compute_regime(d, model.index.p_minus(), model.index.p_plus()); }
};

/// Velocity (divergence-free, zero mean) and concentration at time t.
struct State {
  double t = 0.0;
  SpectralField v;
  SpectralField c;
};

/// External forcings evaluated on the collocation grid. An empty function
/// means zero forcing. f is the momentum source, g the concentration flux
/// (the concentration equation carries -div g).
struct Forcing {
  using Eval = std::function<PhysicalField(const GridPtr&, double t)>;
  Eval f;
  Eval g;
};

/// Transforms a forcing sample and applies the configured dealiasing;
/// returns nullopt for an empty function.
std::optional<SpectralField> sample_forcing(const Forcing::Eval& fn, const GridPtr& grid, double t,
                                            DealiasRule rule);

}  // namespace crf
