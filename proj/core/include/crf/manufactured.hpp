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
#include <cmath>
#include <numbers>
#include <string_view>

#include "crf/state.hpp"

namespace crf {

enum class ManufacturedKind { decaying_mode_2d, decaying_mode_3d, steady_shear_2d };

/// Throws InvalidArgument for an unknown name.
ManufacturedKind parse_manufactured_kind(std::string_view name);
std::string_view to_string(ManufacturedKind kind);

/// Amplitudes and rates of the exact fields
///   v* = A e^(-lambda t) TG(x),  c* = cbar + B e^(-mu t) (P(x)P(y)[P(z)] - 1)
/// where TG is the Taylor-Green cell (shear profile for steady_shear_2d) and
/// P(x) = (1 - r^2) / (1 - 2 r cos 2 pi x + r^2) has Fourier coefficients r^|m|.
struct ManufacturedParams {
  double velocity_amplitude = 1.0;
  double velocity_decay = 1.0;
  double conc_mean = 0.5;
  double conc_amplitude = 0.25;
  double conc_decay = 1.0;
  double kernel_radius = 0.5;
};

/// Exact solution of the coupled system with forcings computed by
/// substitution. f* uses analytic derivatives; g* is closed form.
class ManufacturedCase {
 public:
  ManufacturedCase(ManufacturedKind kind, const ManufacturedParams& params, StressModel model);

  ManufacturedKind kind() const noexcept { return kind_; }
  const ManufacturedParams& params() const noexcept { return params_; }
  const StressModel& model() const noexcept { return model_; }
  int dim() const noexcept { return kind_ == ManufacturedKind::decaying_mode_3d ? 3 : 2; }
  bool steady() const noexcept { return kind_ == ManufacturedKind::steady_shear_2d; }

  template <class T> std::array<T, 3> velocity(const std::array<T, 3>& x, T t) const;
  template <class T> T concentration(const std::array<T, 3>& x, T t) const;
  template <class T> T pressure(const std::array<T, 3>& x, T t) const;
  template <class T> std::array<T, 3> flux(const std::array<T, 3>& x, T t) const;

  /// f* = d_t v* + div(v* x v*) - div S(c*, Dv*) + grad pi*.
  std::array<double, 3> momentum_forcing(const std::array<double, 3>& x, double t) const;

  /// Spatial mean of d_t c* + div(c* v*) - lap c*, by 1-D quadrature of
  /// the kernel. Vanishes for a consistent construction.
  double source_mean(double t) const;

  PhysicalField velocity_field(const GridPtr& grid, double t) const;
  PhysicalField concentration_field(const GridPtr& grid, double t) const;
  Forcing forcing() const;

 private:
  template <class T> T amplitude_v(T t) const;
  template <class T> T amplitude_c(T t) const;
  template <class T> T kernel(T x) const;       // P
  template <class T> T kernel_int(T x) const;   // Q with Q' = P - 1

  ManufacturedKind kind_;
  ManufacturedParams params_;
  StressModel model_;
};

/// Builds the case and checks that the concentration source has zero mean;
/// throws Error otherwise. steady_shear_2d ignores the decay rates.
ManufacturedCase make_manufactured(ManufacturedKind kind, const ManufacturedParams& params,
                                   const StressModel& model);

template <class T>
T ManufacturedCase::amplitude_v(T t) const {
  if (steady()) return T(params_.velocity_amplitude);
  return T(params_.velocity_amplitude) * std::exp(-T(params_.velocity_decay) * t);
}

template <class T>
T ManufacturedCase::amplitude_c(T t) const {
  if (steady()) return T(params_.conc_amplitude);
  return T(params_.conc_amplitude) * std::exp(-T(params_.conc_decay) * t);
}

template <class T>
T ManufacturedCase::kernel(T x) const {
  const T r = T(params_.kernel_radius);
  const T th = 2 * std::numbers::pi_v<T> * x;
  return (1 - r * r) / (1 - 2 * r * std::cos(th) + r * r);
}

template <class T>
T ManufacturedCase::kernel_int(T x) const {
  const T r = T(params_.kernel_radius);
  const T th = 2 * std::numbers::pi_v<T> * x;
  return std::atan2(r * std::sin(th), 1 - r * std::cos(th)) / std::numbers::pi_v<T>;
}

template <class T>
std::array<T, 3> ManufacturedCase::velocity(const std::array<T, 3>& x, T t) const {
  const T tp = 2 * std::numbers::pi_v<T>;
  const T a = amplitude_v(t);
  const T X = tp * x[0], Y = tp * x[1], Z = tp * x[2];
  switch (kind_) {
    case ManufacturedKind::decaying_mode_2d:
      return {a * std::sin(X) * std::cos(Y), -a * std::cos(X) * std::sin(Y), T(0)};
    case ManufacturedKind::decaying_mode_3d:
      return {a * std::sin(X) * std::cos(Y) * std::cos(Z), -a * std::cos(X) * std::sin(Y) * std::cos(Z), T(0)};
    case ManufacturedKind::steady_shear_2d:
      return {a * std::sin(Y), T(0), T(0)};
  }
  return {};
}

template <class T>
T ManufacturedCase::concentration(const std::array<T, 3>& x, T t) const {
  T prod = kernel(x[0]) * kernel(x[1]);
  if (dim() == 3) prod *= kernel(x[2]);
  return T(params_.conc_mean) + amplitude_c(t) * (prod - 1);
}

template <class T>
T ManufacturedCase::pressure(const std::array<T, 3>& x, T t) const {
  if (kind_ != ManufacturedKind::decaying_mode_2d) return T(0);
  const T a = amplitude_v(t);
  const T tp = 2 * std::numbers::pi_v<T>;
  return a * a / 4 * (std::cos(2 * tp * x[0]) + std::cos(2 * tp * x[1]));
}

template <class T>
std::array<T, 3> ManufacturedCase::flux(const std::array<T, 3>& x, T t) const {
  const auto v = velocity(x, t);
  const T dev = concentration(x, t) - T(params_.conc_mean);
  const T a = amplitude_c(t);
  const T da = steady() ? T(0) : -T(params_.conc_decay) * a;
  const T tp = 2 * std::numbers::pi_v<T>;
  const T r = T(params_.kernel_radius);
  auto dkernel = [&](T s) {
    const T th = tp * s;
    const T den = 1 - 2 * r * std::cos(th) + r * r;
    return -(1 - r * r) * 2 * r * std::sin(th) * tp / (den * den);
  };
  std::array<T, 3> P{kernel(x[0]), kernel(x[1]), dim() == 3 ? kernel(x[2]) : T(1)};
  std::array<T, 3> dP{dkernel(x[0]), dkernel(x[1]), dim() == 3 ? dkernel(x[2]) : T(0)};
  std::array<T, 3> grad_c{a * dP[0] * P[1] * P[2], a * P[0] * dP[1] * P[2], T(0)};
  std::array<T, 3> G{kernel_int(x[0]) * P[1] * P[2], kernel_int(x[1]) * P[2], T(0)};
  if (dim() == 3) {
    grad_c[2] = a * P[0] * P[1] * dP[2];
    G[2] = kernel_int(x[2]);
  }
  std::array<T, 3> g{};
  for (int i = 0; i < dim(); ++i) g[i] = -dev * v[i] + grad_c[i] - da * G[i];
  return g;
}

}  // namespace crf
