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

#include "crf/field.hpp"

namespace crf {

/// Physical samples to normalized Fourier coefficients. Throws
/// InvalidArgument on non-finite input.
SpectralField to_spectral(const PhysicalField& field);
/// Fourier coefficients to physical samples.
PhysicalField to_physical(const SpectralField& field);

enum class Derivative { gradient, divergence, laplacian, sym_gradient };

/// Fourier multiplier i*k (or -|k|^2) applied per mode. Rank rules:
///   gradient:     scalar -> vector, vector -> tensor
///   divergence:   vector -> scalar, sym_tensor | tensor -> vector
///   laplacian:    any rank, rank preserved
///   sym_gradient: vector -> sym_tensor
/// Nyquist components of the wavevector are zero, so the Laplacian equals
/// divergence of gradient exactly. Throws InvalidArgument on rank mismatch.
SpectralField spectral_derivative(const SpectralField& field, Derivative kind);

inline SpectralField gradient(const SpectralField& f) { return spectral_derivative(f, Derivative::gradient); }
inline SpectralField divergence(const SpectralField& f) { return spectral_derivative(f, Derivative::divergence); }
inline SpectralField laplacian(const SpectralField& f) { return spectral_derivative(f, Derivative::laplacian); }
inline SpectralField sym_gradient(const SpectralField& f) { return spectral_derivative(f, Derivative::sym_gradient); }

/// Leray projection (I - k k^T/|k|^2) per mode; the zero mode and modes with
/// vanishing derivative wavevector are left untouched.
SpectralField leray_project(const SpectralField& v);

enum class DealiasRule { two_thirds, none };

/// Zeroes every mode with some |frequency index| > n/3 under two_thirds, and
/// the zero mode when zero_mean is set.
SpectralField dealias_and_zero_mean(const SpectralField& field, DealiasRule rule, bool zero_mean);
/// In-place variant used on hot paths.
void dealias_in_place(SpectralField& field, DealiasRule rule, bool zero_mean = false);

/// L2 inner product over the unit torus (Parseval), summed over components.
/// Off-diagonal entries of symmetric tensors count twice, so the result is
/// the integral of the Frobenius product.
double inner(const SpectralField& a, const SpectralField& b);
inline double l2_squared(const SpectralField& a) { return inner(a, a); }

/// Spatial mean of component c (its zero-mode coefficient).
double mean(const SpectralField& field, int c = 0);

/// max_k |k . v(k)| / max_k |k||v(k)|, zero for the zero field.
double divergence_ratio(const SpectralField& v);

/// Integral over the unit torus of one physical component by the rectangle
/// rule.
double integrate(std::span<const double> samples);

}  // namespace crf
