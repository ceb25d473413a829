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

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "crf/grid.hpp"

namespace crf {

/// Tensorial rank of a field. Symmetric tensors store the d(d+1)/2
/// independent entries; general tensors store all d*d entries row-major,
/// with (grad v)_{ij} = d_j v_i.
enum class Rank { scalar, vector, sym_tensor, tensor };

int component_count(Rank rank, int d);

/// Storage slot of entry (i, j) of a symmetric tensor. Diagonal entries
/// come first (xx, yy[, zz]), then xy[, xz, yz].
int sym_index(int i, int j, int d);

/// Storage slot of entry (i, j) of a general tensor.
inline int tensor_index(int i, int j, int d) { return i * d + j; }

/// Real samples of a field at the collocation points, component-major.
class PhysicalField {
 public:
  PhysicalField() = default;
  PhysicalField(GridPtr grid, Rank rank);

  const GridPtr& grid() const noexcept { return grid_; }
  Rank rank() const noexcept { return rank_; }
  int components() const noexcept { return ncomp_; }
  std::size_t points() const noexcept { return grid_->points(); }

  std::span<double> component(int c);
  std::span<const double> component(int c) const;
  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  bool all_finite() const;

 private:
  GridPtr grid_;
  Rank rank_ = Rank::scalar;
  int ncomp_ = 0;
  std::vector<double> data_;
};

/// Fourier coefficients of a real field in the grid's half-complex layout.
class SpectralField {
 public:
  SpectralField() = default;
  SpectralField(GridPtr grid, Rank rank);

  const GridPtr& grid() const noexcept { return grid_; }
  Rank rank() const noexcept { return rank_; }
  int components() const noexcept { return ncomp_; }
  std::size_t size() const noexcept { return grid_->spectral_size(); }

  std::span<Complex> component(int c);
  std::span<const Complex> component(int c) const;
  std::span<Complex> values() noexcept { return data_; }
  std::span<const Complex> values() const noexcept { return data_; }

  bool zero_mean() const noexcept { return zero_mean_; }
  bool divergence_free() const noexcept { return divergence_free_; }
  void set_zero_mean(bool flag) noexcept { zero_mean_ = flag; }
  void set_divergence_free(bool flag) noexcept { divergence_free_ = flag; }

  bool all_finite() const;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double a);

 private:
  GridPtr grid_;
  Rank rank_ = Rank::scalar;
  int ncomp_ = 0;
  std::vector<Complex> data_;
  bool zero_mean_ = false;
  bool divergence_free_ = false;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

}  // namespace crf
