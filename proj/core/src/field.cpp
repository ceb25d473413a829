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

#include "crf/field.hpp"

#include <algorithm>
#include <cmath>

#include "crf/error.hpp"

namespace crf {

int component_count(Rank rank, int d) {
  switch (rank) {
    case Rank::scalar:
      return 1;
    case Rank::vector:
      return d;
    case Rank::sym_tensor:
      return d * (d + 1) / 2;
    case Rank::tensor:
      return d * d;
  }
  return 0;
}

int sym_index(int i, int j, int d) {
  if (i == j) return i;
  if (i > j) std::swap(i, j);
  if (d == 2) return 2;
  // 3D off-diagonals: xy -> 3, xz -> 4, yz -> 5
  return i == 0 ? 2 + j : 5;
}

PhysicalField::PhysicalField(GridPtr grid, Rank rank)
    : grid_(std::move(grid)), rank_(rank), ncomp_(component_count(rank, grid_->dim())),
      data_(static_cast<std::size_t>(ncomp_) * grid_->points(), 0.0) {}

std::span<double> PhysicalField::component(int c) {
  const auto np = grid_->points();
  return std::span<double>(data_).subspan(static_cast<std::size_t>(c) * np, np);
}

std::span<const double> PhysicalField::component(int c) const {
  const auto np = grid_->points();
  return std::span<const double>(data_).subspan(static_cast<std::size_t>(c) * np, np);
}

bool PhysicalField::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

SpectralField::SpectralField(GridPtr grid, Rank rank)
    : grid_(std::move(grid)), rank_(rank), ncomp_(component_count(rank, grid_->dim())),
      data_(static_cast<std::size_t>(ncomp_) * grid_->spectral_size(), Complex{}) {}

std::span<Complex> SpectralField::component(int c) {
  const auto ns = grid_->spectral_size();
  return std::span<Complex>(data_).subspan(static_cast<std::size_t>(c) * ns, ns);
}

std::span<const Complex> SpectralField::component(int c) const {
  const auto ns = grid_->spectral_size();
  return std::span<const Complex>(data_).subspan(static_cast<std::size_t>(c) * ns, ns);
}

bool SpectralField::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

namespace {
void check_same_shape(const SpectralField& a, const SpectralField& b) {
  if (a.grid() != b.grid() || a.rank() != b.rank()) throw InvalidArgument("spectral field shape mismatch");
}
}  // namespace

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  check_same_shape(*this, other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  zero_mean_ = zero_mean_ && other.zero_mean_;
  divergence_free_ = divergence_free_ && other.divergence_free_;
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  check_same_shape(*this, other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  zero_mean_ = zero_mean_ && other.zero_mean_;
  divergence_free_ = divergence_free_ && other.divergence_free_;
  return *this;
}

SpectralField& SpectralField::operator*=(double a) {
  for (auto& z : data_) z *= a;
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

}  // namespace crf
