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
#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace crf {

using Complex = std::complex<double>;

class Grid;
using GridPtr = std::shared_ptr<const Grid>;

/// Uniform collocation grid on the unit torus [0,1)^d with real-to-complex
/// transform plans.
///
/// Physical samples are stored x-fastest: point (i0, i1, i2) lives at
/// i0 + n*(i1 + n*i2). Spectral coefficients use the half-complex layout of
/// a real transform along x0, so mode (m0, j1, j2) with 0 <= m0 <= n/2 lives
/// at m0 + (n/2+1)*(j1 + n*j2). Coefficients are normalized so that a
/// constant field 1 has coefficient 1 at the zero mode.
///
/// A Grid is immutable after construction; transforms may be called
/// concurrently from several threads.
class Grid {
 public:
  ~Grid();
  Grid(const Grid&) = delete;
  Grid& operator=(const Grid&) = delete;

  int dim() const noexcept { return d_; }
  int modes() const noexcept { return n_; }
  double spacing() const noexcept { return 1.0 / n_; }
  std::size_t points() const noexcept { return points_; }
  std::size_t spectral_size() const noexcept { return spectral_; }

  /// Signed integer frequency of spectral index s along each axis. The
  /// Nyquist frequency is reported as +n/2.
  const std::array<int, 3>& frequency(std::size_t s) const { return freq_[s]; }
  /// Angular wavevector 2*pi*m used for derivatives; Nyquist components are 0.
  const std::array<double, 3>& wavevector(std::size_t s) const { return kvec_[s]; }
  /// |wavevector(s)|^2, the symbol of -Laplacian.
  double k2(std::size_t s) const { return k2_[s]; }
  /// Multiplicity of a stored coefficient in the full spectrum (1 or 2).
  double weight(std::size_t s) const { return weight_[s]; }
  /// Largest |frequency component| of index s.
  int max_abs_frequency(std::size_t s) const;

  /// Coordinates of collocation point i.
  std::array<double, 3> point(std::size_t i) const;

  /// Normalized forward transform of one real component.
  void forward(std::span<const double> in, std::span<Complex> out) const;
  /// Inverse transform of one Hermitian component.
  void backward(std::span<const Complex> in, std::span<double> out) const;

  friend GridPtr make_grid(int d, int n);

 private:
  Grid(int d, int n);

  struct Plans;
  int d_;
  int n_;
  std::size_t points_;
  std::size_t spectral_;
  std::vector<std::array<int, 3>> freq_;
  std::vector<std::array<double, 3>> kvec_;
  std::vector<double> k2_;
  std::vector<double> weight_;
  std::unique_ptr<Plans> plans_;
};

/// Builds a grid with n modes per dimension; d in {2,3}, n even in [8, 1024].
/// Throws InvalidArgument otherwise.
GridPtr make_grid(int d, int n);

}  // namespace crf
