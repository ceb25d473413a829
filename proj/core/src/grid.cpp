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

#include "crf/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>
#include <vector>

#include "crf/error.hpp"

namespace crf {

namespace {

// The FFTW planner is not thread-safe; execution with the new-array API is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

int signed_frequency(int j, int n) { return j <= n / 2 ? j : j - n; }

}  // namespace

struct Grid::Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (r2c) fftw_destroy_plan(r2c);
    if (c2r) fftw_destroy_plan(c2r);
  }
};

GridPtr make_grid(int d, int n) {
  if (d != 2 && d != 3) throw InvalidArgument("grid dimension must be 2 or 3, got " + std::to_string(d));
  if (n % 2 != 0) throw InvalidArgument("odd mode count " + std::to_string(n));
  if (n < 8 || n > 1024) throw InvalidArgument("mode count " + std::to_string(n) + " outside [8, 1024]");
  return GridPtr(new Grid(d, n));
}

Grid::Grid(int d, int n) : d_(d), n_(n), plans_(std::make_unique<Plans>()) {
  const int half = n / 2 + 1;
  points_ = 1;
  for (int i = 0; i < d; ++i) points_ *= static_cast<std::size_t>(n);
  spectral_ = points_ / static_cast<std::size_t>(n) * static_cast<std::size_t>(half);

  freq_.resize(spectral_);
  kvec_.resize(spectral_);
  k2_.resize(spectral_);
  weight_.resize(spectral_);
  const double two_pi = 2.0 * std::numbers::pi;
  const int n2 = d == 3 ? n : 1;
  std::size_t s = 0;
  for (int j2 = 0; j2 < n2; ++j2) {
    for (int j1 = 0; j1 < n; ++j1) {
      for (int m0 = 0; m0 < half; ++m0, ++s) {
        std::array<int, 3> f{m0, signed_frequency(j1, n), d == 3 ? signed_frequency(j2, n) : 0};
        std::array<double, 3> k{};
        double kk = 0.0;
        for (int a = 0; a < d; ++a) {
          k[a] = (f[a] == n / 2) ? 0.0 : two_pi * f[a];
          kk += k[a] * k[a];
        }
        freq_[s] = f;
        kvec_[s] = k;
        k2_[s] = kk;
        weight_[s] = (m0 == 0 || m0 == n / 2) ? 1.0 : 2.0;
      }
    }
  }

  // FFTW is row-major with the last index fastest, so axis x0 goes last.
  std::array<int, 3> dims{};
  for (int a = 0; a < d; ++a) dims[a] = n;
  std::vector<double> rbuf(points_);
  std::vector<Complex> cbuf(spectral_);
  auto* rp = rbuf.data();
  auto* cp = reinterpret_cast<fftw_complex*>(cbuf.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::lock_guard lock(planner_mutex());
  plans_->r2c = fftw_plan_dft_r2c(d, dims.data(), rp, cp, flags);
  plans_->c2r = fftw_plan_dft_c2r(d, dims.data(), cp, rp, flags | FFTW_DESTROY_INPUT);
  if (!plans_->r2c || !plans_->c2r) throw Error("FFTW planning failed");
}

Grid::~Grid() = default;

int Grid::max_abs_frequency(std::size_t s) const {
  const auto& f = freq_[s];
  return std::max({std::abs(f[0]), std::abs(f[1]), std::abs(f[2])});
}

std::array<double, 3> Grid::point(std::size_t i) const {
  std::array<double, 3> x{};
  const double h = spacing();
  for (int a = 0; a < d_; ++a) {
    x[a] = static_cast<double>(i % static_cast<std::size_t>(n_)) * h;
    i /= static_cast<std::size_t>(n_);
  }
  return x;
}

void Grid::forward(std::span<const double> in, std::span<Complex> out) const {
  if (in.size() != points_ || out.size() != spectral_) throw InvalidArgument("transform size mismatch");
  // r2c does not modify its input, the cast only satisfies the C signature.
  fftw_execute_dft_r2c(plans_->r2c, const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / static_cast<double>(points_);
  for (auto& c : out) c *= scale;
}

void Grid::backward(std::span<const Complex> in, std::span<double> out) const {
  if (in.size() != spectral_ || out.size() != points_) throw InvalidArgument("transform size mismatch");
  std::vector<Complex> scratch(in.begin(), in.end());
  fftw_execute_dft_c2r(plans_->c2r, reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
}

}  // namespace crf
