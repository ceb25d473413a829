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

#include "crf/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "crf/error.hpp"

namespace crf {

namespace {

constexpr Complex I{0.0, 1.0};

}  // namespace

SpectralField to_spectral(const PhysicalField& field) {
  if (!field.all_finite()) throw InvalidArgument("non-finite values in physical field");
  SpectralField out(field.grid(), field.rank());
  for (int c = 0; c < field.components(); ++c) field.grid()->forward(field.component(c), out.component(c));
  return out;
}

PhysicalField to_physical(const SpectralField& field) {
  PhysicalField out(field.grid(), field.rank());
  for (int c = 0; c < field.components(); ++c) field.grid()->backward(field.component(c), out.component(c));
  return out;
}

SpectralField spectral_derivative(const SpectralField& field, Derivative kind) {
  const Grid& g = *field.grid();
  const int d = g.dim();
  const std::size_t ns = g.spectral_size();
  const Rank r = field.rank();

  auto mismatch = [&]() { return InvalidArgument("rank not compatible with requested derivative"); };

  SpectralField out;
  switch (kind) {
    case Derivative::gradient: {
      if (r == Rank::scalar) {
        out = SpectralField(field.grid(), Rank::vector);
        auto u = field.component(0);
        for (int j = 0; j < d; ++j) {
          auto o = out.component(j);
          for (std::size_t s = 0; s < ns; ++s) o[s] = I * g.wavevector(s)[j] * u[s];
        }
      } else if (r == Rank::vector) {
        out = SpectralField(field.grid(), Rank::tensor);
        for (int i = 0; i < d; ++i) {
          auto u = field.component(i);
          for (int j = 0; j < d; ++j) {
            auto o = out.component(tensor_index(i, j, d));
            for (std::size_t s = 0; s < ns; ++s) o[s] = I * g.wavevector(s)[j] * u[s];
          }
        }
      } else {
        throw mismatch();
      }
      break;
    }
    case Derivative::divergence: {
      if (r == Rank::vector) {
        out = SpectralField(field.grid(), Rank::scalar);
        auto o = out.component(0);
        for (int j = 0; j < d; ++j) {
          auto u = field.component(j);
          for (std::size_t s = 0; s < ns; ++s) o[s] += I * g.wavevector(s)[j] * u[s];
        }
      } else if (r == Rank::sym_tensor || r == Rank::tensor) {
        out = SpectralField(field.grid(), Rank::vector);
        for (int i = 0; i < d; ++i) {
          auto o = out.component(i);
          for (int j = 0; j < d; ++j) {
            const int slot = r == Rank::sym_tensor ? sym_index(i, j, d) : tensor_index(i, j, d);
            auto u = field.component(slot);
            for (std::size_t s = 0; s < ns; ++s) o[s] += I * g.wavevector(s)[j] * u[s];
          }
        }
      } else {
        throw mismatch();
      }
      break;
    }
    case Derivative::laplacian: {
      out = SpectralField(field.grid(), r);
      for (int c = 0; c < field.components(); ++c) {
        auto u = field.component(c);
        auto o = out.component(c);
        for (std::size_t s = 0; s < ns; ++s) o[s] = -g.k2(s) * u[s];
      }
      break;
    }
    case Derivative::sym_gradient: {
      if (r != Rank::vector) throw mismatch();
      out = SpectralField(field.grid(), Rank::sym_tensor);
      for (int i = 0; i < d; ++i) {
        for (int j = i; j < d; ++j) {
          auto o = out.component(sym_index(i, j, d));
          auto ui = field.component(i);
          auto uj = field.component(j);
          for (std::size_t s = 0; s < ns; ++s) {
            const auto& k = g.wavevector(s);
            o[s] = 0.5 * I * (k[j] * ui[s] + k[i] * uj[s]);
          }
        }
      }
      break;
    }
  }
  out.set_zero_mean(true);
  return out;
}

SpectralField leray_project(const SpectralField& v) {
  if (v.rank() != Rank::vector) throw InvalidArgument("leray_project expects a vector field");
  const Grid& g = *v.grid();
  const int d = g.dim();
  SpectralField out = v;
  std::array<std::span<Complex>, 3> comp;
  for (int i = 0; i < d; ++i) comp[i] = out.component(i);
  for (std::size_t s = 0; s < g.spectral_size(); ++s) {
    const double kk = g.k2(s);
    if (kk == 0.0) continue;
    const auto& k = g.wavevector(s);
    Complex kdotv{};
    for (int i = 0; i < d; ++i) kdotv += k[i] * comp[i][s];
    const Complex a = kdotv / kk;
    for (int i = 0; i < d; ++i) comp[i][s] -= a * k[i];
  }
  out.set_divergence_free(true);
  return out;
}

void dealias_in_place(SpectralField& field, DealiasRule rule, bool zero_mean) {
  const Grid& g = *field.grid();
  const int n = g.modes();
  for (int c = 0; c < field.components(); ++c) {
    auto u = field.component(c);
    if (rule == DealiasRule::two_thirds) {
      for (std::size_t s = 0; s < g.spectral_size(); ++s)
        if (3 * g.max_abs_frequency(s) > n) u[s] = 0.0;
    }
    if (zero_mean) u[0] = 0.0;
  }
  if (zero_mean) field.set_zero_mean(true);
}

SpectralField dealias_and_zero_mean(const SpectralField& field, DealiasRule rule, bool zero_mean) {
  SpectralField out = field;
  dealias_in_place(out, rule, zero_mean);
  return out;
}

double inner(const SpectralField& a, const SpectralField& b) {
  if (a.grid() != b.grid() || a.rank() != b.rank()) throw InvalidArgument("inner product shape mismatch");
  const Grid& g = *a.grid();
  const int d = g.dim();
  double total = 0.0;
  for (int c = 0; c < a.components(); ++c) {
    double mult = 1.0;
    if (a.rank() == Rank::sym_tensor && c >= d) mult = 2.0;
    auto ua = a.component(c);
    auto ub = b.component(c);
    double acc = 0.0;
    for (std::size_t s = 0; s < g.spectral_size(); ++s)
      acc += g.weight(s) * (ua[s].real() * ub[s].real() + ua[s].imag() * ub[s].imag());
    total += mult * acc;
  }
  return total;
}

double mean(const SpectralField& field, int c) { return field.component(c)[0].real(); }

double divergence_ratio(const SpectralField& v) {
  if (v.rank() != Rank::vector) throw InvalidArgument("divergence_ratio expects a vector field");
  const Grid& g = *v.grid();
  const int d = g.dim();
  double num = 0.0;
  double den = 0.0;
  for (std::size_t s = 0; s < g.spectral_size(); ++s) {
    const auto& k = g.wavevector(s);
    Complex kv{};
    double vv = 0.0;
    for (int i = 0; i < d; ++i) {
      kv += k[i] * v.component(i)[s];
      vv += std::norm(v.component(i)[s]);
    }
    num = std::max(num, std::abs(kv));
    den = std::max(den, std::sqrt(g.k2(s) * vv));
  }
  return den > 0.0 ? num / den : 0.0;
}

double integrate(std::span<const double> samples) {
  if (samples.empty()) return 0.0;
  return std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(samples.size());
}

}  // namespace crf
