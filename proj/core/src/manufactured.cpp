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

#include "crf/manufactured.hpp"

#include <string>

#include "crf/error.hpp"

namespace crf {

ManufacturedKind parse_manufactured_kind(std::string_view name) {
  if (name == "decaying_mode_2d") return ManufacturedKind::decaying_mode_2d;
  if (name == "decaying_mode_3d") return ManufacturedKind::decaying_mode_3d;
  if (name == "steady_shear_2d") return ManufacturedKind::steady_shear_2d;
  throw InvalidArgument("unknown manufactured case '" + std::string(name) + "'");
}

std::string_view to_string(ManufacturedKind kind) {
  switch (kind) {
    case ManufacturedKind::decaying_mode_2d: return "decaying_mode_2d";
    case ManufacturedKind::decaying_mode_3d: return "decaying_mode_3d";
    case ManufacturedKind::steady_shear_2d: return "steady_shear_2d";
  }
  return "unknown";
}

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

enum Factor { one, sine, cosine };

// v_i = coef * prod_j factor_ij(2 pi x_j)
struct TrigTerm {
  double coef = 0.0;
  std::array<Factor, 3> f{one, one, one};
};

std::array<TrigTerm, 3> velocity_terms(ManufacturedKind kind) {
  switch (kind) {
    case ManufacturedKind::decaying_mode_2d:
      return {TrigTerm{1.0, {sine, cosine, one}}, TrigTerm{-1.0, {cosine, sine, one}}, TrigTerm{}};
    case ManufacturedKind::decaying_mode_3d:
      return {TrigTerm{1.0, {sine, cosine, cosine}}, TrigTerm{-1.0, {cosine, sine, cosine}}, TrigTerm{}};
    case ManufacturedKind::steady_shear_2d:
      return {TrigTerm{1.0, {one, sine, one}}, TrigTerm{}, TrigTerm{}};
  }
  return {};
}

double value(Factor f, double th) {
  switch (f) {
    case sine: return std::sin(th);
    case cosine: return std::cos(th);
    default: return 1.0;
  }
}

double first(Factor f, double th) {
  switch (f) {
    case sine: return two_pi * std::cos(th);
    case cosine: return -two_pi * std::sin(th);
    default: return 0.0;
  }
}

double second(Factor f, double th) {
  switch (f) {
    case sine: return -two_pi * two_pi * std::sin(th);
    case cosine: return -two_pi * two_pi * std::cos(th);
    default: return 0.0;
  }
}

// d^(n_j) in each direction of prod_j factor_j.
double partial(const TrigTerm& term, const std::array<double, 3>& th, const std::array<int, 3>& order) {
  double out = term.coef;
  for (int j = 0; j < 3; ++j) {
    if (order[j] == 0) out *= value(term.f[j], th[j]);
    else if (order[j] == 1) out *= first(term.f[j], th[j]);
    else out *= second(term.f[j], th[j]);
  }
  return out;
}

}  // namespace

ManufacturedCase::ManufacturedCase(ManufacturedKind kind, const ManufacturedParams& params, StressModel model)
    : kind_(kind), params_(params), model_(std::move(model)) {
  if (!(params.kernel_radius >= 0.0 && params.kernel_radius < 1.0))
    throw InvalidArgument("kernel_radius must lie in [0, 1)");
  if (!(model_.nu0 > 0.0)) throw InvalidArgument("nu0 must be positive");
}

std::array<double, 3> ManufacturedCase::momentum_forcing(const std::array<double, 3>& x, double t) const {
  const int d = dim();
  const double a = amplitude_v(t);
  const auto terms = velocity_terms(kind_);
  const std::array<double, 3> th{two_pi * x[0], two_pi * x[1], two_pi * x[2]};

  // v, grad v (dv[i][j] = d_j v_i), second derivatives ddv[i][j][k]
  double v[3]{}, dv[3][3]{}, ddv[3][3][3]{};
  for (int i = 0; i < d; ++i) {
    v[i] = a * partial(terms[i], th, {0, 0, 0});
    for (int j = 0; j < d; ++j) {
      std::array<int, 3> o{0, 0, 0};
      o[j] = 1;
      dv[i][j] = a * partial(terms[i], th, o);
      for (int k = 0; k < d; ++k) {
        std::array<int, 3> o2{0, 0, 0};
        ++o2[j];
        ++o2[k];
        ddv[i][j][k] = a * partial(terms[i], th, o2);
      }
    }
  }

  // concentration and its gradient
  const double c = concentration(x, t);
  const double ac = amplitude_c(t);
  const double r = params_.kernel_radius;
  double P[3]{1.0, 1.0, 1.0}, dP[3]{};
  for (int j = 0; j < d; ++j) {
    const double den = 1.0 - 2.0 * r * std::cos(th[j]) + r * r;
    P[j] = (1.0 - r * r) / den;
    dP[j] = -(1.0 - r * r) * 2.0 * r * std::sin(th[j]) * two_pi / (den * den);
  }
  double grad_c[3]{};
  for (int j = 0; j < d; ++j) {
    double g = ac * dP[j];
    for (int l = 0; l < d; ++l)
      if (l != j) g *= P[l];
    grad_c[j] = g;
  }

  // strain rate and its derivatives
  double D[3][3]{}, dD[3][3][3]{};
  double norm2 = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      D[i][j] = 0.5 * (dv[i][j] + dv[j][i]);
      norm2 += D[i][j] * D[i][j];
      for (int k = 0; k < d; ++k) dD[i][j][k] = 0.5 * (ddv[i][j][k] + ddv[j][i][k]);
    }
  const double p = model_.index(c);
  const double dp = model_.index.derivative(c).value;
  const double base = 1.0 + norm2;
  const double w = std::pow(base, 0.5 * (p - 2.0));
  double dw[3]{};
  for (int k = 0; k < d; ++k) {
    double dnorm2 = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) dnorm2 += 2.0 * D[i][j] * dD[i][j][k];
    dw[k] = w * (0.5 * dp * grad_c[k] * std::log(base) + 0.5 * (p - 2.0) * dnorm2 / base);
  }

  std::array<double, 3> f{};
  const double decay = steady() ? 0.0 : params_.velocity_decay;
  for (int i = 0; i < d; ++i) {
    double div_s = 0.0;
    double adv = 0.0;
    for (int j = 0; j < d; ++j) {
      div_s += 2.0 * model_.nu0 * (dw[j] * D[i][j] + w * dD[i][j][j]);
      adv += v[j] * dv[i][j];
    }
    f[i] = -decay * v[i] + adv - div_s;
  }
  if (kind_ == ManufacturedKind::decaying_mode_2d) {
    // grad of a^2/4 (cos 2X + cos 2Y)
    f[0] += -a * a * std::numbers::pi * std::sin(2.0 * th[0]);
    f[1] += -a * a * std::numbers::pi * std::sin(2.0 * th[1]);
  }
  return f;
}

double ManufacturedCase::source_mean(double t) const {
  // v.grad c* and lap c* integrate to zero; the remainder is a'(t) (mean(P)^d - 1).
  constexpr int m = 4096;
  double acc = 0.0;
  for (int i = 0; i < m; ++i) acc += kernel((i + 0.5) / m);
  const double mean_p = acc / m;
  const double da = steady() ? 0.0 : -params_.conc_decay * amplitude_c(t);
  return da * (std::pow(mean_p, dim()) - 1.0);
}

PhysicalField ManufacturedCase::velocity_field(const GridPtr& grid, double t) const {
  if (grid->dim() != dim()) throw InvalidArgument("grid dimension does not match manufactured case");
  PhysicalField out(grid, Rank::vector);
  for (std::size_t x = 0; x < grid->points(); ++x) {
    const auto v = velocity(grid->point(x), t);
    for (int i = 0; i < dim(); ++i) out.component(i)[x] = v[i];
  }
  return out;
}

PhysicalField ManufacturedCase::concentration_field(const GridPtr& grid, double t) const {
  if (grid->dim() != dim()) throw InvalidArgument("grid dimension does not match manufactured case");
  PhysicalField out(grid, Rank::scalar);
  for (std::size_t x = 0; x < grid->points(); ++x) out.component(0)[x] = concentration(grid->point(x), t);
  return out;
}

Forcing ManufacturedCase::forcing() const {
  Forcing out;
  const ManufacturedCase self = *this;
  out.f = [self](const GridPtr& grid, double t) {
    PhysicalField f(grid, Rank::vector);
    for (std::size_t x = 0; x < grid->points(); ++x) {
      const auto v = self.momentum_forcing(grid->point(x), t);
      for (int i = 0; i < grid->dim(); ++i) f.component(i)[x] = v[i];
    }
    return f;
  };
  out.g = [self](const GridPtr& grid, double t) {
    PhysicalField g(grid, Rank::vector);
    for (std::size_t x = 0; x < grid->points(); ++x) {
      const auto v = self.flux(grid->point(x), t);
      for (int i = 0; i < grid->dim(); ++i) g.component(i)[x] = v[i];
    }
    return g;
  };
  return out;
}

ManufacturedCase make_manufactured(ManufacturedKind kind, const ManufacturedParams& params,
                                   const StressModel& model) {
  ManufacturedCase mc(kind, params, model);
  const double scale = std::abs(params.conc_amplitude) + std::abs(params.conc_mean) + 1.0;
  for (double t : {0.0, 0.5, 1.0}) {
    const double m = mc.source_mean(t);
    if (!(std::abs(m) <= 1e-12 * scale))
      throw Error("manufactured concentration source has nonzero mean (" + std::to_string(m) + ")");
  }
  return mc;
}

}  // namespace crf
