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

#include "crf/constitutive.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "crf/error.hpp"

namespace crf {

double frobenius(const Mat3& a, const Mat3& b, int d) {
  double s = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) s += a[i][j] * b[i][j];
  return s;
}

PowerLawIndex PowerLawIndex::constant(double p) {
  PowerLawIndex idx;
  idx.form_ = ProfileForm::constant;
  idx.p_minus_ = idx.p_plus_ = idx.anchor_ = p;
  idx.validate();
  return idx;
}

PowerLawIndex PowerLawIndex::affine_clamped(double p_minus, double p_plus, double slope, double anchor) {
  PowerLawIndex idx;
  idx.form_ = ProfileForm::affine_clamped;
  idx.p_minus_ = p_minus;
  idx.p_plus_ = p_plus;
  idx.slope_ = slope;
  idx.anchor_ = anchor;
  idx.validate();
  return idx;
}

PowerLawIndex PowerLawIndex::tanh_profile(double p_minus, double p_plus, double center, double width,
                                          bool decreasing) {
  PowerLawIndex idx;
  idx.form_ = ProfileForm::tanh_profile;
  idx.p_minus_ = p_minus;
  idx.p_plus_ = p_plus;
  idx.center_ = center;
  idx.width_ = width;
  idx.decreasing_ = decreasing;
  idx.validate();
  return idx;
}

void PowerLawIndex::validate() const {
  if (!(p_minus_ > 1.0)) throw InvalidArgument("power-law index requires p- > 1");
  if (!(p_plus_ >= p_minus_)) throw InvalidArgument("power-law index requires p+ >= p-");
  if (!std::isfinite(p_plus_)) throw InvalidArgument("power-law index requires finite p+");
  if (form_ == ProfileForm::tanh_profile && !(width_ > 0.0))
    throw InvalidArgument("tanh profile requires width > 0");
  if (form_ == ProfileForm::affine_clamped && !std::isfinite(slope_))
    throw InvalidArgument("affine profile requires a finite slope");
}

double PowerLawIndex::operator()(double c) const {
  switch (form_) {
    case ProfileForm::constant:
      return p_minus_;
    case ProfileForm::affine_clamped:
      return std::clamp(anchor_ + slope_ * c, p_minus_, p_plus_);
    case ProfileForm::tanh_profile: {
      const double s = decreasing_ ? -1.0 : 1.0;
      const double p = 0.5 * (p_plus_ + p_minus_) + s * 0.5 * (p_plus_ - p_minus_) * std::tanh((c - center_) / width_);
      return std::clamp(p, p_minus_, p_plus_);
    }
  }
  return p_minus_;
}

PowerLawIndex::Slope PowerLawIndex::derivative(double c) const {
  switch (form_) {
    case ProfileForm::constant:
      return {0.0, false};
    case ProfileForm::affine_clamped: {
      if (slope_ == 0.0) return {0.0, false};
      const double u = anchor_ + slope_ * c;
      const bool corner = u == p_minus_ || u == p_plus_;
      // right derivative: inside the band immediately to the right of c
      const bool inside = slope_ > 0.0 ? (u >= p_minus_ && u < p_plus_) : (u > p_minus_ && u <= p_plus_);
      return {inside ? slope_ : 0.0, corner};
    }
    case ProfileForm::tanh_profile: {
      const double s = decreasing_ ? -1.0 : 1.0;
      const double t = std::tanh((c - center_) / width_);
      return {s * 0.5 * (p_plus_ - p_minus_) * (1.0 - t * t) / width_, false};
    }
  }
  return {0.0, false};
}

double PowerLawIndex::lipschitz_bound() const {
  switch (form_) {
    case ProfileForm::constant:
      return 0.0;
    case ProfileForm::affine_clamped:
      return p_plus_ > p_minus_ ? std::abs(slope_) : 0.0;
    case ProfileForm::tanh_profile:
      return 0.5 * (p_plus_ - p_minus_) / width_;
  }
  return 0.0;
}

std::pair<double, double> PowerLawIndex::sample_range() const {
  switch (form_) {
    case ProfileForm::constant:
      return {-1.0, 1.0};
    case ProfileForm::affine_clamped: {
      if (slope_ == 0.0) return {-1.0, 1.0};
      double a = (p_minus_ - anchor_) / slope_;
      double b = (p_plus_ - anchor_) / slope_;
      if (a > b) std::swap(a, b);
      const double pad = 0.25 * std::max(b - a, 1e-3);
      return {a - pad, b + pad};
    }
    case ProfileForm::tanh_profile:
      return {center_ - 4.0 * width_, center_ + 4.0 * width_};
  }
  return {-1.0, 1.0};
}

Mat3 stress(const StressModel& model, double c, const Mat3& dt, int d) {
  const double p = model.index(c);
  const double w = std::pow(1.0 + frobenius_norm2(dt, d), 0.5 * (p - 2.0));
  Mat3 s{};
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) s[i][j] = 2.0 * model.nu0 * w * dt[i][j];
  return s;
}

PhysicalField eval_stress(const StressModel& model, const PhysicalField& c, const PhysicalField& D) {
  if (c.rank() != Rank::scalar || D.rank() != Rank::sym_tensor) throw InvalidArgument("eval_stress rank mismatch");
  if (c.grid() != D.grid()) throw InvalidArgument("eval_stress grid mismatch");
  if (!c.all_finite() || !D.all_finite()) throw InvalidArgument("eval_stress received non-finite input");
  const int d = c.grid()->dim();
  const int nc = D.components();
  PhysicalField S(D.grid(), Rank::sym_tensor);
  auto cv = c.component(0);
  for (std::size_t x = 0; x < c.points(); ++x) {
    double dd = 0.0;
    for (int a = 0; a < nc; ++a) {
      const double v = D.component(a)[x];
      dd += (a < d ? 1.0 : 2.0) * v * v;
    }
    const double p = model.index(cv[x]);
    const double scale = 2.0 * model.nu0 * std::pow(1.0 + dd, 0.5 * (p - 2.0));
    for (int a = 0; a < nc; ++a) S.component(a)[x] = scale * D.component(a)[x];
  }
  return S;
}

Tensor4 stress_jacobian_D(const StressModel& model, double c, const Mat3& dt, int d) {
  const double p = model.index(c);
  const double dd = frobenius_norm2(dt, d);
  const double w = std::pow(1.0 + dd, 0.5 * (p - 2.0));
  const double a = 2.0 * model.nu0 * w;
  const double b = (p - 2.0) / (1.0 + dd);
  Tensor4 J{};
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int h = 0; h < d; ++h) {
          const double sym = 0.5 * ((i == k && j == h ? 1.0 : 0.0) + (i == h && j == k ? 1.0 : 0.0));
          J[i][j][k][h] = a * (sym + b * dt[i][j] * dt[k][h]);
        }
  return J;
}

StressSlope stress_jacobian_c(const StressModel& model, double c, const Mat3& dt, int d) {
  const auto slope = model.index.derivative(c);
  const double p = model.index(c);
  const double dd = frobenius_norm2(dt, d);
  const double factor = 2.0 * model.nu0 * slope.value * 0.5 * std::log1p(dd) * std::pow(1.0 + dd, 0.5 * (p - 2.0));
  StressSlope out{{}, slope.corner};
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out.value[i][j] = factor * dt[i][j];
  return out;
}

double monotonicity_product(const StressModel& model, double c, const Mat3& d1, const Mat3& d2, int d) {
  const Mat3 s1 = stress(model, c, d1, d);
  const Mat3 s2 = stress(model, c, d2, d);
  double acc = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) acc += (s1[i][j] - s2[i][j]) * (d1[i][j] - d2[i][j]);
  return acc;
}

namespace {

// Orthonormal basis of symmetric d x d matrices under the Frobenius product.
std::vector<Mat3> symmetric_basis(int d) {
  std::vector<Mat3> basis;
  for (int i = 0; i < d; ++i) {
    Mat3 e{};
    e[i][i] = 1.0;
    basis.push_back(e);
  }
  const double r = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      Mat3 e{};
      e[i][j] = e[j][i] = r;
      basis.push_back(e);
    }
  return basis;
}

double operator_norm(const Tensor4& J, const std::vector<Mat3>& basis, int d) {
  const auto m = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd M(m, m);
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = 0; b < m; ++b) {
      double acc = 0.0;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          for (int k = 0; k < d; ++k)
            for (int h = 0; h < d; ++h) acc += basis[a][i][j] * J[i][j][k][h] * basis[b][k][h];
      M(a, b) = acc;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

template <class Rng>
Mat3 random_symmetric(Rng& rng, int d, double magnitude) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Mat3 m{};
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) m[i][j] = m[j][i] = normal(rng);
  const double norm = std::sqrt(frobenius_norm2(m, d));
  if (norm == 0.0) {
    m[0][0] = magnitude;
    return m;
  }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m[i][j] *= magnitude / norm;
  return m;
}

std::string describe(const char* what, double c, const Mat3& a, const Mat3& b, int d) {
  std::ostringstream os;
  os.precision(17);
  os << what << " at c=" << c << " |A|=" << std::sqrt(frobenius_norm2(a, d))
     << " |B|=" << std::sqrt(frobenius_norm2(b, d));
  return os.str();
}

}  // namespace

PropertyReport check_properties(const StressModel& model, std::int64_t n_samples, std::uint64_t seed, int d) {
  if (n_samples < 1) throw InvalidArgument("check_properties requires n_samples >= 1");
  if (d != 2 && d != 3) throw InvalidArgument("check_properties requires d in {2,3}");
  if (!(model.nu0 > 0.0)) throw InvalidArgument("stress model requires nu0 > 0");

  std::mt19937_64 rng(seed);
  const auto [c_lo, c_hi] = model.index.sample_range();
  std::uniform_real_distribution<double> c_dist(c_lo, c_hi);
  std::uniform_real_distribution<double> log_mag(-3.0, 3.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto basis = symmetric_basis(d);

  PropertyReport rep;
  rep.samples = n_samples;
  rep.dim = d;
  rep.K1_measured = std::numeric_limits<double>::infinity();
  rep.K4_measured = std::numeric_limits<double>::infinity();

  auto violate = [&](std::string msg) {
    if (rep.violations++ == 0) rep.witness = std::move(msg);
  };

  for (std::int64_t it = 0; it < n_samples; ++it) {
    const double c = c_dist(rng);
    const Mat3 D1 = random_symmetric(rng, d, std::pow(10.0, log_mag(rng)));
    Mat3 D2 = random_symmetric(rng, d, std::pow(10.0, log_mag(rng)));
    // a quarter of the pairs are close neighbours, where the monotonicity
    // ratio approaches the quadratic-form bound
    if (unit(rng) < 0.25) {
      const Mat3 dir = random_symmetric(rng, d, std::sqrt(frobenius_norm2(D1, d)) * std::pow(10.0, -3.0 * unit(rng)));
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) D2[i][j] = D1[i][j] + dir[i][j];
    }
    const Mat3 B = random_symmetric(rng, d, 1.0);

    const double p = model.index(c);
    const double dd1 = frobenius_norm2(D1, d);
    const double w = std::pow(1.0 + dd1, 0.5 * (p - 2.0));

    // (P1) quadratic form lower bound
    const Tensor4 J = stress_jacobian_D(model, c, D1, d);
    double q = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
          for (int h = 0; h < d; ++h) q += J[i][j][k][h] * B[i][j] * B[k][h];
    const double r1 = q / (w * frobenius_norm2(B, d));
    if (!(r1 > 0.0)) violate(describe("quadratic form not positive", c, D1, B, d));
    rep.K1_measured = std::min(rep.K1_measured, r1);

    // (P1) operator norm upper bound
    rep.K2_measured = std::max(rep.K2_measured, operator_norm(J, basis, d) / w);

    // (P1) concentration derivative bound
    const auto dSdc = stress_jacobian_c(model, c, D1, d);
    const double bound3 = std::pow(1.0 + dd1, 0.5 * (p - 1.0)) * std::log(2.0 + std::sqrt(dd1));
    rep.K3_measured = std::max(rep.K3_measured, std::sqrt(frobenius_norm2(dSdc.value, d)) / bound3);

    // (P2) monotonicity
    Mat3 diff{};
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) diff[i][j] = D1[i][j] - D2[i][j];
    const double diff2 = frobenius_norm2(diff, d);
    if (diff2 > 0.0) {
      const double m = monotonicity_product(model, c, D1, D2, d);
      const double weight = std::pow(1.0 + dd1 + frobenius_norm2(D2, d), 0.5 * (p - 2.0));
      const double r4 = m / (weight * diff2);
      if (!(r4 > 0.0)) violate(describe("monotonicity violated", c, D1, D2, d));
      rep.K4_measured = std::min(rep.K4_measured, r4);
    }
  }
  if (!std::isfinite(rep.K4_measured)) rep.K4_measured = 0.0;
  return rep;
}

}  // namespace crf
