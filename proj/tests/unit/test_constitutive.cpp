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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "crf/constitutive.hpp"
#include "crf/error.hpp"
#include "crf/grid.hpp"
#include "test_support.hpp"

namespace crf {
namespace {

using LMat = std::array<std::array<long double, 3>, 3>;

// Independent long-double stress oracle.
long double oracle_p(const PowerLawIndex& ix, long double c) {
  switch (ix.form()) {
    case ProfileForm::constant: return ix.p_minus();
    case ProfileForm::affine_clamped:
      return std::clamp<long double>(ix.anchor() + ix.slope() * c, ix.p_minus(), ix.p_plus());
    case ProfileForm::tanh_profile: {
      const long double s = ix.decreasing() ? -1.0L : 1.0L;
      return (ix.p_plus() + ix.p_minus()) / 2.0L +
             s * (ix.p_plus() - ix.p_minus()) / 2.0L * std::tanh((c - ix.center()) / ix.width());
    }
  }
  return 0;
}

LMat oracle_stress(const StressModel& m, long double c, const LMat& D, int d) {
  long double n2 = 0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) n2 += D[i][j] * D[i][j];
  const long double w = 2.0L * m.nu0 * std::pow(1.0L + n2, (oracle_p(m.index, c) - 2.0L) / 2.0L);
  LMat S{};
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) S[i][j] = w * D[i][j];
  return S;
}

Mat3 random_sym(std::mt19937_64& rng, int d, double magnitude) {
  std::normal_distribution<double> nd;
  Mat3 a{};
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) a[i][j] = a[j][i] = nd(rng);
  const double s = magnitude / std::sqrt(frobenius_norm2(a, d));
  for (auto& row : a)
    for (double& v : row) v *= s;
  return a;
}

StressModel synovial_model() { return {0.7, PowerLawIndex::tanh_profile(2.0, 2.9, 0.5, 0.2)}; }

TEST(PowerLawIndex, FactoriesValidate) {
  EXPECT_THROW(PowerLawIndex::constant(1.0), InvalidArgument);
  EXPECT_THROW(PowerLawIndex::tanh_profile(2.5, 2.0, 0.0, 1.0), InvalidArgument);
  EXPECT_THROW(PowerLawIndex::tanh_profile(2.0, 3.0, 0.0, 0.0), InvalidArgument);
  EXPECT_THROW(PowerLawIndex::affine_clamped(0.5, 3.0, 1.0, 2.0), InvalidArgument);
}

TEST(PowerLawIndex, ValuesStayWithinBounds) {
  const auto tanh_ix = PowerLawIndex::tanh_profile(1.6, 2.4, 0.3, 0.1, false);
  const auto aff = PowerLawIndex::affine_clamped(1.8, 2.6, 2.0, 1.5);
  for (double c = -5.0; c <= 5.0; c += 0.01) {
    for (const auto* ix : {&tanh_ix, &aff}) {
      const double p = (*ix)(c);
      EXPECT_GE(p, ix->p_minus());
      EXPECT_LE(p, ix->p_plus());
    }
  }
  EXPECT_DOUBLE_EQ(PowerLawIndex::constant(2.3)(17.0), 2.3);
  EXPECT_DOUBLE_EQ(aff(0.0), 1.8);
  EXPECT_DOUBLE_EQ(aff(0.25), 2.0);
  EXPECT_DOUBLE_EQ(aff(10.0), 2.6);
}

TEST(PowerLawIndex, DerivativeMatchesDifferenceQuotient) {
  const auto ix = PowerLawIndex::tanh_profile(2.0, 2.9, 0.5, 0.2);
  for (double c = -0.5; c <= 1.5; c += 0.05) {
    const double h = 1e-6;
    const double fd = (ix(c + h) - ix(c - h)) / (2 * h);
    EXPECT_NEAR(ix.derivative(c).value, fd, 1e-7);
    EXPECT_LE(std::abs(ix.derivative(c).value), ix.lipschitz_bound() * (1 + 1e-12));
  }
}

TEST(PowerLawIndex, ClampCornersAreFlagged) {
  const auto aff = PowerLawIndex::affine_clamped(2.0, 3.0, 1.0, 1.5);  // corners at c = 0.5 and 1.5
  EXPECT_TRUE(aff.derivative(0.5).corner);
  EXPECT_TRUE(aff.derivative(1.5).corner);
  EXPECT_FALSE(aff.derivative(1.0).corner);
  EXPECT_DOUBLE_EQ(aff.derivative(1.0).value, 1.0);
  EXPECT_DOUBLE_EQ(aff.derivative(0.5).value, 1.0);  // right derivative
  EXPECT_DOUBLE_EQ(aff.derivative(1.5).value, 0.0);
}

TEST(Stress, NewtonianIsLinear) {
  StressModel m{0.3, PowerLawIndex::constant(2.0)};
  std::mt19937_64 rng(1);
  const Mat3 D = random_sym(rng, 3, 12.0);
  const Mat3 S = stress(m, 0.0, D, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_DOUBLE_EQ(S[i][j], 2 * 0.3 * D[i][j]);
}

TEST(Stress, MatchesOracle) {
  const StressModel m = synovial_model();
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> lg(-3, 3), uc(-0.5, 1.5);
  for (int t = 0; t < 500; ++t) {
    const int d = 2 + t % 2;
    const Mat3 D = random_sym(rng, d, std::pow(10.0, lg(rng)));
    const double c = uc(rng);
    const Mat3 S = stress(m, c, D, d);
    LMat DL{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) DL[i][j] = D[i][j];
    const LMat So = oracle_stress(m, c, DL, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) EXPECT_NEAR(S[i][j], double(So[i][j]), 1e-12 * (1 + std::abs(double(So[i][j]))));
  }
}

TEST(Stress, JacobiansMatchCentralDifferences) {
  const StressModel m = synovial_model();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> lg(-3, 3), uc(-0.5, 1.5);
  for (int t = 0; t < 2000; ++t) {
    const int d = 2 + t % 2;
    const double mag = std::pow(10.0, lg(rng));
    const Mat3 D = random_sym(rng, d, mag);
    const Mat3 B = random_sym(rng, d, 1.0);
    const double c = uc(rng);

    const Tensor4 J = stress_jacobian_D(m, c, D, d);
    const long double h = 1e-5L * std::max(1.0, mag);
    LMat Dp{}, Dm{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        Dp[i][j] = D[i][j] + h * B[i][j];
        Dm[i][j] = D[i][j] - h * B[i][j];
      }
    const LMat Sp = oracle_stress(m, c, Dp, d), Sm = oracle_stress(m, c, Dm, d);
    double err = 0.0, ref = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        double jb = 0.0;
        for (int k = 0; k < d; ++k)
          for (int l = 0; l < d; ++l) jb += J[i][j][k][l] * B[k][l];
        const double fd = double((Sp[i][j] - Sm[i][j]) / (2 * h));
        err = std::max(err, std::abs(jb - fd));
        ref = std::max(ref, std::abs(fd));
      }
    ASSERT_LE(err, 1e-6 * ref) << "D magnitude " << mag;

    const StressSlope dc = stress_jacobian_c(m, c, D, d);
    const long double hc = 1e-5L;
    const LMat Cp = oracle_stress(m, c + hc, LMat{{{D[0][0], D[0][1], D[0][2]}, {D[1][0], D[1][1], D[1][2]}, {D[2][0], D[2][1], D[2][2]}}}, d);
    const LMat Cm = oracle_stress(m, c - hc, LMat{{{D[0][0], D[0][1], D[0][2]}, {D[1][0], D[1][1], D[1][2]}, {D[2][0], D[2][1], D[2][2]}}}, d);
    // tanh saturates, so the scale is floored at 1e-6 |S|
    const Mat3 S = stress(m, c, D, d);
    err = ref = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const double fd = double((Cp[i][j] - Cm[i][j]) / (2 * hc));
        err = std::max(err, std::abs(dc.value[i][j] - fd));
        ref = std::max({ref, std::abs(fd), 1e-6 * std::abs(S[i][j])});
      }
    ASSERT_LE(err, 1e-6 * ref);
  }
}

TEST(Stress, MonotoneOnRandomPairs) {
  const StressModel m{1.0, PowerLawIndex::tanh_profile(1.5, 3.5, 0.0, 0.3)};
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> lg(-3, 3), uc(-1, 1);
  for (int t = 0; t < 2000; ++t) {
    const Mat3 a = random_sym(rng, 3, std::pow(10.0, lg(rng)));
    const Mat3 b = random_sym(rng, 3, std::pow(10.0, lg(rng)));
    EXPECT_GT(monotonicity_product(m, uc(rng), a, b, 3), 0.0);
  }
}

TEST(Stress, FieldEvaluationMatchesPointwise) {
  const GridPtr g = make_grid(2, 8);
  const StressModel m = synovial_model();
  const PhysicalField c = testing::random_field(g, Rank::scalar, 9);
  const PhysicalField D = testing::random_field(g, Rank::sym_tensor, 10);
  const PhysicalField S = eval_stress(m, c, D);
  for (std::size_t x = 0; x < g->points(); ++x) {
    Mat3 Dx{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) Dx[i][j] = D.component(sym_index(i, j, 2))[x];
    const Mat3 Sx = stress(m, c.component(0)[x], Dx, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = i; j < 2; ++j) EXPECT_DOUBLE_EQ(S.component(sym_index(i, j, 2))[x], Sx[i][j]);
  }
}

TEST(PropertyCheck, NoViolationsAndDeterministic) {
  const StressModel m = synovial_model();
  const PropertyReport a = check_properties(m, 10000, 42, 3);
  EXPECT_EQ(a.samples, 10000);
  EXPECT_EQ(a.violations, 0) << a.witness;
  EXPECT_GT(a.K1_measured, 0.0);
  EXPECT_GT(a.K4_measured, 0.0);
  EXPECT_GE(a.K2_measured, a.K1_measured);
  const PropertyReport b = check_properties(m, 10000, 42, 3);
  EXPECT_EQ(a.K1_measured, b.K1_measured);
  EXPECT_EQ(a.K2_measured, b.K2_measured);
  EXPECT_EQ(a.K3_measured, b.K3_measured);
  EXPECT_EQ(a.K4_measured, b.K4_measured);
}

TEST(PropertyCheck, ShearThinningRangeAlsoPasses) {
  const StressModel m{0.5, PowerLawIndex::affine_clamped(1.3, 2.0, -1.0, 2.0)};
  const PropertyReport r = check_properties(m, 5000, 7, 2);
  EXPECT_TRUE(r.passed()) << r.witness;
}

TEST(PropertyCheck, RejectsBadArguments) {
  EXPECT_THROW(check_properties(synovial_model(), 0, 1, 3), InvalidArgument);
  EXPECT_THROW(check_properties(synovial_model(), 10, 1, 4), InvalidArgument);
}

}  // namespace
}  // namespace crf
