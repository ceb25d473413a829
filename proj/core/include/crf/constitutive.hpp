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
#include <cstdint>
#include <string>
#include <utility>

#include "crf/field.hpp"

namespace crf {

/// Small dense matrix used for pointwise tensor algebra; only the leading
/// d x d block is meaningful.
using Mat3 = std::array<std::array<double, 3>, 3>;
/// Fourth-order tensor T[i][j][k][h].
using Tensor4 = std::array<std::array<Mat3, 3>, 3>;

/// Frobenius product A:B over the leading d x d block.
double frobenius(const Mat3& a, const Mat3& b, int d);
inline double frobenius_norm2(const Mat3& a, int d) { return frobenius(a, a, d); }

enum class ProfileForm { constant, affine_clamped, tanh_profile };

/// Concentration-dependent power-law exponent p(c) with p- <= p(c) <= p+.
///
/// - constant:       p(c) = p- = p+.
/// - affine_clamped: p(c) = clamp(anchor + slope*c, p-, p+).
/// - tanh_profile:   p(c) = (p+ + p-)/2 + s (p+ - p-)/2 tanh((c - center)/width)
///                   with s = -1 (decreasing, the default) or s = +1.
class PowerLawIndex {
 public:
  static PowerLawIndex constant(double p);
  static PowerLawIndex affine_clamped(double p_minus, double p_plus, double slope, double anchor);
  static PowerLawIndex tanh_profile(double p_minus, double p_plus, double center, double width,
                                    bool decreasing = true);

  ProfileForm form() const noexcept { return form_; }
  double p_minus() const noexcept { return p_minus_; }
  double p_plus() const noexcept { return p_plus_; }
  double center() const noexcept { return center_; }
  double width() const noexcept { return width_; }
  double slope() const noexcept { return slope_; }
  double anchor() const noexcept { return anchor_; }
  bool decreasing() const noexcept { return decreasing_; }

  double operator()(double c) const;

  struct Slope {
    double value;
    bool corner;  // c sits on a clamp corner; value is the right derivative
  };
  Slope derivative(double c) const;

  /// Upper bound of |p'(c)| over the real line.
  double lipschitz_bound() const;

  /// Concentration interval containing every transition of the profile,
  /// used by randomized checks.
  std::pair<double, double> sample_range() const;

 private:
  PowerLawIndex() = default;
  void validate() const;

  ProfileForm form_ = ProfileForm::constant;
  double p_minus_ = 2.0;
  double p_plus_ = 2.0;
  double center_ = 0.0;
  double width_ = 1.0;
  double slope_ = 0.0;
  double anchor_ = 2.0;
  bool decreasing_ = true;
};

inline double eval_p(const PowerLawIndex& index, double c) { return index(c); }

/// S(c, D) = 2 nu0 (1 + |D|^2)^((p(c)-2)/2) D.
struct StressModel {
  double nu0 = 1.0;
  PowerLawIndex index = PowerLawIndex::constant(2.0);
};

/// Pointwise stress for a d x d symmetric D.
Mat3 stress(const StressModel& model, double c, const Mat3& d_tensor, int d);

/// Pointwise stress over a grid; c is a scalar field and D a symmetric
/// tensor field on the same grid.
PhysicalField eval_stress(const StressModel& model, const PhysicalField& c, const PhysicalField& D);

/// dS_ij/dD_kh restricted to symmetric directions:
/// 2 nu0 w [ (d_ik d_jh + d_ih d_jk)/2 + (p-2)/(1+|D|^2) D_ij D_kh ],
/// w = (1+|D|^2)^((p-2)/2).
Tensor4 stress_jacobian_D(const StressModel& model, double c, const Mat3& d_tensor, int d);

struct StressSlope {
  Mat3 value;
  bool corner;
};

/// dS/dc = 2 nu0 p'(c) log(1+|D|^2)/2 (1+|D|^2)^((p-2)/2) D.
StressSlope stress_jacobian_c(const StressModel& model, double c, const Mat3& d_tensor, int d);

/// (S(c,D1) - S(c,D2)) : (D1 - D2).
double monotonicity_product(const StressModel& model, double c, const Mat3& d1, const Mat3& d2, int d);

/// Extremal ratios found by randomized search over (c, D1, D2, B).
struct PropertyReport {
  std::int64_t samples = 0;
  int dim = 3;
  double K1_measured = 0.0;  // min  J:(B x B) / (w |B|^2)
  double K2_measured = 0.0;  // max  |J|_op / w
  double K3_measured = 0.0;  // max  |dS/dc| / ((1+|D|^2)^((p-1)/2) log(2+|D|))
  double K4_measured = 0.0;  // min  (S1-S2):(D1-D2) / ((1+|D1|^2+|D2|^2)^((p-2)/2) |D1-D2|^2)
  std::int64_t violations = 0;
  std::string witness;  // first violating sample, empty when passing

  bool passed() const noexcept { return violations == 0; }
};

/// Samples |D| log-uniformly in [1e-3, 1e3] with uniformly random direction.
PropertyReport check_properties(const StressModel& model, std::int64_t n_samples, std::uint64_t seed, int d = 3);

}  // namespace crf
