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

#include "crf/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "crf/error.hpp"

namespace crf {

const std::array<std::string_view, DiagnosticsRecord::column_count>& DiagnosticsRecord::columns() {
  static const std::array<std::string_view, column_count> names{
      "t",           "kinetic",      "visc_diss",     "modular_gradv", "stress_dual",
      "conc_l2",     "conc_diss",    "gradc_q",       "gradc_q_diss",  "eta_l2",
      "eta_high",    "grad_eta_l2",  "w22_weighted",  "laplacian_v_l2", "dt_v_l2",
      "dt_c_l2",     "dt_c_ldelta",  "potential",     "picard_iters",  "energy_residual"};
  return names;
}

std::array<double, DiagnosticsRecord::column_count> DiagnosticsRecord::values() const {
  return {t,           kinetic,     visc_diss,    modular_gradv,  stress_dual, conc_l2,     conc_diss,
          gradc_q,     gradc_q_diss, eta_l2,      eta_high,       grad_eta_l2, w22_weighted, laplacian_v_l2,
          dt_v_l2,     dt_c_l2,     dt_c_ldelta,  potential,      picard_iters, energy_residual};
}

DiagnosticsRecord DiagnosticsRecord::from_values(const std::array<double, column_count>& v) {
  DiagnosticsRecord r;
  r.t = v[0];
  r.kinetic = v[1];
  r.visc_diss = v[2];
  r.modular_gradv = v[3];
  r.stress_dual = v[4];
  r.conc_l2 = v[5];
  r.conc_diss = v[6];
  r.gradc_q = v[7];
  r.gradc_q_diss = v[8];
  r.eta_l2 = v[9];
  r.eta_high = v[10];
  r.grad_eta_l2 = v[11];
  r.w22_weighted = v[12];
  r.laplacian_v_l2 = v[13];
  r.dt_v_l2 = v[14];
  r.dt_c_l2 = v[15];
  r.dt_c_ldelta = v[16];
  r.potential = v[17];
  r.picard_iters = v[18];
  r.energy_residual = v[19];
  return r;
}

namespace {

// Squared Euclidean/Frobenius magnitude at point x.
double magnitude2(const PhysicalField& f, std::size_t x) {
  const int d = f.grid()->dim();
  double m = 0.0;
  for (int a = 0; a < f.components(); ++a) {
    const double v = f.component(a)[x];
    m += (f.rank() == Rank::sym_tensor && a >= d ? 2.0 : 1.0) * v * v;
  }
  return m;
}

// Frobenius product of two fields of equal rank at point x.
double product(const PhysicalField& a, const PhysicalField& b, std::size_t x) {
  const int d = a.grid()->dim();
  double m = 0.0;
  for (int c = 0; c < a.components(); ++c)
    m += (a.rank() == Rank::sym_tensor && c >= d ? 2.0 : 1.0) * a.component(c)[x] * b.component(c)[x];
  return m;
}

SpectralField extract(const SpectralField& f, int c) {
  SpectralField out(f.grid(), Rank::scalar);
  std::copy(f.component(c).begin(), f.component(c).end(), out.component(0).begin());
  return out;
}

PhysicalField scalar_from(const GridPtr& grid, const std::vector<double>& values) {
  PhysicalField out(grid, Rank::scalar);
  std::copy(values.begin(), values.end(), out.component(0).begin());
  return out;
}

double power_mean_norm(const std::vector<double>& magnitude, double r) {
  if (std::isinf(r)) return magnitude.empty() ? 0.0 : *std::max_element(magnitude.begin(), magnitude.end());
  double acc = 0.0;
  for (double m : magnitude) acc += std::pow(m, r);
  return std::pow(acc / static_cast<double>(magnitude.size()), 1.0 / r);
}

std::vector<double> magnitudes(const PhysicalField& f) {
  std::vector<double> m(f.points());
  for (std::size_t x = 0; x < m.size(); ++x) m[x] = std::sqrt(magnitude2(f, x));
  return m;
}

// grad of every component of a symmetric tensor, squared Frobenius per point.
std::vector<double> grad_sym_tensor_sq(const SpectralField& D) {
  const int d = D.grid()->dim();
  std::vector<double> out(D.grid()->points(), 0.0);
  for (int a = 0; a < D.components(); ++a) {
    const double mult = a < d ? 1.0 : 2.0;
    const PhysicalField g = to_physical(gradient(extract(D, a)));
    for (std::size_t x = 0; x < out.size(); ++x) out[x] += mult * magnitude2(g, x);
  }
  return out;
}

}  // namespace

double lebesgue_norm(const PhysicalField& field, double r) {
  if (!(r >= 1.0)) throw InvalidArgument("Lebesgue exponent must be >= 1");
  return power_mean_norm(magnitudes(field), r);
}

double modular_norm(const PhysicalField& field, const PhysicalField& exponent) {
  if (exponent.rank() != Rank::scalar || exponent.grid() != field.grid())
    throw InvalidArgument("exponent must be a scalar field on the same grid");
  auto p = exponent.component(0);
  double acc = 0.0;
  for (std::size_t x = 0; x < field.points(); ++x) {
    if (!(p[x] > 1.0) || !std::isfinite(p[x])) throw InvalidArgument("variable exponent out of range (1, inf)");
    acc += std::pow(std::sqrt(magnitude2(field, x)), p[x]);
  }
  return acc / static_cast<double>(field.points());
}

double luxemburg_norm(const PhysicalField& field, const PhysicalField& exponent, double tol) {
  if (modular_norm(field, exponent) == 0.0) return 0.0;
  const auto m = magnitudes(field);
  auto p = exponent.component(0);
  auto modular_at = [&](double lambda) {
    double acc = 0.0;
    for (std::size_t x = 0; x < m.size(); ++x) acc += std::pow(m[x] / lambda, p[x]);
    return acc / static_cast<double>(m.size());
  };
  double lo = 1.0;
  double hi = 1.0;
  while (modular_at(hi) > 1.0) hi *= 2.0;
  while (modular_at(lo) <= 1.0) lo *= 0.5;
  while ((hi - lo) > tol * hi) {
    const double mid = 0.5 * (lo + hi);
    (modular_at(mid) > 1.0 ? lo : hi) = mid;
  }
  return hi;
}

double energy_budget_velocity(const State& before, const State& after, const StressModel& model,
                              const std::optional<SpectralField>& f_hat, double dt) {
  const double kinetic = 0.5 * (l2_squared(after.v) - l2_squared(before.v)) / dt;
  const PhysicalField D = to_physical(sym_gradient(after.v));
  const PhysicalField S = eval_stress(model, to_physical(after.c), D);
  double diss = 0.0;
  for (std::size_t x = 0; x < D.points(); ++x) diss += product(S, D, x);
  diss /= static_cast<double>(D.points());
  const double work = f_hat ? inner(*f_hat, after.v) : 0.0;
  return kinetic + diss - work;
}

double energy_budget_concentration(const State& before, const State& after,
                                   const std::optional<SpectralField>& g_hat, double dt) {
  const double change = 0.5 * (l2_squared(after.c) - l2_squared(before.c)) / dt;
  const SpectralField gc = gradient(after.c);
  const double diss = l2_squared(gc);
  const double work = g_hat ? inner(*g_hat, gc) : 0.0;
  return change + diss - work;
}

GradCQ gradc_q_monitor(const SpectralField& c, double q) {
  if (c.rank() != Rank::scalar) throw InvalidArgument("gradc_q_monitor expects a scalar field");
  if (!(q >= 1.0)) throw InvalidArgument("q must be >= 1");
  const auto m = magnitudes(to_physical(gradient(c)));
  GradCQ out;
  out.norm = power_mean_norm(m, q);
  std::vector<double> powered(m.size());
  for (std::size_t x = 0; x < m.size(); ++x) powered[x] = std::pow(m[x], 0.5 * q);
  out.dissipation = l2_squared(gradient(to_spectral(scalar_from(c.grid(), powered))));
  return out;
}

double EtaNorms::gn_ratio() const {
  const double den = std::sqrt(l2 * grad_l2) + l1;
  return den > 0.0 ? high / den : 0.0;
}

EtaNorms eta_norms(const SpectralField& v, const SpectralField& c, const StressModel& model) {
  const GridPtr& grid = v.grid();
  const PhysicalField D = to_physical(sym_gradient(v));
  const PhysicalField cp = to_physical(c);
  std::vector<double> eta(D.points());
  for (std::size_t x = 0; x < eta.size(); ++x)
    eta[x] = std::pow(1.0 + magnitude2(D, x), 0.25 * model.index(cp.component(0)[x]));
  EtaNorms out;
  out.l2 = power_mean_norm(eta, 2.0);
  out.high = power_mean_norm(eta, grid->dim() == 2 ? 4.0 : 3.0);
  out.l1 = power_mean_norm(eta, 1.0);
  out.grad_l2 = std::sqrt(l2_squared(gradient(to_spectral(scalar_from(grid, eta)))));
  return out;
}

W22 w22_monitor(const SpectralField& v, const SpectralField& c, const StressModel& model) {
  const SpectralField Dhat = sym_gradient(v);
  const PhysicalField D = to_physical(Dhat);
  const PhysicalField cp = to_physical(c);
  const auto gd = grad_sym_tensor_sq(Dhat);
  W22 out;
  double weighted = 0.0;
  double plain = 0.0;
  for (std::size_t x = 0; x < gd.size(); ++x) {
    const double p = model.index(cp.component(0)[x]);
    weighted += std::pow(1.0 + magnitude2(D, x), 0.5 * (p - 2.0)) * gd[x];
    plain += gd[x];
  }
  const double np = static_cast<double>(gd.size());
  out.weighted = weighted / np;
  out.grad_dv_sq = plain / np;
  out.laplacian_sq = l2_squared(laplacian(v));
  out.grad_sq = l2_squared(gradient(v));
  const double slack = 1e-12 * std::max(1.0, out.laplacian_sq);
  out.laplacian_dominated = out.laplacian_sq <= 9.0 * out.grad_dv_sq + slack;
  out.weight_checked = model.index.p_minus() >= 2.0;
  if (out.weight_checked) out.weight_dominates = out.grad_dv_sq <= out.weighted * (1.0 + 1e-12) + 1e-300;
  return out;
}

TimeDerivatives time_derivative_monitor(const State& prev, const State& cur, const StressModel& model,
                                        const std::optional<SpectralField>& g_hat, double delta,
                                        double lap_c0_delta) {
  const GridPtr& grid = cur.c.grid();
  const int d = grid->dim();
  TimeDerivatives out;

  const PhysicalField D = to_physical(sym_gradient(cur.v));
  const PhysicalField cp = to_physical(cur.c);
  double pot = 0.0;
  for (std::size_t x = 0; x < D.points(); ++x) {
    const double p = model.index(cp.component(0)[x]);
    pot += std::pow(1.0 + magnitude2(D, x), 0.5 * p) / p;
  }
  out.potential = pot / static_cast<double>(D.points());

  const double step = cur.t - prev.t;
  if (step > 0.0) {
    const SpectralField dv = (1.0 / step) * (cur.v - prev.v);
    out.dt_v_l2 = std::sqrt(l2_squared(dv));
    const PhysicalField dc = to_physical((1.0 / step) * (cur.c - prev.c));
    out.dt_c_l2 = lebesgue_norm(dc, 2.0);
    out.dt_c_ldelta = lebesgue_norm(dc, delta);

    // heat-equation source h = -(v.grad c + div g)
    const PhysicalField vp = to_physical(cur.v);
    const PhysicalField gc = to_physical(gradient(cur.c));
    PhysicalField src(grid, Rank::scalar);
    if (g_hat) src = to_physical(divergence(*g_hat));
    auto s = src.component(0);
    for (int i = 0; i < d; ++i)
      for (std::size_t x = 0; x < s.size(); ++x) s[x] += vp.component(i)[x] * gc.component(i)[x];
    const double num = out.dt_c_ldelta + lebesgue_norm(to_physical(laplacian(cur.c)), delta);
    const double den = lebesgue_norm(src, delta) + lap_c0_delta;
    out.mr_ratio = den > 0.0 ? num / den : 0.0;
  }
  return out;
}

Certificate gronwall_certificate(std::span<const double> t, std::span<const double> y, std::span<const double> phi,
                                 std::span<const double> psi) {
  if (t.empty() || y.size() != t.size() || phi.size() != t.size() || psi.size() != t.size())
    throw InvalidArgument("Gronwall certificate needs aligned, non-empty series");
  for (std::size_t m = 0; m < t.size(); ++m) {
    if (phi[m] < 0.0 || psi[m] < 0.0) throw InvalidArgument("Gronwall certificate needs phi, psi >= 0");
    if (m > 0 && !(t[m] > t[m - 1])) throw InvalidArgument("Gronwall certificate needs increasing times");
  }
  Certificate cert;
  cert.envelope.resize(t.size());
  double Phi = 0.0;
  double Psi = 0.0;
  cert.margin = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < t.size(); ++m) {
    if (m > 0) {
      const double h = t[m] - t[m - 1];
      Phi += 0.5 * h * (phi[m] + phi[m - 1]);
      Psi += 0.5 * h * (psi[m] + psi[m - 1]);
    }
    const double env = std::exp(Phi) * (y[0] + Psi);
    cert.envelope[m] = env;
    cert.margin = std::min(cert.margin, env - y[m]);
    if (y[m] > env + 1e-12 * std::abs(env)) cert.passed = false;
  }
  return cert;
}

double calibrate_gronwall_constant(std::span<const double> t, std::span<const double> y, std::span<const double> phi,
                                   std::span<const double> psi) {
  if (t.size() < 2) return 0.0;
  const std::array<double, 2> tt{t[0], t[1]};
  const std::array<double, 2> yy{y[0], y[1]};
  auto passes = [&](double C) {
    const std::array<double, 2> a{C * phi[0], C * phi[1]};
    const std::array<double, 2> b{C * psi[0], C * psi[1]};
    return gronwall_certificate(tt, yy, a, b).passed;
  };
  if (passes(0.0)) return 0.0;
  double hi = 1.0;
  int guard = 0;
  while (!passes(hi)) {
    hi *= 2.0;
    if (++guard > 2000) return std::numeric_limits<double>::infinity();
  }
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (passes(mid) ? hi : lo) = mid;
  }
  return hi;
}

double calderon_zygmund_multiplier_max(const Grid& grid) {
  const int d = grid.dim();
  double worst = 0.0;
  for (std::size_t s = 0; s < grid.spectral_size(); ++s) {
    const double kk = grid.k2(s);
    if (kk == 0.0) continue;
    const auto& k = grid.wavevector(s);
    for (int j = 0; j < d; ++j)
      for (int l = 0; l < d; ++l) worst = std::max(worst, std::abs(k[j] * k[l]) / kk);
  }
  return worst;
}

double korn_ratio(const SpectralField& v) {
  const double dv = l2_squared(sym_gradient(v));
  if (dv == 0.0) return 0.0;
  return std::sqrt(l2_squared(gradient(v)) / dv);
}

DiagnosticsMonitor::DiagnosticsMonitor(const SolverConfig& config, const State& initial) : config_(config) {
  lap_c0_delta_ = lebesgue_norm(to_physical(laplacian(initial.c)), config.delta());
}

DiagnosticsMonitor::Sample DiagnosticsMonitor::sample(const State& state, const std::optional<SpectralField>& g_hat,
                                                      int picard_iters, double velocity_residual,
                                                      double concentration_residual) {
  const StressModel& model = config_.model;
  const GridPtr& grid = state.v.grid();
  const double np = static_cast<double>(grid->points());

  const SpectralField gv_hat = gradient(state.v);
  const PhysicalField gv = to_physical(gv_hat);
  const PhysicalField D = to_physical(sym_gradient(state.v));
  const PhysicalField cp = to_physical(state.c);
  const PhysicalField S = eval_stress(model, cp, D);

  Sample out;
  DiagnosticsRecord& r = out.record;
  r.t = state.t;
  r.kinetic = 0.5 * l2_squared(state.v);
  double diss = 0.0;
  double mod = 0.0;
  double dual = 0.0;
  for (std::size_t x = 0; x < D.points(); ++x) {
    const double p = model.index(cp.component(0)[x]);
    diss += product(S, D, x);
    mod += std::pow(std::sqrt(magnitude2(gv, x)), p);
    dual += std::pow(std::sqrt(magnitude2(S, x)), p / (p - 1.0));
  }
  r.visc_diss = diss / np;
  r.modular_gradv = mod / np;
  r.stress_dual = dual / np;
  r.conc_l2 = l2_squared(state.c);
  const SpectralField gc_hat = gradient(state.c);
  r.conc_diss = l2_squared(gc_hat);
  const GradCQ gq = gradc_q_monitor(state.c, config_.q());
  r.gradc_q = gq.norm;
  r.gradc_q_diss = gq.dissipation;
  const EtaNorms eta = eta_norms(state.v, state.c, model);
  r.eta_l2 = eta.l2;
  r.eta_high = eta.high;
  r.grad_eta_l2 = eta.grad_l2;
  const W22 w = w22_monitor(state.v, state.c, model);
  r.w22_weighted = w.weighted;
  r.laplacian_v_l2 = std::sqrt(w.laplacian_sq);
  const TimeDerivatives td = prev_ ? time_derivative_monitor(*prev_, state, model, g_hat, config_.delta(), lap_c0_delta_)
                                   : time_derivative_monitor(state, state, model, g_hat, config_.delta(), lap_c0_delta_);
  r.dt_v_l2 = td.dt_v_l2;
  r.dt_c_l2 = td.dt_c_l2;
  r.dt_c_ldelta = td.dt_c_ldelta;
  r.potential = td.potential;
  r.picard_iters = picard_iters;
  r.energy_residual = velocity_residual;

  MonitorSample& m = out.monitors;
  m.t = state.t;
  m.gradv_pminus = lebesgue_norm(gv, model.index.p_minus());
  m.gradv_l3 = lebesgue_norm(gv, 3.0);
  m.v_inf = lebesgue_norm(to_physical(state.v), std::numeric_limits<double>::infinity());
  m.gradc_inf = lebesgue_norm(to_physical(gc_hat), std::numeric_limits<double>::infinity());
  if (g_hat) {
    const double q = config_.q();
    const double gq_norm = lebesgue_norm(to_physical(*g_hat), q);
    const double dg_norm = lebesgue_norm(to_physical(gradient(*g_hat)), q);
    m.g_w1q = std::pow(std::pow(gq_norm, q) + std::pow(dg_norm, q), 1.0 / q);
  }
  m.mean_c = mean(state.c);
  m.divergence = divergence_ratio(state.v);
  m.conc_residual = concentration_residual;
  m.mr_ratio = td.mr_ratio;
  m.gn_ratio = eta.gn_ratio();
  m.korn_ratio = korn_ratio(state.v);

  prev_ = state;
  return out;
}

}  // namespace crf
