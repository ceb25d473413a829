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

#include "crf/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "crf/error.hpp"

namespace crf {

RegimeFlags compute_regime(int d, double p_minus, double p_plus) {
  if (d != 2 && d != 3) throw InvalidArgument("regime requires d in {2,3}");
  if (!(p_minus > 1.0)) throw InvalidArgument("regime requires p- > 1");
  if (!(p_plus >= p_minus)) throw InvalidArgument("regime requires p+ >= p-");
  RegimeFlags flags;
  flags.strong_regime = 2.0 * p_minus >= static_cast<double>(d + 2);
  // p+ < 3/2 p- and p+ < 7/6 p-, cleared of denominators
  const bool gap = d == 2 ? 2.0 * p_plus < 3.0 * p_minus : 6.0 * p_plus < 7.0 * p_minus;
  flags.unique_regime = flags.strong_regime && gap;
  return flags;
}

void SolverConfig::validate() const {
  if (d != 2 && d != 3) throw InvalidArgument("d must be 2 or 3");
  if (n % 2 != 0 || n < 8 || n > 1024) throw InvalidArgument("n must be even and in [8, 1024]");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw InvalidArgument("t_end must be non-negative");
  if (!(model.nu0 > 0.0)) throw InvalidArgument("nu0 must be positive");
  if (!(picard_tol > 0.0)) throw InvalidArgument("picard_tol must be positive");
  if (picard_max < 1) throw InvalidArgument("picard_max must be at least 1");
  if (split == ViscousSplit::constant && nu_split != 0.0 && nu_split < model.nu0)
    throw InvalidArgument("nu_split must be >= nu0");
  if (!(q() > 2.0 * d)) throw InvalidArgument("q_monitor must exceed 2d");
  if (!(delta() > 1.0)) throw InvalidArgument("delta_monitor must exceed 1");
  if (cadence < 1) throw InvalidArgument("cadence must be at least 1");
  if (!(blowup_threshold > 0.0)) throw InvalidArgument("blowup_threshold must be positive");
}

double SolverConfig::q() const { return q_monitor > 0.0 ? q_monitor : 2.0 * d + 2.0; }

double SolverConfig::delta() const {
  if (delta_monitor > 0.0) return delta_monitor;
  return d == 2 ? 4.5 : 3.25;
}

long SolverConfig::steps() const { return std::lround(t_end / dt); }

std::optional<SpectralField> sample_forcing(const Forcing::Eval& fn, const GridPtr& grid, double t,
                                            DealiasRule rule) {
  if (!fn) return std::nullopt;
  PhysicalField phys = fn(grid, t);
  if (phys.grid() != grid || phys.rank() != Rank::vector)
    throw InvalidArgument("forcing must be a vector field on the solver grid");
  SpectralField out = to_spectral(phys);
  dealias_in_place(out, rule, false);
  return out;
}

namespace {

// Dealiased N(v) in the configured form, not projected.
SpectralField convection_term(const SpectralField& v, const SolverConfig& config) {
  const GridPtr& grid = v.grid();
  const int d = grid->dim();
  SpectralField out(grid, Rank::vector);
  if (config.convection == ConvectionForm::off) return out;

  const PhysicalField vp = to_physical(v);
  PhysicalField vv(grid, Rank::sym_tensor);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      auto o = vv.component(sym_index(i, j, d));
      auto a = vp.component(i);
      auto b = vp.component(j);
      for (std::size_t x = 0; x < o.size(); ++x) o[x] = a[x] * b[x];
    }
  SpectralField vv_hat = to_spectral(vv);
  dealias_in_place(vv_hat, config.dealias);
  out = divergence(vv_hat);

  if (config.convection == ConvectionForm::skew_symmetric) {
    // 1/2 [div(v x v) + (v . grad) v]
    const PhysicalField gv = to_physical(gradient(v));
    PhysicalField adv(grid, Rank::vector);
    for (int i = 0; i < d; ++i) {
      auto o = adv.component(i);
      for (int j = 0; j < d; ++j) {
        auto vj = vp.component(j);
        auto g = gv.component(tensor_index(i, j, d));
        for (std::size_t x = 0; x < o.size(); ++x) o[x] += vj[x] * g[x];
      }
    }
    SpectralField adv_hat = to_spectral(adv);
    dealias_in_place(adv_hat, config.dealias);
    out += adv_hat;
    out *= 0.5;
  }
  return out;
}

double max_strain(const PhysicalField& D) {
  const int d = D.grid()->dim();
  double m = 0.0;
  for (std::size_t x = 0; x < D.points(); ++x) {
    double dd = 0.0;
    for (int a = 0; a < D.components(); ++a) {
      const double v = D.component(a)[x];
      dd += (a < d ? 1.0 : 2.0) * v * v;
    }
    m = std::max(m, dd);
  }
  return std::sqrt(m);
}

double l2(const SpectralField& f) { return std::sqrt(l2_squared(f)); }

void require_finite(const SpectralField& f, const char* what) {
  if (!f.all_finite()) throw BlowUp(std::string("non-finite ") + what);
}

}  // namespace

State make_initial_state(const SolverConfig& config, const PhysicalField& v0, const PhysicalField& c0,
                         bool* was_projected) {
  config.validate();
  if (v0.rank() != Rank::vector || c0.rank() != Rank::scalar) throw InvalidArgument("initial data rank mismatch");
  if (v0.grid() != c0.grid()) throw InvalidArgument("initial data on different grids");
  const GridPtr& grid = v0.grid();
  if (grid->dim() != config.d || grid->modes() != config.n) throw InvalidArgument("initial data grid does not match config");

  State s;
  s.t = 0.0;
  SpectralField v = to_spectral(v0);
  dealias_in_place(v, config.dealias, true);
  const bool needs_projection = divergence_ratio(v) > 1e-12;
  s.v = leray_project(v);
  s.c = to_spectral(c0);
  dealias_in_place(s.c, config.dealias, false);
  if (was_projected) *was_projected = needs_projection;
  return s;
}

SpectralField step_concentration(const State& state, const SolverConfig& config,
                                 const std::optional<SpectralField>& g_hat) {
  const GridPtr& grid = state.c.grid();
  const int d = grid->dim();
  SpectralField rhs(grid, Rank::scalar);

  if (config.convection != ConvectionForm::off) {
    const PhysicalField cp = to_physical(state.c);
    const PhysicalField vp = to_physical(state.v);
    PhysicalField flux(grid, Rank::vector);
    auto cc = cp.component(0);
    for (int i = 0; i < d; ++i) {
      auto o = flux.component(i);
      auto vi = vp.component(i);
      for (std::size_t x = 0; x < o.size(); ++x) o[x] = cc[x] * vi[x];
    }
    SpectralField flux_hat = to_spectral(flux);
    dealias_in_place(flux_hat, config.dealias);
    rhs -= divergence(flux_hat);
  }
  if (g_hat) rhs -= divergence(*g_hat);
  dealias_in_place(rhs, config.dealias);

  SpectralField out(grid, Rank::scalar);
  auto c0 = state.c.component(0);
  auto r = rhs.component(0);
  auto o = out.component(0);
  const double dt = config.dt;
  for (std::size_t s = 0; s < grid->spectral_size(); ++s) o[s] = (c0[s] + dt * r[s]) / (1.0 + dt * grid->k2(s));
  require_finite(out, "concentration");
  return out;
}

double automatic_split(const StressModel& model, double max_strain) {
  const double pm = model.index.p_minus();
  const double pp = model.index.p_plus();
  const double base = 1.0 + max_strain * max_strain;
  const double lo = model.nu0 * std::min(1.0, pm - 1.0) * std::min(1.0, std::pow(base, 0.5 * (pm - 2.0)));
  const double hi = model.nu0 * std::max(1.0, pp - 1.0) * std::max(1.0, std::pow(base, 0.5 * (pp - 2.0)));
  return 0.5 * (lo + hi);
}

VelocityStep step_velocity(const State& state, const SpectralField& c_new, const SolverConfig& config,
                           const std::optional<SpectralField>& f_hat) {
  const GridPtr& grid = state.v.grid();
  const int d = grid->dim();
  const double dt = config.dt;
  const std::size_t ns = grid->spectral_size();

  SpectralField rhs(grid, Rank::vector);
  if (config.convection != ConvectionForm::off) rhs -= convection_term(state.v, config);
  if (f_hat) rhs += *f_hat;
  dealias_in_place(rhs, config.dealias, true);
  SpectralField base = state.v + dt * leray_project(rhs);

  const PhysicalField cp = to_physical(c_new);
  double nu_s = config.model.nu0;
  if (config.split == ViscousSplit::automatic) {
    nu_s = automatic_split(config.model, max_strain(to_physical(sym_gradient(state.v))));
  } else if (config.nu_split > 0.0) {
    nu_s = config.nu_split;
  }

  const int nsym = component_count(Rank::sym_tensor, d);
  auto remainder = [&](const SpectralField& w) {
    PhysicalField D = to_physical(sym_gradient(w));
    auto cc = cp.component(0);
    for (std::size_t x = 0; x < D.points(); ++x) {
      double dd = 0.0;
      for (int a = 0; a < nsym; ++a) {
        const double v = D.component(a)[x];
        dd += (a < d ? 1.0 : 2.0) * v * v;
      }
      const double p = config.model.index(cc[x]);
      const double scale = 2.0 * config.model.nu0 * std::pow(1.0 + dd, 0.5 * (p - 2.0)) - 2.0 * nu_s;
      for (int a = 0; a < nsym; ++a) D.component(a)[x] *= scale;
    }
    if (!D.all_finite()) throw BlowUp("non-finite stress");
    SpectralField T = to_spectral(D);
    SpectralField R = divergence(T);
    dealias_in_place(R, config.dealias, true);
    return leray_project(R);
  };

  auto solve = [&](const SpectralField& R) {
    SpectralField next(grid, Rank::vector);
    for (int i = 0; i < d; ++i) {
      auto b = base.component(i);
      auto r = R.component(i);
      auto o = next.component(i);
      for (std::size_t s = 0; s < ns; ++s) o[s] = (b[s] + dt * r[s]) / (1.0 + dt * nu_s * grid->k2(s));
      o[0] = 0.0;
    }
    next.set_zero_mean(true);
    next.set_divergence_free(true);
    return next;
  };

  PicardStats stats;
  stats.nu_split = nu_s;
  SpectralField w = state.v;
  double prev_update = std::numeric_limits<double>::infinity();
  int growth = 0;
  for (int solves = 1; solves <= config.picard_max; ++solves) {
    SpectralField next;
    try {
      next = solve(remainder(w));
      require_finite(next, "velocity");
    } catch (const BlowUp& e) {
      // the first solve only sees the current state
      if (solves == 1) throw;
      throw PicardFailure(std::string("Picard iterate became non-finite (") + e.what() + ")");
    }
    const double diff = l2(next - w);
    const double norm = l2(next);
    const double update = diff == 0.0 ? 0.0 : (norm > 0.0 ? diff / norm : std::numeric_limits<double>::infinity());
    if (solves > 1 && std::isfinite(prev_update) && prev_update > 0.0)
      stats.contraction = std::max(stats.contraction, update / prev_update);
    growth = (update > prev_update && update > 1e-13) ? growth + 1 : 0;
    w = std::move(next);
    stats.last_update = update;
    if (update <= config.picard_tol) {
      stats.converged = true;
      stats.iterations = std::max(1, solves - 1);
      break;
    }
    if (growth >= 3)
      throw PicardFailure("Picard update grew for 3 consecutive iterations at t=" + std::to_string(state.t));
    prev_update = update;
  }
  if (!stats.converged) stats.iterations = config.picard_max;
  return {std::move(w), stats};
}

SpectralField recover_pressure(const State& state, const SolverConfig& config,
                               const std::optional<SpectralField>& f_hat) {
  const GridPtr& grid = state.v.grid();
  const int d = grid->dim();
  SpectralField R = convection_term(state.v, config);
  const PhysicalField S = eval_stress(config.model, to_physical(state.c), to_physical(sym_gradient(state.v)));
  SpectralField divS = divergence(to_spectral(S));
  dealias_in_place(divS, config.dealias);
  R -= divS;
  if (f_hat) R -= *f_hat;

  SpectralField pi(grid, Rank::scalar);
  auto o = pi.component(0);
  constexpr Complex I{0.0, 1.0};
  for (std::size_t s = 0; s < grid->spectral_size(); ++s) {
    const double kk = grid->k2(s);
    if (kk == 0.0) continue;
    const auto& k = grid->wavevector(s);
    Complex kr{};
    for (int i = 0; i < d; ++i) kr += k[i] * R.component(i)[s];
    o[s] = I * kr / kk;
  }
  pi.set_zero_mean(true);
  return pi;
}

double pressure_consistency(const State& state, const SolverConfig& config,
                            const std::optional<SpectralField>& f_hat, const SpectralField& pressure) {
  SpectralField R = convection_term(state.v, config);
  const PhysicalField S = eval_stress(config.model, to_physical(state.c), to_physical(sym_gradient(state.v)));
  SpectralField divS = divergence(to_spectral(S));
  dealias_in_place(divS, config.dealias);
  R -= divS;
  if (f_hat) R -= *f_hat;
  const SpectralField grad_part = R - leray_project(R);
  const SpectralField resid = grad_part + gradient(pressure);
  const double ref = std::sqrt(l2_squared(grad_part));
  const double res = std::sqrt(l2_squared(resid));
  return ref > 0.0 ? res / ref : res;
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::completed:
      return "completed";
    case Termination::blowup:
      return "blowup";
    case Termination::picard_failure:
      return "picard_failure";
  }
  return "unknown";
}

RunResult run(const SolverConfig& config, const PhysicalField& v0, const PhysicalField& c0, const Forcing& forcing,
              const SampleObserver& observer) {
  bool projected = false;
  State initial = make_initial_state(config, v0, c0, &projected);
  RunResult result = run(config, std::move(initial), forcing, observer);
  if (projected) result.warnings.insert(result.warnings.begin(), "initial velocity was not divergence-free; projected");
  return result;
}

RunResult run(const SolverConfig& config, State state, const Forcing& forcing, const SampleObserver& observer) {
  config.validate();
  const GridPtr grid = state.v.grid();
  RunResult result;
  if (!config.regime().strong_regime) result.warnings.push_back("exponent bounds outside the strong-solution regime");

  DiagnosticsMonitor monitor(config, state);
  const double mean0 = mean(state.c);
  auto record = [&](const State& s, int picard, double v_res, double c_res) {
    auto g_hat = sample_forcing(forcing.g, grid, s.t, config.dealias);
    auto smp = monitor.sample(s, g_hat, picard, v_res, c_res);
    for (double x : smp.record.values())
      if (!std::isfinite(x) || std::abs(x) > config.blowup_threshold)
        throw BlowUp("diagnostics exceeded the blow-up threshold at t=" + std::to_string(s.t));
    if (observer) observer(s, smp);
    result.records.push_back(smp.record);
    result.monitors.push_back(smp.monitors);
  };

  result.final_state = state;
  try {
    result.max_divergence = divergence_ratio(state.v);
    record(state, 0, 0.0, 0.0);
    const long nsteps = config.steps();
    for (long step = 1; step <= nsteps; ++step) {
      const double t1 = static_cast<double>(step) * config.dt;
      auto f_hat = sample_forcing(forcing.f, grid, t1, config.dealias);
      auto g_hat = sample_forcing(forcing.g, grid, t1, config.dealias);

      State next;
      next.t = t1;
      next.c = step_concentration(state, config, g_hat);
      VelocityStep vs = step_velocity(state, next.c, config, f_hat);
      next.v = std::move(vs.v);

      result.max_picard_iterations = std::max(result.max_picard_iterations, vs.stats.iterations);
      result.max_contraction = std::max(result.max_contraction, vs.stats.contraction);
      if (!vs.stats.converged) ++result.picard_nonconverged;
      result.max_divergence = std::max(result.max_divergence, divergence_ratio(next.v));
      result.max_mean_drift = std::max(result.max_mean_drift, std::abs(mean(next.c) - mean0));
      if (0.5 * l2_squared(next.v) > config.blowup_threshold || l2_squared(next.c) > config.blowup_threshold)
        throw BlowUp("norm exceeded the blow-up threshold at t=" + std::to_string(t1));

      const bool sample_now = step % config.cadence == 0 || step == nsteps;
      if (sample_now) {
        const double v_res = energy_budget_velocity(state, next, config.model, f_hat, config.dt);
        const double c_res = energy_budget_concentration(state, next, g_hat, config.dt);
        record(next, vs.stats.iterations, v_res, c_res);
      }
      state = std::move(next);
      result.final_state = state;
      result.steps_taken = step;
    }
  } catch (const BlowUp& e) {
    result.termination = Termination::blowup;
    result.message = e.what();
  } catch (const PicardFailure& e) {
    result.termination = Termination::picard_failure;
    result.message = e.what();
  }
  return result;
}

}  // namespace crf
