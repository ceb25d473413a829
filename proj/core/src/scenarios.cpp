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

#include "crf/scenarios.hpp"

#include <cmath>
#include <future>
#include <limits>
#include <numbers>

#include "crf/error.hpp"

namespace crf {

ScenarioKind parse_scenario_kind(std::string_view name) {
  if (name == "zero") return ScenarioKind::zero;
  if (name == "taylor_green") return ScenarioKind::taylor_green;
  if (name == "stokes_mode") return ScenarioKind::stokes_mode;
  if (name == "heat_mode") return ScenarioKind::heat_mode;
  if (name == "synovial") return ScenarioKind::synovial;
  if (name == "manufactured") return ScenarioKind::manufactured;
  throw InvalidArgument("unknown scenario '" + std::string(name) + "'");
}

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::zero: return "zero";
    case ScenarioKind::taylor_green: return "taylor_green";
    case ScenarioKind::stokes_mode: return "stokes_mode";
    case ScenarioKind::heat_mode: return "heat_mode";
    case ScenarioKind::synovial: return "synovial";
    case ScenarioKind::manufactured: return "manufactured";
  }
  return "unknown";
}

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

template <class Fn>
PhysicalField sample(const GridPtr& grid, Rank rank, Fn&& fn) {
  PhysicalField out(grid, rank);
  for (std::size_t x = 0; x < grid->points(); ++x) {
    const auto values = fn(grid->point(x));
    for (int c = 0; c < out.components(); ++c) out.component(c)[x] = values[c];
  }
  return out;
}

double phase(const std::array<int, 3>& k, const std::array<double, 3>& x, int d) {
  double s = 0.0;
  for (int j = 0; j < d; ++j) s += k[j] * x[j];
  return two_pi * s;
}

// Unit vector orthogonal to k.
std::array<double, 3> transverse(const std::array<int, 3>& k, int d) {
  std::array<double, 3> e{};
  if (d == 2) {
    e = {-double(k[1]), double(k[0]), 0.0};
  } else {
    // k x z, or k x x when k is parallel to z
    e = {double(k[1]), -double(k[0]), 0.0};
    if (k[0] == 0 && k[1] == 0) e = {0.0, double(k[2]), -double(k[1])};
  }
  const double norm = std::sqrt(e[0] * e[0] + e[1] * e[1] + e[2] * e[2]);
  if (norm == 0.0) throw InvalidArgument("mode must be nonzero");
  for (double& v : e) v /= norm;
  return e;
}

// Smooth periodic bump centred at 1/2 with width w.
double bump(const std::array<double, 3>& x, int d, double w) {
  const double kappa = 1.0 / (two_pi * w * two_pi * w);
  double s = 0.0;
  for (int j = 0; j < d; ++j) s += std::cos(two_pi * (x[j] - 0.5)) - 1.0;
  return std::exp(kappa * s);
}

Forcing shear_forcing(double f_amp, double g_amp) {
  Forcing out;
  if (f_amp != 0.0)
    out.f = [f_amp](const GridPtr& grid, double) {
      return sample(grid, Rank::vector,
                    [&](const std::array<double, 3>& x) { return std::array<double, 3>{f_amp * std::sin(two_pi * x[1]), 0.0, 0.0}; });
    };
  if (g_amp != 0.0)
    out.g = [g_amp](const GridPtr& grid, double) {
      return sample(grid, Rank::vector,
                    [&](const std::array<double, 3>& x) { return std::array<double, 3>{g_amp * std::sin(two_pi * x[0]), 0.0, 0.0}; });
    };
  return out;
}

double l2_error(const PhysicalField& a, const PhysicalField& b) {
  double acc = 0.0;
  for (int c = 0; c < a.components(); ++c) {
    auto x = a.component(c);
    auto y = b.component(c);
    for (std::size_t i = 0; i < x.size(); ++i) acc += (x[i] - y[i]) * (x[i] - y[i]);
  }
  return std::sqrt(acc / static_cast<double>(a.points()));
}

ConvergenceRow run_case(const ManufacturedCase& exact, SolverConfig cfg, int n, double dt) {
  cfg.n = n;
  cfg.dt = dt;
  cfg.d = exact.dim();
  cfg.model = exact.model();
  const GridPtr grid = make_grid(cfg.d, n);
  const RunResult res = run(cfg, exact.velocity_field(grid, 0.0), exact.concentration_field(grid, 0.0), exact.forcing());
  ConvergenceRow row;
  row.n = n;
  row.dt = dt;
  row.termination = res.termination;
  if (res.termination == Termination::completed) {
    row.error = solution_error(exact, res.final_state);
  } else {
    row.error = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  }
  return row;
}

}  // namespace

PhysicalField perturbation_velocity(const GridPtr& grid) {
  const int d = grid->dim();
  return sample(grid, Rank::vector, [d](const std::array<double, 3>& x) {
    if (d == 2) return std::array<double, 3>{std::sin(two_pi * x[1]), std::sin(two_pi * x[0]), 0.0};
    return std::array<double, 3>{std::sin(two_pi * x[2]), std::sin(two_pi * x[0]), std::sin(two_pi * x[1])};
  });
}

PhysicalField perturbation_concentration(const GridPtr& grid) {
  const int d = grid->dim();
  return sample(grid, Rank::scalar, [d](const std::array<double, 3>& x) {
    return std::array<double, 1>{std::cos(phase({1, 1, 1}, x, d))};
  });
}

Scenario build_scenario(const SolverConfig& config, const ScenarioSpec& spec) {
  config.validate();
  Scenario sc;
  sc.config = config;
  const int d = config.d;
  const GridPtr grid = make_grid(d, config.n);
  const double A = spec.velocity_amplitude;
  const double cbar = spec.conc_mean;
  const double B = spec.conc_amplitude;

  auto constant_c = [&] {
    return sample(grid, Rank::scalar, [&](const std::array<double, 3>&) { return std::array<double, 1>{cbar}; });
  };
  auto zero_v = [&] { return PhysicalField(grid, Rank::vector); };
  auto taylor_green = [&](double amp) {
    return sample(grid, Rank::vector, [&](const std::array<double, 3>& x) {
      const double X = two_pi * x[0], Y = two_pi * x[1], Z = d == 3 ? two_pi * x[2] : 0.0;
      return std::array<double, 3>{amp * std::sin(X) * std::cos(Y) * std::cos(Z),
                                   -amp * std::cos(X) * std::sin(Y) * std::cos(Z), 0.0};
    });
  };

  switch (spec.kind) {
    case ScenarioKind::zero:
      sc.v0 = zero_v();
      sc.c0 = constant_c();
      break;
    case ScenarioKind::taylor_green:
      sc.v0 = taylor_green(A);
      sc.c0 = sample(grid, Rank::scalar, [&](const std::array<double, 3>& x) {
        return std::array<double, 1>{cbar + B * std::cos(two_pi * x[0]) * std::cos(two_pi * x[1])};
      });
      break;
    case ScenarioKind::stokes_mode: {
      const auto e = transverse(spec.mode, d);
      sc.v0 = sample(grid, Rank::vector, [&](const std::array<double, 3>& x) {
        const double s = A * std::cos(phase(spec.mode, x, d));
        return std::array<double, 3>{s * e[0], s * e[1], s * e[2]};
      });
      sc.c0 = constant_c();
      break;
    }
    case ScenarioKind::heat_mode:
      sc.v0 = zero_v();
      sc.c0 = sample(grid, Rank::scalar, [&](const std::array<double, 3>& x) {
        return std::array<double, 1>{cbar + B * std::cos(phase(spec.mode, x, d))};
      });
      break;
    case ScenarioKind::synovial:
      sc.v0 = taylor_green(A);
      sc.c0 = sample(grid, Rank::scalar, [&](const std::array<double, 3>& x) {
        return std::array<double, 1>{cbar + B * bump(x, d, spec.blob_width)};
      });
      sc.forcing = shear_forcing(spec.shear_forcing, spec.source_flux);
      break;
    case ScenarioKind::manufactured: {
      ManufacturedCase mc = make_manufactured(spec.manufactured, spec.manufactured_params, config.model);
      if (mc.dim() != d) throw InvalidArgument("manufactured case dimension does not match solver d");
      sc.v0 = mc.velocity_field(grid, 0.0);
      sc.c0 = mc.concentration_field(grid, 0.0);
      sc.forcing = mc.forcing();
      sc.exact = std::move(mc);
      break;
    }
  }
  return sc;
}

ErrorPair solution_error(const ManufacturedCase& exact, const State& state) {
  const GridPtr& grid = state.v.grid();
  return {l2_error(to_physical(state.v), exact.velocity_field(grid, state.t)),
          l2_error(to_physical(state.c), exact.concentration_field(grid, state.t))};
}

ConvergenceTable convergence_study(const ManufacturedCase& exact, const SolverConfig& base, const ScenarioSpec& spec) {
  if (spec.n_ladder.size() < 3 || spec.dt_ladder.size() < 3)
    throw InvalidArgument("convergence ladders need at least 3 points");
  ConvergenceTable table;
  for (int n : spec.n_ladder) table.spatial.push_back(run_case(exact, base, n, spec.ladder_dt));
  for (double dt : spec.dt_ladder) table.temporal.push_back(run_case(exact, base, spec.ladder_n, dt));

  table.spatial_passed = true;
  for (std::size_t i = 0; i + 1 < table.spatial.size(); ++i) {
    const ErrorPair& a = table.spatial[i].error;
    const ErrorPair& b = table.spatial[i + 1].error;
    const ErrorPair r{a.v / b.v, a.c / b.c};
    table.spatial_ratios.push_back(r);
    if (!(r.v >= 4.0) || !(r.c >= 4.0)) table.spatial_passed = false;
  }
  table.temporal_passed = true;
  for (std::size_t i = 0; i + 1 < table.temporal.size(); ++i) {
    const ConvergenceRow& a = table.temporal[i];
    const ConvergenceRow& b = table.temporal[i + 1];
    const double h = std::log(a.dt / b.dt);
    const ErrorPair s{std::log(a.error.v / b.error.v) / h, std::log(a.error.c / b.error.c) / h};
    table.temporal_slopes.push_back(s);
    if (!(std::abs(s.v - 1.0) <= 0.1) || !(std::abs(s.c - 1.0) <= 0.1)) table.temporal_passed = false;
  }
  return table;
}

TwinRunReport uniqueness_experiment(const Scenario& scenario, double epsilon) {
  const SolverConfig& cfg = scenario.config;
  const GridPtr grid = scenario.v0.grid();

  PhysicalField v2 = scenario.v0;
  PhysicalField c2 = scenario.c0;
  {
    const PhysicalField dv = perturbation_velocity(grid);
    const PhysicalField dc = perturbation_concentration(grid);
    for (int c = 0; c < v2.components(); ++c)
      for (std::size_t x = 0; x < v2.points(); ++x) v2.component(c)[x] += epsilon * dv.component(c)[x];
    for (std::size_t x = 0; x < c2.points(); ++x) c2.component(0)[x] += epsilon * dc.component(0)[x];
  }

  struct Trace {
    std::vector<State> states;
    std::vector<MonitorSample> monitors;
    RunResult result;
  };
  auto integrate_run = [&cfg, &scenario](PhysicalField v0, PhysicalField c0) {
    Trace tr;
    tr.result = run(cfg, v0, c0, scenario.forcing, [&tr](const State& s, const DiagnosticsMonitor::Sample& smp) {
      tr.states.push_back(s);
      tr.monitors.push_back(smp.monitors);
    });
    return tr;
  };
  auto first = std::async(std::launch::async, integrate_run, scenario.v0, scenario.c0);
  auto second = std::async(std::launch::async, integrate_run, v2, c2);
  const Trace t1 = first.get();
  const Trace t2 = second.get();

  for (const Trace* tr : {&t1, &t2}) {
    if (tr->result.termination == Termination::blowup) throw BlowUp("twin run: " + tr->result.message);
    if (tr->result.termination == Termination::picard_failure) throw PicardFailure("twin run: " + tr->result.message);
  }

  TwinRunReport rep;
  rep.regime = cfg.regime();
  rep.termination = Termination::completed;
  if (!rep.regime.unique_regime)
    rep.warnings.push_back("configuration is outside the uniqueness regime; the envelope is not a verified bound");

  const std::size_t m = std::min(t1.states.size(), t2.states.size());
  std::vector<double> phi_raw(m), psi(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const SpectralField dv = t1.states[i].v - t2.states[i].v;
    const SpectralField dc = t1.states[i].c - t2.states[i].c;
    rep.t.push_back(t1.states[i].t);
    rep.v_diff_sq.push_back(l2_squared(dv));
    rep.gradc_diff_sq.push_back(l2_squared(gradient(dc)));
    rep.y.push_back(rep.v_diff_sq.back() + rep.gradc_diff_sq.back());
    rep.dv_diss.push_back(l2_squared(sym_gradient(dv)));
    rep.lapc_diss.push_back(l2_squared(laplacian(dc)));
    const double a = t2.monitors[i].v_inf;
    const double b = t1.monitors[i].gradc_inf;
    const double c = t1.monitors[i].gradv_l3;
    phi_raw[i] = a * a + b * b + c * c + 1.0;
  }
  rep.constant = calibrate_gronwall_constant(rep.t, rep.y, phi_raw, psi);
  rep.phi.resize(m);
  for (std::size_t i = 0; i < m; ++i) rep.phi[i] = rep.constant * phi_raw[i];
  const Certificate cert = gronwall_certificate(rep.t, rep.y, rep.phi, psi);
  rep.envelope = cert.envelope;
  rep.envelope_holds = cert.passed;
  rep.margin = cert.margin;
  return rep;
}

RunResult synovial_demo(const SolverConfig& config, const ScenarioSpec& spec, const SampleObserver& observer) {
  ScenarioSpec s = spec;
  s.kind = ScenarioKind::synovial;
  const Scenario sc = build_scenario(config, s);
  return run(sc.config, sc.v0, sc.c0, sc.forcing, observer);
}

}  // namespace crf
