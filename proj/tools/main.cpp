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

// crf: command-line driver for the coupled flow / concentration solver.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "crf/config.hpp"
#include "crf/error.hpp"
#include "crf/io.hpp"
#include "crf/scenarios.hpp"

namespace fs = std::filesystem;

namespace {

enum Exit { ok = 0, check_failed = 1, config_error = 2, blowup = 3, picard_failure = 4 };

struct Globals {
  std::string out_dir;
  int cadence = 0;
  bool quiet = false;
};

struct Session {
  crf::RunConfig cfg;
  fs::path out;
  crf::RunManifest manifest;
};

Session open_session(const std::string& command, const std::string& config_path, const Globals& g) {
  Session s;
  s.cfg = crf::parse_config(config_path);
  if (g.cadence > 0) s.cfg.solver.cadence = g.cadence;
  if (!g.out_dir.empty()) s.cfg.output.out_dir = g.out_dir;
  s.out = s.cfg.output.out_dir;
  fs::create_directories(s.out);
  s.manifest.command = command;
  s.manifest.config_hash = crf::fnv1a_hex(crf::format_config(s.cfg));
  s.manifest.version = crf::version_string();
  s.manifest.start_time = crf::utc_timestamp();
  s.manifest.regime = s.cfg.solver.regime();
  return s;
}

int finish(Session& s, crf::Termination term, const std::string& message, bool checks_passed = true) {
  s.manifest.termination = term;
  s.manifest.message = message;
  s.manifest.end_time = crf::utc_timestamp();
  crf::write_manifest(s.manifest, s.out / "manifest.json");
  switch (term) {
    case crf::Termination::blowup: return blowup;
    case crf::Termination::picard_failure: return picard_failure;
    case crf::Termination::completed: break;
  }
  return checks_passed ? ok : check_failed;
}

void say(const Globals& g, const std::string& line) {
  if (!g.quiet) std::cout << line << '\n';
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string snapshot_name(long step) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "snapshot_%08ld.crfs", step);
  return buf;
}

int cmd_run(const std::string& path, const Globals& g) {
  Session s = open_session("run", path, g);
  const crf::Scenario sc = crf::build_scenario(s.cfg.solver, s.cfg.scenario);
  const double dt = sc.config.dt;
  const long every = s.cfg.output.snapshot_every;
  auto observer = [&](const crf::State& st, const crf::DiagnosticsMonitor::Sample&) {
    const long step = std::lround(st.t / dt);
    if (every > 0 && step % every == 0) crf::write_snapshot(crf::Snapshot::from_state(st), s.out / snapshot_name(step));
  };
  const crf::RunResult res = crf::run(sc.config, sc.v0, sc.c0, sc.forcing, observer);
  s.manifest.steps_taken = res.steps_taken;
  s.manifest.warnings = res.warnings;
  if (!res.records.empty()) crf::write_diagnostics(res.records, s.out / "diagnostics.csv");
  crf::write_monitors(res.monitors, s.out / "monitors.csv");
  crf::write_snapshot(crf::Snapshot::from_state(res.final_state), s.out / "final.crfs");

  say(g, std::string("termination: ") + crf::to_string(res.termination) +
             (res.message.empty() ? "" : " (" + res.message + ")"));
  say(g, "steps: " + std::to_string(res.steps_taken) + ", max divergence " + num(res.max_divergence) +
             ", max mean drift " + num(res.max_mean_drift) + ", max picard iterations " +
             std::to_string(res.max_picard_iterations));
  if (sc.exact && res.termination == crf::Termination::completed) {
    const crf::ErrorPair e = crf::solution_error(*sc.exact, res.final_state);
    say(g, "final L2 error: v " + num(e.v) + ", c " + num(e.c));
  }
  for (const auto& w : res.warnings) say(g, "warning: " + w);
  return finish(s, res.termination, res.message);
}

int cmd_converge(const std::string& path, const Globals& g) {
  Session s = open_session("converge", path, g);
  const crf::ManufacturedCase mc =
      crf::make_manufactured(s.cfg.scenario.manufactured, s.cfg.scenario.manufactured_params, s.cfg.solver.model);
  const crf::ConvergenceTable table = crf::convergence_study(mc, s.cfg.solver, s.cfg.scenario);
  crf::write_convergence_table(table, s.out / "convergence.csv");
  say(g, "spatial ladder (dt = " + num(s.cfg.scenario.ladder_dt) + ")");
  for (const auto& r : table.spatial) say(g, "  n " + std::to_string(r.n) + "  e_v " + num(r.error.v) + "  e_c " + num(r.error.c));
  for (const auto& r : table.spatial_ratios) say(g, "  ratio v " + num(r.v) + "  c " + num(r.c));
  say(g, "temporal ladder (n = " + std::to_string(s.cfg.scenario.ladder_n) + ")");
  for (const auto& r : table.temporal) say(g, "  dt " + num(r.dt) + "  e_v " + num(r.error.v) + "  e_c " + num(r.error.c));
  for (const auto& r : table.temporal_slopes) say(g, "  slope v " + num(r.v) + "  c " + num(r.c));
  say(g, std::string("spatial ") + (table.spatial_passed ? "PASS" : "FAIL") + ", temporal " +
             (table.temporal_passed ? "PASS" : "FAIL"));
  return finish(s, crf::Termination::completed, "", table.passed());
}

int cmd_unique(const std::string& path, const Globals& g) {
  Session s = open_session("unique", path, g);
  const crf::Scenario sc = crf::build_scenario(s.cfg.solver, s.cfg.scenario);
  try {
    const crf::TwinRunReport rep = crf::uniqueness_experiment(sc, s.cfg.scenario.epsilon);
    crf::write_twin_report(rep, s.out / "twin.csv");
    s.manifest.warnings = rep.warnings;
    s.manifest.steps_taken = sc.config.steps();
    say(g, "calibrated constant " + num(rep.constant) + ", envelope " + (rep.envelope_holds ? "holds" : "violated") +
               ", margin " + num(rep.margin));
    for (const auto& w : rep.warnings) say(g, "warning: " + w);
    return finish(s, crf::Termination::completed, "", rep.envelope_holds);
  } catch (const crf::BlowUp& e) {
    return finish(s, crf::Termination::blowup, e.what());
  } catch (const crf::PicardFailure& e) {
    return finish(s, crf::Termination::picard_failure, e.what());
  }
}

int cmd_check(const std::optional<std::string>& path, long samples, std::uint64_t seed, const Globals& g) {
  crf::StressModel model;
  int d = 2;
  fs::path out = g.out_dir.empty() ? fs::path("out") : fs::path(g.out_dir);
  if (path) {
    const crf::RunConfig cfg = crf::parse_config(*path);
    model = cfg.solver.model;
    d = cfg.solver.d;
    if (g.out_dir.empty()) out = cfg.output.out_dir;
  } else {
    model.index = crf::PowerLawIndex::tanh_profile(2.0, 2.9, 0.5, 0.2);
  }
  fs::create_directories(out);
  const crf::PropertyReport rep = crf::check_properties(model, samples, seed, d);
  crf::write_property_report(rep, out / "constitutive.csv");
  say(g, "samples " + std::to_string(rep.samples) + ", violations " + std::to_string(rep.violations));
  say(g, "K1 " + num(rep.K1_measured) + "  K2 " + num(rep.K2_measured) + "  K3 " + num(rep.K3_measured) + "  K4 " +
             num(rep.K4_measured));
  if (!rep.passed()) say(g, "first violation: " + rep.witness);
  return rep.passed() ? ok : check_failed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-spectral solver for concentration-dependent power-law fluids"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--out-dir", g.out_dir, "Output directory (overrides [output] out_dir)");
  app.add_option("--cadence", g.cadence, "Steps between diagnostics records (overrides [solver] cadence)")
      ->check(CLI::PositiveNumber);
  app.add_flag("--quiet", g.quiet, "Suppress progress output");
  app.fallthrough();

  std::string config;
  auto* run = app.add_subcommand("run", "Integrate a configured scenario");
  run->add_option("config", config, "Configuration file")->required();
  auto* converge = app.add_subcommand("converge", "Spatial and temporal convergence study on a manufactured case");
  converge->add_option("config", config, "Configuration file")->required();
  auto* unique = app.add_subcommand("unique", "Twin-run contraction experiment");
  unique->add_option("config", config, "Configuration file")->required();
  auto* check = app.add_subcommand("check-constitutive", "Randomized check of the stress-law inequalities");
  long samples = 10000;
  std::uint64_t seed = 1;
  std::optional<std::string> check_config;
  check->add_option("--samples", samples, "Number of samples")->check(CLI::PositiveNumber);
  check->add_option("--seed", seed, "Random seed");
  check->add_option("config", check_config, "Optional configuration file supplying the stress law");
  auto* defaults = app.add_subcommand("print-defaults", "Print every configuration key with its default");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : config_error;
  }

  try {
    if (*defaults) {
      std::cout << crf::default_config_text();
      return ok;
    }
    if (*check) return cmd_check(check_config, samples, seed, g);
    if (*run) return cmd_run(config, g);
    if (*converge) return cmd_converge(config, g);
    if (*unique) return cmd_unique(config, g);
  } catch (const crf::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const crf::InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return check_failed;
  }
  return ok;
}
