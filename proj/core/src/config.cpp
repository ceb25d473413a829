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

#include "crf/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "crf/error.hpp"

namespace crf {
namespace {

struct Law {
  std::string profile = "auto";
  double nu0 = 1.0;
  double p_minus = 2.0;
  double p_plus = 2.0;
  double center = 0.5;
  double width = 0.2;
  double slope = 0.0;
  double anchor = 2.0;
  bool decreasing = true;
};

struct Staging {
  RunConfig rc;
  Law law;
};

// Shortest of %.15g / %.17g that reads back exactly.
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  if (std::strtod(buf, nullptr) != v) std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(std::string_view v, int line, std::string_view key) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out))
    throw ConfigError(std::string(key) + ": expected a number, got '" + std::string(v) + "'", line);
  return out;
}

long to_int(std::string_view v, int line, std::string_view key) {
  long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError(std::string(key) + ": expected an integer, got '" + std::string(v) + "'", line);
  return out;
}

bool to_bool(std::string_view v, int line, std::string_view key) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw ConfigError(std::string(key) + ": expected true or false, got '" + std::string(v) + "'", line);
}

std::vector<std::string_view> split_list(std::string_view v) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < v.size()) {
    const auto b = v.find_first_not_of(" \t,", i);
    if (b == std::string_view::npos) break;
    auto e = v.find_first_of(" \t,", b);
    if (e == std::string_view::npos) e = v.size();
    out.push_back(v.substr(b, e - b));
    i = e;
  }
  return out;
}

template <class T>
std::string join(const std::vector<T>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    if constexpr (std::is_floating_point_v<T>) out += fmt(xs[i]);
    else out += std::to_string(xs[i]);
  }
  return out;
}

struct Key {
  const char* section;
  const char* name;
  bool required;
  const char* doc;
  std::function<void(Staging&, std::string_view, int)> set;
  std::function<std::string(const Staging&)> get;
};

#define CRF_DOUBLE(sec, key, req, doc, field)                                                   \
  Key {                                                                                         \
    sec, #key, req, doc, [](Staging& s, std::string_view v, int l) { field = to_double(v, l, #key); }, \
        [](const Staging& s) { return fmt(field); }                                             \
  }
#define CRF_INT(sec, key, req, doc, field)                                                                    \
  Key {                                                                                                       \
    sec, #key, req, doc,                                                                                      \
        [](Staging& s, std::string_view v, int l) { field = static_cast<decltype(field)>(to_int(v, l, #key)); }, \
        [](const Staging& s) { return std::to_string(field); }                                                \
  }

const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      CRF_INT("solver", d, true, "spatial dimension, 2 or 3", s.rc.solver.d),
      CRF_INT("solver", n, true, "grid points per direction, even, 8..1024", s.rc.solver.n),
      CRF_DOUBLE("solver", dt, true, "time step", s.rc.solver.dt),
      CRF_DOUBLE("solver", t_end, true, "final time", s.rc.solver.t_end),
      CRF_DOUBLE("solver", picard_tol, false, "relative Picard update tolerance", s.rc.solver.picard_tol),
      CRF_INT("solver", picard_max, false, "Picard iteration cap per step", s.rc.solver.picard_max),
      Key{"solver", "split", false, "viscous splitting: automatic or constant",
          [](Staging& s, std::string_view v, int l) {
            if (v == "automatic") s.rc.solver.split = ViscousSplit::automatic;
            else if (v == "constant") s.rc.solver.split = ViscousSplit::constant;
            else throw ConfigError("split: expected automatic or constant", l);
          },
          [](const Staging& s) {
            return std::string(s.rc.solver.split == ViscousSplit::automatic ? "automatic" : "constant");
          }},
      CRF_DOUBLE("solver", nu_split, false, "splitting viscosity for split = constant, 0 selects nu0",
                 s.rc.solver.nu_split),
      CRF_DOUBLE("solver", q_monitor, false, "exponent of |grad c|_q, must exceed 2d; 0 selects 2d+2",
                 s.rc.solver.q_monitor),
      CRF_DOUBLE("solver", delta_monitor, false, "exponent of the L^delta monitors; 0 selects 4.5 (2D) or 3.25 (3D)",
                 s.rc.solver.delta_monitor),
      Key{"solver", "dealias", false, "two_thirds or none",
          [](Staging& s, std::string_view v, int l) {
            if (v == "two_thirds") s.rc.solver.dealias = DealiasRule::two_thirds;
            else if (v == "none") s.rc.solver.dealias = DealiasRule::none;
            else throw ConfigError("dealias: expected two_thirds or none", l);
          },
          [](const Staging& s) {
            return std::string(s.rc.solver.dealias == DealiasRule::two_thirds ? "two_thirds" : "none");
          }},
      Key{"solver", "convection", false, "divergence, skew_symmetric or off",
          [](Staging& s, std::string_view v, int l) {
            if (v == "divergence") s.rc.solver.convection = ConvectionForm::divergence;
            else if (v == "skew_symmetric") s.rc.solver.convection = ConvectionForm::skew_symmetric;
            else if (v == "off") s.rc.solver.convection = ConvectionForm::off;
            else throw ConfigError("convection: expected divergence, skew_symmetric or off", l);
          },
          [](const Staging& s) {
            switch (s.rc.solver.convection) {
              case ConvectionForm::divergence: return std::string("divergence");
              case ConvectionForm::skew_symmetric: return std::string("skew_symmetric");
              case ConvectionForm::off: break;
            }
            return std::string("off");
          }},
      CRF_INT("solver", cadence, false, "steps between diagnostics records", s.rc.solver.cadence),
      CRF_DOUBLE("solver", blowup_threshold, false, "abort when a monitored norm exceeds this",
                 s.rc.solver.blowup_threshold),

      CRF_DOUBLE("constitutive", nu0, true, "reference viscosity", s.law.nu0),
      CRF_DOUBLE("constitutive", p_minus, true, "lower bound of p(c), > 1", s.law.p_minus),
      CRF_DOUBLE("constitutive", p_plus, true, "upper bound of p(c), >= p_minus", s.law.p_plus),
      Key{"constitutive", "profile", false, "auto, constant, affine_clamped or tanh; auto is constant when p_minus = p_plus, tanh otherwise",
          [](Staging& s, std::string_view v, int l) {
            if (v != "auto" && v != "constant" && v != "affine_clamped" && v != "tanh")
              throw ConfigError("profile: expected auto, constant, affine_clamped or tanh", l);
            s.law.profile = std::string(v);
          },
          [](const Staging& s) { return s.law.profile; }},
      CRF_DOUBLE("constitutive", center, false, "tanh profile midpoint in c", s.law.center),
      CRF_DOUBLE("constitutive", width, false, "tanh profile width in c", s.law.width),
      CRF_DOUBLE("constitutive", slope, false, "affine profile dp/dc", s.law.slope),
      CRF_DOUBLE("constitutive", anchor, false, "affine profile value at c = 0", s.law.anchor),
      Key{"constitutive", "decreasing", false, "tanh profile decreases in c",
          [](Staging& s, std::string_view v, int l) { s.law.decreasing = to_bool(v, l, "decreasing"); },
          [](const Staging& s) { return std::string(s.law.decreasing ? "true" : "false"); }},

      Key{"scenario", "kind", false, "zero, taylor_green, stokes_mode, heat_mode, synovial or manufactured",
          [](Staging& s, std::string_view v, int l) {
            try {
              s.rc.scenario.kind = parse_scenario_kind(v);
            } catch (const InvalidArgument& e) {
              throw ConfigError(e.what(), l);
            }
          },
          [](const Staging& s) { return std::string(to_string(s.rc.scenario.kind)); }},
      CRF_DOUBLE("scenario", velocity_amplitude, false, "initial velocity amplitude", s.rc.scenario.velocity_amplitude),
      Key{"scenario", "mode", false, "wave numbers of stokes_mode / heat_mode",
          [](Staging& s, std::string_view v, int l) {
            const auto parts = split_list(v);
            if (parts.empty() || parts.size() > 3) throw ConfigError("mode: expected 1 to 3 integers", l);
            s.rc.scenario.mode = {0, 0, 0};
            for (std::size_t i = 0; i < parts.size(); ++i)
              s.rc.scenario.mode[i] = static_cast<int>(to_int(parts[i], l, "mode"));
          },
          [](const Staging& s) {
            const auto& m = s.rc.scenario.mode;
            return std::to_string(m[0]) + ", " + std::to_string(m[1]) + ", " + std::to_string(m[2]);
          }},
      CRF_DOUBLE("scenario", conc_mean, false, "mean concentration", s.rc.scenario.conc_mean),
      CRF_DOUBLE("scenario", conc_amplitude, false, "concentration perturbation amplitude", s.rc.scenario.conc_amplitude),
      CRF_DOUBLE("scenario", blob_width, false, "width of the synovial concentration blob", s.rc.scenario.blob_width),
      CRF_DOUBLE("scenario", shear_forcing, false, "F in f = (F sin 2 pi y, 0, 0)", s.rc.scenario.shear_forcing),
      CRF_DOUBLE("scenario", source_flux, false, "G in g = (G sin 2 pi x, 0, 0)", s.rc.scenario.source_flux),
      Key{"scenario", "manufactured", false, "decaying_mode_2d, decaying_mode_3d or steady_shear_2d",
          [](Staging& s, std::string_view v, int l) {
            try {
              s.rc.scenario.manufactured = parse_manufactured_kind(v);
            } catch (const InvalidArgument& e) {
              throw ConfigError(e.what(), l);
            }
          },
          [](const Staging& s) { return std::string(to_string(s.rc.scenario.manufactured)); }},
      CRF_DOUBLE("scenario", exact_velocity_amplitude, false, "manufactured A",
                 s.rc.scenario.manufactured_params.velocity_amplitude),
      CRF_DOUBLE("scenario", exact_velocity_decay, false, "manufactured lambda",
                 s.rc.scenario.manufactured_params.velocity_decay),
      CRF_DOUBLE("scenario", exact_conc_mean, false, "manufactured mean concentration",
                 s.rc.scenario.manufactured_params.conc_mean),
      CRF_DOUBLE("scenario", exact_conc_amplitude, false, "manufactured B",
                 s.rc.scenario.manufactured_params.conc_amplitude),
      CRF_DOUBLE("scenario", exact_conc_decay, false, "manufactured mu", s.rc.scenario.manufactured_params.conc_decay),
      CRF_DOUBLE("scenario", exact_kernel_radius, false, "manufactured kernel radius r in [0, 1)",
                 s.rc.scenario.manufactured_params.kernel_radius),
      CRF_DOUBLE("scenario", epsilon, false, "twin-run perturbation size", s.rc.scenario.epsilon),
      Key{"scenario", "n_ladder", false, "grid sizes of the spatial ladder",
          [](Staging& s, std::string_view v, int l) {
            s.rc.scenario.n_ladder.clear();
            for (auto p : split_list(v)) s.rc.scenario.n_ladder.push_back(static_cast<int>(to_int(p, l, "n_ladder")));
          },
          [](const Staging& s) { return join(s.rc.scenario.n_ladder); }},
      CRF_DOUBLE("scenario", ladder_dt, false, "time step of the spatial ladder", s.rc.scenario.ladder_dt),
      Key{"scenario", "dt_ladder", false, "time steps of the temporal ladder",
          [](Staging& s, std::string_view v, int l) {
            s.rc.scenario.dt_ladder.clear();
            for (auto p : split_list(v)) s.rc.scenario.dt_ladder.push_back(to_double(p, l, "dt_ladder"));
          },
          [](const Staging& s) { return join(s.rc.scenario.dt_ladder); }},
      CRF_INT("scenario", ladder_n, false, "grid size of the temporal ladder", s.rc.scenario.ladder_n),

      Key{"output", "out_dir", false, "output directory",
          [](Staging& s, std::string_view v, int) { s.rc.output.out_dir = std::string(v); },
          [](const Staging& s) { return s.rc.output.out_dir; }},
      CRF_INT("output", snapshot_every, false, "steps between snapshots, 0 for the final state only",
              s.rc.output.snapshot_every),
  };
  return table;
}

#undef CRF_DOUBLE
#undef CRF_INT

Staging stage(const RunConfig& rc) {
  Staging s;
  s.rc = rc;
  const PowerLawIndex& ix = rc.solver.model.index;
  s.law.nu0 = rc.solver.model.nu0;
  s.law.p_minus = ix.p_minus();
  s.law.p_plus = ix.p_plus();
  switch (ix.form()) {
    case ProfileForm::constant: s.law.profile = "constant"; break;
    case ProfileForm::affine_clamped: s.law.profile = "affine_clamped"; break;
    case ProfileForm::tanh_profile: s.law.profile = "tanh"; break;
  }
  s.law.center = ix.center();
  s.law.width = ix.width();
  s.law.slope = ix.slope();
  s.law.anchor = ix.anchor();
  s.law.decreasing = ix.decreasing();
  return s;
}

PowerLawIndex build_index(const Law& law) {
  std::string profile = law.profile;
  if (profile == "auto") profile = law.p_minus == law.p_plus ? "constant" : "tanh";
  if (profile == "constant") {
    if (law.p_minus != law.p_plus) throw InvalidArgument("constant profile requires p_minus = p_plus");
    return PowerLawIndex::constant(law.p_minus);
  }
  if (profile == "affine_clamped") return PowerLawIndex::affine_clamped(law.p_minus, law.p_plus, law.slope, law.anchor);
  return PowerLawIndex::tanh_profile(law.p_minus, law.p_plus, law.center, law.width, law.decreasing);
}

}  // namespace

RunConfig parse_config_text(std::string_view text) {
  Staging s;
  std::string section;
  std::set<std::string> seen;
  std::map<std::string, int> lines;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("malformed section header", line_no);
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section != "solver" && section != "constitutive" && section != "scenario" && section != "output")
        throw ConfigError("unknown section [" + section + "]", line_no);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", line_no);
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (section.empty()) throw ConfigError("key '" + key + "' outside of a section", line_no);
    const Key* def = nullptr;
    for (const Key& k : keys())
      if (section == k.section && key == k.name) def = &k;
    if (!def) throw ConfigError("unknown key '" + key + "' in [" + section + "]", line_no);
    if (value.empty()) throw ConfigError("missing value for '" + key + "'", line_no);
    if (!seen.insert(key).second) throw ConfigError("duplicate key '" + key + "'", line_no);
    lines[key] = line_no;
    def->set(s, value, line_no);
  }
  for (const Key& k : keys())
    if (k.required && !seen.count(k.name))
      throw ConfigError(std::string("missing required key '") + k.name + "' in [" + k.section + "]");

  auto at = [&](const char* key) { return lines.count(key) ? lines[key] : 0; };
  if (!(s.law.p_minus > 1.0)) throw ConfigError("p_minus must exceed 1", at("p_minus"));
  if (!(s.law.p_plus >= s.law.p_minus)) throw ConfigError("p_plus must be >= p_minus", at("p_plus"));
  if (!(s.law.nu0 > 0.0)) throw ConfigError("nu0 must be positive", at("nu0"));
  if (s.rc.solver.d != 2 && s.rc.solver.d != 3) throw ConfigError("d must be 2 or 3", at("d"));
  if (s.rc.solver.q_monitor != 0.0 && !(s.rc.solver.q_monitor > 2.0 * s.rc.solver.d))
    throw ConfigError("q_monitor must exceed 2d = " + std::to_string(2 * s.rc.solver.d), at("q_monitor"));
  try {
    s.rc.solver.model.nu0 = s.law.nu0;
    s.rc.solver.model.index = build_index(s.law);
    s.rc.solver.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  if (s.rc.output.snapshot_every < 0) throw ConfigError("snapshot_every must be >= 0", at("snapshot_every"));
  return s.rc;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string format_config(const RunConfig& config) {
  const Staging s = stage(config);
  std::string out;
  std::string section;
  for (const Key& k : keys()) {
    if (section != k.section) {
      if (!section.empty()) out += '\n';
      section = k.section;
      out += "[" + section + "]\n";
    }
    out += std::string(k.name) + " = " + k.get(s) + "\n";
  }
  return out;
}

std::string default_config_text() {
  Staging s;
  std::string out = "# Defaults. Keys marked required have no default; the value shown is an example.\n";
  std::string section;
  for (const Key& k : keys()) {
    if (section != k.section) {
      section = k.section;
      out += "\n[" + section + "]\n";
    }
    out += std::string(k.name) + " = " + k.get(s) + "    # " + (k.required ? "required: " : "") + k.doc + "\n";
  }
  return out;
}

}  // namespace crf
