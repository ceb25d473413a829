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

#include <filesystem>
#include <string>
#include <string_view>

#include "crf/scenarios.hpp"

namespace crf {

struct OutputSpec {
  std::string out_dir = "out";
  long snapshot_every = 0;  // steps between snapshots; 0 writes only the final state
};

/// Everything a configuration file selects.
struct RunConfig {
  SolverConfig solver;
  ScenarioSpec scenario;
  OutputSpec output;
};

/// Parses the line-oriented `key = value` format with sections [solver],
/// [constitutive], [scenario] and [output]; `#` starts a comment. Throws
/// ConfigError carrying the line number on unknown keys, malformed values
/// and missing required keys (d, n, dt, t_end, nu0, p_minus, p_plus).
RunConfig parse_config_text(std::string_view text);
RunConfig parse_config(const std::filesystem::path& path);

/// Canonical `key = value` listing of every setting, parseable by
/// parse_config_text.
std::string format_config(const RunConfig& config);

/// Documented defaults, one commented line per key.
std::string default_config_text();

}  // namespace crf
