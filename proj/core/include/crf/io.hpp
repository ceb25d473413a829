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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "crf/constitutive.hpp"
#include "crf/diagnostics.hpp"
#include "crf/scenarios.hpp"
#include "crf/solver.hpp"

namespace crf {

inline constexpr int diagnostics_schema_version = 1;
inline constexpr std::uint32_t snapshot_format_version = 1;

/// CSV text: fixed header row, one record per line, %.17g values, LF
/// endings. Throws InvalidArgument for an empty series.
std::string format_diagnostics(const std::vector<DiagnosticsRecord>& records);
void write_diagnostics(const std::vector<DiagnosticsRecord>& records, const std::filesystem::path& path);

/// Throws FormatError naming the schema version when the header differs
/// or a row is malformed.
std::vector<DiagnosticsRecord> parse_diagnostics(std::string_view text);
std::vector<DiagnosticsRecord> read_diagnostics(const std::filesystem::path& path);

void write_monitors(const std::vector<MonitorSample>& samples, const std::filesystem::path& path);
void write_property_report(const PropertyReport& report, const std::filesystem::path& path);
void write_convergence_table(const ConvergenceTable& table, const std::filesystem::path& path);
void write_twin_report(const TwinRunReport& report, const std::filesystem::path& path);

/// Physical-space field dump: v components then c, x-fastest.
struct Snapshot {
  int d = 2;
  int n = 0;
  double t = 0.0;
  std::vector<double> data;

  static Snapshot from_state(const State& state);
  State to_state() const;
};

/// "CRFS", u32 version, then d, n, t and the arrays as little-endian float64.
void write_snapshot(const Snapshot& snapshot, const std::filesystem::path& path);
/// Throws FormatError on bad magic, version or size.
Snapshot read_snapshot(const std::filesystem::path& path);

struct RunManifest {
  std::string command;
  std::string config_hash;
  std::string version;
  std::string start_time;
  std::string end_time;
  RegimeFlags regime;
  Termination termination = Termination::completed;
  std::string message;
  long steps_taken = 0;
  std::vector<std::string> warnings;
};

/// 64-bit FNV-1a of the text, as 16 hex digits.
std::string fnv1a_hex(std::string_view text);
/// UTC wall time, ISO 8601.
std::string utc_timestamp();
std::string version_string();
void write_manifest(const RunManifest& manifest, const std::filesystem::path& path);

}  // namespace crf
