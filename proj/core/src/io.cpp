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

#include "crf/io.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "crf/error.hpp"

#ifndef CRF_VERSION_STRING
#define CRF_VERSION_STRING "unknown"
#endif

namespace crf {
namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string header_line() {
  std::string h;
  for (std::string_view c : DiagnosticsRecord::columns()) {
    if (!h.empty()) h += ',';
    h += c;
  }
  return h;
}

// Emits a CSV with the given header and rows of doubles.
class CsvWriter {
 public:
  explicit CsvWriter(std::string header) { text_ = std::move(header) + "\n"; }
  void row(std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
      if (!first) text_ += ',';
      text_ += fmt(v);
      first = false;
    }
    text_ += '\n';
  }
  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

void put_u32(std::string& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xffu));
}

void put_f64(std::string& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xffu));
}

std::uint64_t get_le(const std::string& in, std::size_t offset, int bytes) {
  std::uint64_t v = 0;
  for (int b = 0; b < bytes; ++b) v |= std::uint64_t(static_cast<unsigned char>(in[offset + b])) << (8 * b);
  return v;
}

constexpr std::size_t snapshot_header_bytes = 4 + 4 + 3 * 8;

}  // namespace

std::string format_diagnostics(const std::vector<DiagnosticsRecord>& records) {
  if (records.empty()) throw InvalidArgument("diagnostics series is empty");
  std::string out = header_line() + "\n";
  for (const DiagnosticsRecord& r : records) {
    const auto vals = r.values();
    for (std::size_t i = 0; i < vals.size(); ++i) {
      if (i) out += ',';
      out += fmt(vals[i]);
    }
    out += '\n';
  }
  return out;
}

void write_diagnostics(const std::vector<DiagnosticsRecord>& records, const std::filesystem::path& path) {
  write_text(path, format_diagnostics(records));
}

std::vector<DiagnosticsRecord> parse_diagnostics(std::string_view text) {
  const std::string schema = "diagnostics schema v" + std::to_string(diagnostics_schema_version);
  auto eol = text.find('\n');
  if (eol == std::string_view::npos) throw FormatError(schema + ": missing header row");
  if (text.substr(0, eol) != header_line())
    throw FormatError(schema + ": header mismatch, expected '" + header_line() + "'");
  std::vector<DiagnosticsRecord> out;
  std::size_t pos = eol + 1;
  int line = 1;
  while (pos < text.size()) {
    ++line;
    eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string row(text.substr(pos, eol - pos));
    pos = eol + 1;
    if (row.empty()) continue;
    std::array<double, DiagnosticsRecord::column_count> vals{};
    std::size_t col = 0;
    const char* p = row.c_str();
    while (true) {
      if (col >= vals.size()) throw FormatError(schema + ": too many columns on line " + std::to_string(line));
      char* end = nullptr;
      vals[col++] = std::strtod(p, &end);
      if (end == p) throw FormatError(schema + ": malformed value on line " + std::to_string(line));
      if (*end == ',') {
        p = end + 1;
        continue;
      }
      if (*end != '\0') throw FormatError(schema + ": malformed value on line " + std::to_string(line));
      break;
    }
    if (col != vals.size()) throw FormatError(schema + ": too few columns on line " + std::to_string(line));
    out.push_back(DiagnosticsRecord::from_values(vals));
  }
  return out;
}

std::vector<DiagnosticsRecord> read_diagnostics(const std::filesystem::path& path) {
  return parse_diagnostics(read_text(path));
}

void write_monitors(const std::vector<MonitorSample>& samples, const std::filesystem::path& path) {
  CsvWriter csv(
      "t,gradv_pminus,gradv_l3,v_inf,gradc_inf,g_w1q,mean_c,divergence,conc_residual,mr_ratio,gn_ratio,korn_ratio");
  for (const MonitorSample& m : samples)
    csv.row({m.t, m.gradv_pminus, m.gradv_l3, m.v_inf, m.gradc_inf, m.g_w1q, m.mean_c, m.divergence, m.conc_residual,
             m.mr_ratio, m.gn_ratio, m.korn_ratio});
  write_text(path, csv.text());
}

void write_property_report(const PropertyReport& report, const std::filesystem::path& path) {
  CsvWriter csv("samples,dim,K1_measured,K2_measured,K3_measured,K4_measured,violations");
  csv.row({double(report.samples), double(report.dim), report.K1_measured, report.K2_measured, report.K3_measured,
           report.K4_measured, double(report.violations)});
  write_text(path, csv.text());
}

void write_convergence_table(const ConvergenceTable& table, const std::filesystem::path& path) {
  CsvWriter csv("ladder,n,dt,error_v,error_c");
  for (const ConvergenceRow& r : table.spatial) csv.row({0.0, double(r.n), r.dt, r.error.v, r.error.c});
  for (const ConvergenceRow& r : table.temporal) csv.row({1.0, double(r.n), r.dt, r.error.v, r.error.c});
  write_text(path, csv.text());
}

void write_twin_report(const TwinRunReport& report, const std::filesystem::path& path) {
  CsvWriter csv("t,v_diff_sq,gradc_diff_sq,y,dv_diss,lapc_diss,phi,envelope");
  for (std::size_t i = 0; i < report.t.size(); ++i)
    csv.row({report.t[i], report.v_diff_sq[i], report.gradc_diff_sq[i], report.y[i], report.dv_diss[i],
             report.lapc_diss[i], report.phi[i], report.envelope[i]});
  write_text(path, csv.text());
}

Snapshot Snapshot::from_state(const State& state) {
  const GridPtr& grid = state.v.grid();
  Snapshot s;
  s.d = grid->dim();
  s.n = grid->modes();
  s.t = state.t;
  const PhysicalField v = to_physical(state.v);
  const PhysicalField c = to_physical(state.c);
  s.data.reserve(static_cast<std::size_t>(s.d + 1) * grid->points());
  for (int i = 0; i < v.components(); ++i) s.data.insert(s.data.end(), v.component(i).begin(), v.component(i).end());
  s.data.insert(s.data.end(), c.component(0).begin(), c.component(0).end());
  return s;
}

State Snapshot::to_state() const {
  const GridPtr grid = make_grid(d, n);
  const std::size_t np = grid->points();
  if (data.size() != static_cast<std::size_t>(d + 1) * np) throw FormatError("snapshot size mismatch");
  PhysicalField v(grid, Rank::vector);
  PhysicalField c(grid, Rank::scalar);
  for (int i = 0; i < d; ++i) std::copy_n(data.begin() + i * np, np, v.component(i).begin());
  std::copy_n(data.begin() + d * np, np, c.component(0).begin());
  State s;
  s.t = t;
  s.v = to_spectral(v);
  s.c = to_spectral(c);
  return s;
}

void write_snapshot(const Snapshot& snapshot, const std::filesystem::path& path) {
  std::string out = "CRFS";
  put_u32(out, snapshot_format_version);
  put_f64(out, snapshot.d);
  put_f64(out, snapshot.n);
  put_f64(out, snapshot.t);
  out.reserve(out.size() + 8 * snapshot.data.size());
  for (double v : snapshot.data) put_f64(out, v);
  write_text(path, out);
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  const std::string in = read_text(path);
  if (in.size() < 4 || in.compare(0, 4, "CRFS") != 0) throw FormatError("snapshot: bad magic in '" + path.string() + "'");
  if (in.size() < snapshot_header_bytes) throw FormatError("snapshot: size mismatch (truncated header)");
  const auto version = static_cast<std::uint32_t>(get_le(in, 4, 4));
  if (version != snapshot_format_version)
    throw FormatError("snapshot: unsupported format version " + std::to_string(version));
  Snapshot s;
  const double d = std::bit_cast<double>(get_le(in, 8, 8));
  const double n = std::bit_cast<double>(get_le(in, 16, 8));
  s.t = std::bit_cast<double>(get_le(in, 24, 8));
  if (!(d == 2.0 || d == 3.0) || !(n >= 1.0 && n <= 1024.0) || n != std::floor(n))
    throw FormatError("snapshot: invalid dimensions");
  s.d = static_cast<int>(d);
  s.n = static_cast<int>(n);
  std::size_t count = static_cast<std::size_t>(s.d + 1);
  for (int i = 0; i < s.d; ++i) count *= static_cast<std::size_t>(s.n);
  if (in.size() != snapshot_header_bytes + 8 * count)
    throw FormatError("snapshot: size mismatch, expected " + std::to_string(snapshot_header_bytes + 8 * count) +
                      " bytes, found " + std::to_string(in.size()));
  s.data.resize(count);
  for (std::size_t i = 0; i < count; ++i)
    s.data[i] = std::bit_cast<double>(get_le(in, snapshot_header_bytes + 8 * i, 8));
  return s;
}

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string version_string() { return CRF_VERSION_STRING; }

void write_manifest(const RunManifest& m, const std::filesystem::path& path) {
  nlohmann::ordered_json j;
  j["command"] = m.command;
  j["config_hash"] = m.config_hash;
  j["version"] = m.version;
  j["start_time"] = m.start_time;
  j["end_time"] = m.end_time;
  j["regime"] = {{"strong_regime", m.regime.strong_regime}, {"unique_regime", m.regime.unique_regime}};
  j["termination"] = to_string(m.termination);
  j["message"] = m.message;
  j["steps_taken"] = m.steps_taken;
  j["warnings"] = m.warnings;
  write_text(path, j.dump(2) + "\n");
}

}  // namespace crf
