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

#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>

#include <json.hpp>

#include "crf/error.hpp"
#include "crf/io.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;

namespace crf {
namespace {

fs::path temp_path(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "crf_test_io";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

TEST(Csv, SingleZeroRecord) {
  const std::string text = format_diagnostics({DiagnosticsRecord{}});
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
  EXPECT_EQ(text.find('\r'), std::string::npos);
  const std::string row = text.substr(text.find('\n') + 1);
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), 19);
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "t,kinetic,visc_diss,modular_gradv,stress_dual,conc_l2,conc_diss,gradc_q,gradc_q_diss,eta_l2,eta_high,"
            "grad_eta_l2,w22_weighted,laplacian_v_l2,dt_v_l2,dt_c_l2,dt_c_ldelta,potential,picard_iters,"
            "energy_residual");
  EXPECT_THROW(format_diagnostics({}), InvalidArgument);
}

TEST(Csv, RoundTripIsBitExact) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<DiagnosticsRecord> recs;
  for (int i = 0; i < 50; ++i) {
    std::array<double, 20> v{};
    for (double& x : v) x = u(rng) * std::pow(10.0, 30 * u(rng));
    v[3] = 4.9406564584124654e-324;  // denormal
    v[4] = -0.0;
    recs.push_back(DiagnosticsRecord::from_values(v));
  }
  const fs::path p = temp_path("diag.csv");
  write_diagnostics(recs, p);
  const auto back = read_diagnostics(p);
  ASSERT_EQ(back.size(), recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const auto a = recs[i].values(), b = back[i].values();
    EXPECT_EQ(std::memcmp(a.data(), b.data(), sizeof(double) * a.size()), 0);
  }
}

TEST(Csv, HeaderMismatchIsVersionedError) {
  std::string text = format_diagnostics({DiagnosticsRecord{}});
  text.replace(0, 1, "time");
  try {
    parse_diagnostics(text);
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("schema v1"), std::string::npos);
  }
  std::string short_row = format_diagnostics({DiagnosticsRecord{}});
  short_row.erase(short_row.rfind(','));
  short_row += "\n";
  EXPECT_THROW(parse_diagnostics(short_row), FormatError);
}

State random_state(int d, int n, std::uint64_t seed) {
  const GridPtr g = make_grid(d, n);
  State s;
  s.t = 0.375;
  s.v = testing::random_solenoidal(g, seed);
  s.c = to_spectral(testing::random_field(g, Rank::scalar, seed + 1));
  return s;
}

TEST(Snapshot, RoundTripIsBitExact) {
  for (int d : {2, 3}) {
    const Snapshot s = Snapshot::from_state(random_state(d, 8, 3));
    EXPECT_EQ(s.data.size(), static_cast<std::size_t>((d + 1) * (d == 2 ? 64 : 512)));
    const fs::path p = temp_path("snap.crfs");
    write_snapshot(s, p);
    EXPECT_EQ(fs::file_size(p), 32 + 8 * s.data.size());
    const Snapshot r = read_snapshot(p);
    EXPECT_EQ(r.d, s.d);
    EXPECT_EQ(r.n, s.n);
    EXPECT_EQ(r.t, s.t);
    EXPECT_EQ(std::memcmp(r.data.data(), s.data.data(), 8 * s.data.size()), 0);
  }
}

TEST(Snapshot, LayoutIsLittleEndianHeaderThenArrays) {
  const Snapshot s = Snapshot::from_state(random_state(2, 8, 5));
  const fs::path p = temp_path("layout.crfs");
  write_snapshot(s, p);
  const std::string bytes = slurp(p);
  EXPECT_EQ(bytes.substr(0, 4), "CRFS");
  EXPECT_EQ(bytes[4], 1);
  EXPECT_EQ(bytes[5], 0);
  double d = 0, first = 0;
  std::memcpy(&d, bytes.data() + 8, 8);
  std::memcpy(&first, bytes.data() + 32, 8);
  EXPECT_EQ(d, 2.0);
  EXPECT_EQ(first, s.data[0]);
}

TEST(Snapshot, StateConversionPreservesFields) {
  const State st = random_state(2, 16, 7);
  const State back = Snapshot::from_state(st).to_state();
  const auto bv = back.v.values(), sv = st.v.values();
  for (std::size_t i = 0; i < sv.size(); ++i) EXPECT_LT(std::abs(bv[i] - sv[i]), 1e-14);
  const auto bc = back.c.values(), sc = st.c.values();
  for (std::size_t i = 0; i < sc.size(); ++i) EXPECT_LT(std::abs(bc[i] - sc[i]), 1e-14);
  EXPECT_EQ(back.t, st.t);
}

TEST(Snapshot, Errors) {
  const Snapshot s = Snapshot::from_state(random_state(2, 8, 5));
  const fs::path p = temp_path("bad.crfs");
  write_snapshot(s, p);
  std::string bytes = slurp(p);

  std::ofstream(p, std::ios::binary | std::ios::trunc) << bytes.substr(0, bytes.size() - 8);
  try {
    read_snapshot(p);
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("size mismatch"), std::string::npos);
  }
  std::string magic = bytes;
  magic[0] = 'X';
  std::ofstream(p, std::ios::binary | std::ios::trunc) << magic;
  EXPECT_THROW(read_snapshot(p), FormatError);
  std::string version = bytes;
  version[4] = 9;
  std::ofstream(p, std::ios::binary | std::ios::trunc) << version;
  EXPECT_THROW(read_snapshot(p), FormatError);
}

TEST(Manifest, FieldsAndHash) {
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
  RunManifest m;
  m.command = "run";
  m.config_hash = fnv1a_hex("x");
  m.version = version_string();
  m.start_time = utc_timestamp();
  m.end_time = utc_timestamp();
  m.regime = {true, false};
  m.termination = Termination::picard_failure;
  m.warnings = {"w"};
  const fs::path p = temp_path("manifest.json");
  write_manifest(m, p);
  const auto j = nlohmann::json::parse(slurp(p));
  EXPECT_EQ(j["termination"], "picard_failure");
  EXPECT_EQ(j["regime"]["strong_regime"], true);
  EXPECT_EQ(j["regime"]["unique_regime"], false);
  EXPECT_EQ(j["version"], version_string());
  EXPECT_EQ(j["start_time"].get<std::string>().size(), 20u);
}

}  // namespace
}  // namespace crf
