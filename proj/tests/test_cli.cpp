// Copyright 2026 The sl3hecke Authors
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

// Result tables and the command line tool, run as a subprocess.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "json.hpp"
#include "table.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using sl3cli::Document;
using sl3cli::Table;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + "\"" SL3_CLI "\" " + args + " 2>/dev/null";
  Run r;
  FILE* f = popen(cmd.c_str(), "r");
  REQUIRE(f);
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, f)) > 0) r.out.append(buf, n);
  const int st = pclose(f);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string config_value(const Document& d, const std::string& key) {
  for (const auto& [k, v] : d.config)
    if (k == key) return v;
  return "<missing>";
}

std::string summary_value(const Document& d, const std::string& key) {
  for (const auto& [k, v] : d.summary)
    if (k == key) return v;
  return "<missing>";
}

const Table& table(const Document& d, const std::string& name) {
  for (const auto& t : d.tables)
    if (t.name == name) return t;
  FAIL("missing table " << name);
  throw 0;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("sl3_test_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

std::string random_text(std::mt19937& rng, bool allow_empty) {
  static const std::vector<std::string> atoms = {"a", "Z", "7", ",", "\"", " ", "[", "]", "#", "=", " = ",
                                                 "⊗", "*", "-", "F(4,2,1)", "[1,0,3]", "''", ";"};
  const int len = static_cast<int>(rng() % 6) + (allow_empty ? 0 : 1);
  std::string s;
  for (int i = 0; i < len; ++i) s += atoms[rng() % atoms.size()];
  return s;
}

std::string random_key(std::mt19937& rng) {
  static const std::string chars = "abcxyz_019.";
  std::string s(1, "abcxyz"[rng() % 6]);
  for (int i = rng() % 8; i > 0; --i) s += chars[rng() % chars.size()];
  return s;
}

}  // namespace

TEST_CASE("csv fields are quoted only when needed") {
  CHECK(sl3cli::csv_field("17") == "17");
  CHECK(sl3cli::csv_field("*") == "*");
  CHECK(sl3cli::csv_field("[1,0,3]") == "\"[1,0,3]\"");
  CHECK(sl3cli::csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(sl3cli::csv_field("") == "\"\"");
  CHECK(sl3cli::csv_field(" x") == "\" x\"");
}

TEST_CASE("tables round trip") {
  std::mt19937 rng(20261014);
  for (int trial = 0; trial < 500; ++trial) {
    Document d;
    for (int i = rng() % 5; i > 0; --i) d.config.emplace_back(random_key(rng), random_text(rng, true));
    for (int i = rng() % 5; i > 0; --i) d.summary.emplace_back(random_key(rng), random_text(rng, true));
    for (int t = rng() % 4; t > 0; --t) {
      Table tb;
      tb.name = random_key(rng);
      const size_t cols = rng() % 4 + 1;
      for (size_t c = 0; c < cols; ++c) tb.columns.push_back(random_text(rng, false));
      for (int r = rng() % 6; r > 0; --r) {
        std::vector<std::string> row;
        for (size_t c = 0; c < cols; ++c) row.push_back(random_text(rng, true));
        tb.rows.push_back(row);
      }
      d.tables.push_back(tb);
    }
    const std::string text = sl3cli::emit_csv(d);
    const Document back = sl3cli::parse_csv(text);
    REQUIRE_MESSAGE(back == d, text);
    CHECK(sl3cli::emit_csv(back) == text);
  }
}

TEST_CASE("malformed tables are rejected") {
  CHECK_THROWS(sl3cli::parse_csv("[t]\na,b\n1\n"));
  CHECK_THROWS(sl3cli::parse_csv("[t]\n"));
  CHECK_THROWS(sl3cli::parse_csv("[t]\na\n\"open\n"));
  CHECK_THROWS(sl3cli::parse_csv("no separator\n"));
  CHECK_THROWS(sl3cli::emit_csv(Document{{}, {}, {Table{"t", {"a", "b"}, {{"1"}}}}}));
  CHECK_THROWS(sl3cli::emit_csv(Document{{{"k", "two\nlines"}}, {}, {}}));
}

TEST_CASE("usage errors exit with 1") {
  CHECK(run("").code == 1);
  CHECK(run("frobnicate").code == 1);
  CHECK(run("homology --cache-dir none -p 4 -N 1 -w 0,0,0").code == 1);
  CHECK(run("homology --cache-dir none -p 11 -N 22 -w 0,0,0").code == 1);
  CHECK(run("homology --cache-dir none -p 11 -w 0,0,0").code == 1);
  CHECK(run("homology --cache-dir none -p 11 -N 1 -w 12,0,0").code == 1);
  CHECK(run("homology --cache-dir none -p 11 -N 1 -w 0,0,0 --format xml").code == 1);
  CHECK(run("homology --cache-dir none -p 11 -N 1 -w 0,0,0 -e eps6").code == 1);
  const fs::path dir = scratch("usage");
  write(dir / "bad.json", R"({"p": 11, "N": 1, "weight": [0,0,0], "colour": "red"})");
  CHECK(run("homology --cache-dir none -c " + (dir / "bad.json").string()).code == 1);
  write(dir / "broken.json", "{");
  CHECK(run("homology --cache-dir none -c " + (dir / "broken.json").string()).code == 1);
  CHECK(run("predict --cache-dir none").code == 1);
  fs::remove_all(dir);
}

TEST_CASE("homology prints the dimension and echoes every setting") {
  const Run r = run("homology --cache-dir none -p 7 -N 1 -w \"F(0,0,0)\"");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("\ndim = 0\n") != std::string::npos);
  const Document d = sl3cli::parse_csv(r.out);
  for (const char* key : {"p", "N", "weight", "nebentype", "ell_max", "restart_percent", "row_block", "resident_rows",
                          "cache_dir", "format", "workers"})
    CHECK_MESSAGE(config_value(d, key) != "<missing>", key);
  CHECK(config_value(d, "ell_max") == "47");
  CHECK(config_value(d, "restart_percent") == "2.0");
  CHECK(config_value(d, "workers") == "1");
  CHECK(table(d, "distinguished").rows.empty());
}

TEST_CASE("config file, environment and flags") {
  const fs::path dir = scratch("config");
  write(dir / "run.json", R"({"p": 7, "N": 1, "weight": [0,0,0], "ell_max": 11, "cache_dir": "from-config"})");
  const std::string cfg = "-c " + (dir / "run.json").string();
  Document d = sl3cli::parse_csv(run("homology " + cfg).out);
  CHECK(config_value(d, "cache_dir") == (dir / "from-config").string());
  CHECK(fs::exists(dir / "from-config" / "homology"));
  CHECK(config_value(d, "ell_max") == "11");
  CHECK(summary_value(d, "dim") == "0");
  const std::string env = "SL3HECKE_CACHE_DIR=" + (dir / "env").string();
  d = sl3cli::parse_csv(run("homology " + cfg, env).out);
  CHECK(config_value(d, "cache_dir") == (dir / "env").string());
  d = sl3cli::parse_csv(run("homology " + cfg + " --cache-dir " + (dir / "flag").string(), env).out);
  CHECK(config_value(d, "cache_dir") == (dir / "flag").string());
  CHECK(fs::exists(dir / "flag" / "homology"));
  fs::remove_all(dir);
}

TEST_CASE("hecke tables are reproducible") {
  const fs::path dir = scratch("hecke");
  const std::string space = "hecke -p 37 -N 4 -w 16,0,0 --ell-max 7";
  const std::string base = space + " --cache-dir " + (dir / "cache").string();
  const std::string out1 = (dir / "cold.csv").string(), out2 = (dir / "warm.csv").string();
  REQUIRE(run(base + " -o " + out1).code == 0);
  REQUIRE(run(base + " -o " + out2).code == 0);
  std::ifstream a(out1), b(out2);
  std::stringstream sa, sb;
  sa << a.rdbuf();
  sb << b.rdbuf();
  CHECK(sa.str() == sb.str());  // warm cache, byte for byte

  const Document cold = sl3cli::parse_csv(sa.str());
  CHECK(summary_value(cold, "dim") == "15");
  const Table& vals = table(cold, "eigenvalues");
  REQUIRE(!vals.rows.empty());
  for (const auto& row : vals.rows) {
    const bool bad = row[1] == "2" || row[1] == "37";
    CHECK((row[2] == "*") == bad);
    CHECK((row[3] == "*") == bad);
  }

  // Worker count changes the echoed setting only.
  const Run threaded = run(space + " -j 3 --cache-dir " + (dir / "cache3").string());
  REQUIRE(threaded.code == 0);
  const Document t = sl3cli::parse_csv(threaded.out);
  CHECK(config_value(t, "workers") == "3");
  CHECK(t.summary == cold.summary);
  CHECK(t.tables == cold.tables);

  const Run js = run(base + " --format json");
  REQUIRE(js.code == 0);
  const json j = json::parse(js.out);
  CHECK(j["hecke"]["dim"] == 15);
  CHECK(j["config"]["format"] == "json");

  const Document listed = sl3cli::parse_csv(run("cache list --cache-dir " + (dir / "cache").string()).out);
  CHECK(table(listed, "cache").rows.size() == 7);  // one basis, T(3,k), T(5,k), T(7,k)
  const Document cleared = sl3cli::parse_csv(run("cache clear --cache-dir " + (dir / "cache").string()).out);
  CHECK(summary_value(cleared, "removed") == "7");
  fs::remove_all(dir);
}

TEST_CASE("prediction reports a parity failure without weights") {
  const fs::path dir = scratch("parity");
  write(dir / "rep.json", R"({
    "name": "even", "p": 7, "construction": "local",
    "inertia": {"blocks": [{"d": 1, "m": 0, "positions": [1]}, {"d": 1, "m": 1, "positions": [2]},
                           {"d": 1, "m": 2, "positions": [3]}]},
    "levis": ["1|2|3"], "conjugation": [1, 1, 1],
    "ramification": {"primes": [{"q": 5, "inertia_order": 2, "fixed_dim": 2}], "det_eps": "eps5"}})");
  const Run r = run("predict --cache-dir none -r " + (dir / "rep.json").string());
  REQUIRE(r.code == 0);
  const Document d = sl3cli::parse_csv(r.out);
  CHECK(summary_value(d, "parity") == "fails");
  CHECK(summary_value(d, "parity_reason").find("fails") != std::string::npos);
  CHECK(summary_value(d, "level") == "5");
  CHECK(table(d, "weights").rows.empty());
  fs::remove_all(dir);
}

TEST_CASE("match passes end to end and the wrong twist fails") {
  const fs::path dir = scratch("match");
  const std::string rep = std::string(SL3_DATA_DIR) + "/reps/s3_p37_level4.json";
  const std::string base = "match --ell-max 7 -r " + rep + " --cache-dir " + (dir / "cache").string();
  const Run ok = run(base);
  REQUIRE(ok.code == 0);
  Document d = sl3cli::parse_csv(ok.out);
  CHECK(summary_value(d, "verdict") == "PASS");
  CHECK(summary_value(d, "weight") == "F(16,0,0)");
  CHECK(summary_value(d, "level") == "4");

  const Run bad = run(base + " -w 17,1,1");
  CHECK(bad.code == 3);
  d = sl3cli::parse_csv(bad.out);
  CHECK(summary_value(d, "verdict") == "FAIL");
  CHECK(summary_value(d, "first_mismatch") == "3");
  fs::remove_all(dir);
}
