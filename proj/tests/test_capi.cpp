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

// Exercises the shared library through its C header only.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "sl3hecke/sl3hecke.h"

using nlohmann::json;

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  sl3_string_free(s);
  return out;
}

std::string read_rep(const std::string& name) {
  std::ifstream in(std::string(SL3_DATA_DIR) + "/reps/" + name + ".json");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

sl3_homology* homology(unsigned p, unsigned N, int a, int b, int c, const char* eps, const char* cache = nullptr) {
  sl3_homology_options o;
  sl3_homology_options_init(&o);
  o.p = p;
  o.N = N;
  o.weight[0] = a;
  o.weight[1] = b;
  o.weight[2] = c;
  o.nebentype = eps;
  o.cache_dir = cache;
  sl3_homology* h = nullptr;
  REQUIRE(sl3_homology_compute(&o, &h) == SL3_OK);
  return h;
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::strlen(sl3_version()) > 0);
  CHECK(std::string(sl3_status_name(SL3_OK)) == "ok");
  CHECK(std::string(sl3_status_name(SL3_ERR_UNSUPPORTED)) == "unsupported");
}

TEST_CASE("defaults") {
  sl3_homology_options o;
  sl3_homology_options_init(&o);
  CHECK(o.restart_percent == doctest::Approx(2.0));
  CHECK(o.row_block == 1000);
  CHECK(o.resident_rows == 0);
  CHECK(o.workers == 1);
  CHECK(std::string(o.nebentype) == "trivial");
}

TEST_CASE("errors are reported with a status and a message") {
  sl3_homology_options o;
  sl3_homology_options_init(&o);
  o.p = 3;
  o.N = 1;
  sl3_homology* h = reinterpret_cast<sl3_homology*>(1);
  CHECK(sl3_homology_compute(&o, &h) == SL3_ERR_UNSUPPORTED);
  CHECK(h == nullptr);
  CHECK(std::string(sl3_last_error()).find("p > 3") != std::string::npos);

  o.p = 11;
  o.N = 22;
  CHECK(sl3_homology_compute(&o, &h) == SL3_ERR_INVALID_ARGUMENT);
  o.N = 1;
  o.weight[0] = 0;
  o.weight[1] = 1;
  CHECK(sl3_homology_compute(&o, &h) == SL3_ERR_INVALID_ARGUMENT);
  o.weight[1] = 0;
  o.nebentype = "eps6";
  CHECK(sl3_homology_compute(&o, &h) == SL3_ERR_INVALID_ARGUMENT);

  CHECK(sl3_homology_compute(nullptr, &h) == SL3_ERR_INVALID_ARGUMENT);
  CHECK(sl3_homology_json(nullptr, nullptr) == SL3_ERR_INVALID_ARGUMENT);
  sl3_rep* r = nullptr;
  CHECK(sl3_rep_parse("{not json", &r) == SL3_ERR_INVALID_ARGUMENT);
  CHECK(r == nullptr);
  CHECK(sl3_rep_parse(R"({"p": 11, "construction": "irreducible", "group": "Q8"})", &r) ==
        SL3_ERR_INVALID_ARGUMENT);

  // The previous message does not leak into a successful call.
  char* s = nullptr;
  int failures = -1;
  REQUIRE(sl3_selftest(&s, &failures) == SL3_OK);
  CHECK(std::string(sl3_last_error()).empty());
  CHECK(failures == 0);
  CHECK(json::parse(take(s))["checks"].size() >= 5);

  sl3_homology_free(nullptr);
  sl3_eigensystems_free(nullptr);
  sl3_rep_free(nullptr);
  sl3_string_free(nullptr);
}

TEST_CASE("weights are normalized") {
  int w[3];
  REQUIRE(sl3_weight_parse("F(4,2,1)", 11, w) == SL3_OK);
  CHECK((w[0] == 4 && w[1] == 2 && w[2] == 1));
  REQUIRE(sl3_weight_parse("F(3,2,0)⊗det^6", 11, w) == SL3_OK);
  CHECK((w[0] == 9 && w[1] == 8 && w[2] == 6));
  REQUIRE(sl3_weight_parse("16,0,0", 37, w) == SL3_OK);
  CHECK((w[0] == 16 && w[1] == 0 && w[2] == 0));
  REQUIRE(sl3_weight_parse("F(4,2,1)⊗det^9", 11, w) == SL3_OK);
  CHECK((w[0] == 3 && w[1] == 1 && w[2] == 0));
  CHECK(sl3_weight_parse("G(1,2,3)", 11, w) == SL3_ERR_INVALID_ARGUMENT);
}

TEST_CASE("trivial homology") {
  sl3_homology* h = homology(7, 1, 0, 0, 0, "trivial");
  CHECK(sl3_homology_dim(h) == 0);
  sl3_eigensystems* e = nullptr;
  REQUIRE(sl3_eigensystems_compute(h, 47, nullptr, nullptr, nullptr, &e) == SL3_OK);
  CHECK(sl3_eigensystems_count(e) == 0);
  char* s = nullptr;
  REQUIRE(sl3_eigensystems_json(e, &s) == SL3_OK);
  CHECK(json::parse(take(s))["systems"].empty());
  sl3_eigensystems_free(e);
  sl3_homology_free(h);
}

TEST_CASE("eigensystems, predictions and matching through the C interface") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "sl3_test_capi_cache";
  fs::remove_all(dir);
  sl3_homology* h = homology(37, 4, 16, 0, 0, "trivial", dir.c_str());
  CHECK(sl3_homology_dim(h) == 15);
  char* s = nullptr;
  REQUIRE(sl3_homology_json(h, &s) == SL3_OK);
  const json hj = json::parse(take(s));
  CHECK(hj["dim"] == 15);
  CHECK(hj["distinguished"].size() == 15);

  sl3_eigensystems* e = nullptr;
  REQUIRE(sl3_eigensystems_compute(h, 11, dir.c_str(), nullptr, nullptr, &e) == SL3_OK);
  REQUIRE(sl3_eigensystems_json(e, &s) == SL3_OK);
  const json ej = json::parse(take(s));
  size_t total = 0;
  for (const auto& sys : ej["systems"]) {
    total += sys["multiplicity"].get<size_t>() * sys["degree"].get<size_t>();
    REQUIRE(sys["values"].size() == 5);  // 2, 3, 5, 7, 11
    CHECK(sys["values"][0]["ell"] == 2);
    CHECK(sys["values"][0]["a1"] == "*");
    CHECK(sys["values"][1]["a1"] != "*");
  }
  // Joint eigenspaces need not fill a space on which the operators are not semisimple.
  CHECK(total <= 15);
  CHECK(!ej["systems"].empty());

  const std::string spec = read_rep("s3_p37_level4");
  sl3_rep* r = nullptr;
  REQUIRE(sl3_rep_parse(spec.c_str(), &r) == SL3_OK);
  REQUIRE(sl3_predict_json(r, 11, &s) == SL3_OK);
  const json pj = json::parse(take(s));
  CHECK(pj["level"] == 4);
  CHECK(pj["nebentype"] == "trivial");
  REQUIRE(pj["weights"].size() == 1);
  CHECK(pj["weights"][0]["candidates"][0] == "F(16,0,0)");

  int passed = -1;
  REQUIRE(sl3_match_json(r, e, &s, &passed) == SL3_OK);
  const json mj = json::parse(take(s));
  CHECK(passed == 1);
  CHECK(mj["matched"].size() == 1);

  REQUIRE(sl3_cache_list(dir.c_str(), &s) == SL3_OK);
  const json cj = json::parse(take(s));
  size_t homology_files = 0, symbol_files = 0;
  for (const auto& x : cj["entries"]) (x["kind"] == "homology" ? homology_files : symbol_files)++;
  CHECK(homology_files == 1);
  CHECK(symbol_files == 8);  // T(ell,1), T(ell,2) for ell = 3, 5, 7, 11
  size_t removed = 0;
  REQUIRE(sl3_cache_clear(dir.c_str(), &removed) == SL3_OK);
  CHECK(removed == 9);

  sl3_rep_free(r);
  sl3_eigensystems_free(e);
  sl3_homology_free(h);
  fs::remove_all(dir);
}

TEST_CASE("a representation with no global description predicts weights only") {
  sl3_rep* r = nullptr;
  REQUIRE(sl3_rep_parse(read_rep("psl27_p7_wild").c_str(), &r) == SL3_OK);
  char* s = nullptr;
  REQUIRE(sl3_predict_json(r, 47, &s) == SL3_OK);
  const json pj = json::parse(take(s));
  CHECK(pj["frobenius"].is_null());
  CHECK(!pj["weights"].empty());
  CHECK(pj["level"] == 17);
  sl3_rep_free(r);
}
