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

// sl3hecke command line tool.  Talks to the library only through the C API.

#include <array>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "sl3hecke/sl3hecke.h"
#include "table.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitComputation = 2;
constexpr int kExitMatchFailure = 3;
constexpr const char* kCacheEnv = "SL3HECKE_CACHE_DIR";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Library failure carrying its status.
struct ApiError : std::runtime_error {
  sl3_status status;
  ApiError(sl3_status s, const std::string& what) : std::runtime_error(what), status(s) {}
};

void check(sl3_status s, const char* what) {
  if (s != SL3_OK) throw ApiError(s, std::string(what) + ": " + sl3_last_error());
}

std::string take(char* s) {
  std::string out = s ? s : "";
  sl3_string_free(s);
  return out;
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Homology = std::unique_ptr<sl3_homology, Deleter<sl3_homology, sl3_homology_free>>;
using Eigen = std::unique_ptr<sl3_eigensystems, Deleter<sl3_eigensystems, sl3_eigensystems_free>>;
using Rep = std::unique_ptr<sl3_rep, Deleter<sl3_rep, sl3_rep_free>>;

// ---------------------------------------------------------------------------
// Run configuration: config file, then environment, then flags.

struct RunConfig {
  unsigned p = 0;
  unsigned N = 0;  // 0: not given
  std::string weight;
  std::string nebentype;
  unsigned ell_max = 47;
  double restart_percent = 2.0;
  size_t row_block = 1000;
  size_t resident_rows = 0;
  std::string cache_dir;
  std::string format = "csv";
  unsigned workers = 1;
  json rep;  // inline representation spec, or null
  std::string rep_path;
  std::string output;
  bool verbose = false;
};

struct Flags {
  std::string config;
  std::optional<unsigned> p, N, ell_max, workers;
  std::optional<std::string> weight, nebentype, cache_dir, format, rep, output;
  std::optional<double> restart_percent;
  std::optional<size_t> row_block, resident_rows;
  bool verbose = false;
};

std::string default_cache_dir() {
  if (const char* x = std::getenv("XDG_CACHE_HOME"); x && *x) return std::string(x) + "/sl3hecke";
  if (const char* h = std::getenv("HOME"); h && *h) return std::string(h) + "/.cache/sl3hecke";
  return ".sl3hecke-cache";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string weight_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array() && v.size() == 3) {
    std::string s;
    for (size_t i = 0; i < 3; ++i) s += (i ? "," : "") + std::to_string(v[i].get<int>());
    return s;
  }
  throw UsageError("weight must be a string or a list of three integers");
}

RunConfig resolve(const Flags& f) {
  RunConfig c;
  c.cache_dir = default_cache_dir();
  if (!f.config.empty()) {
    json j;
    try {
      j = json::parse(read_file(f.config));
    } catch (const json::exception& e) {
      throw UsageError("config " + f.config + ": " + e.what());
    }
    if (!j.is_object()) throw UsageError("config must be a JSON object");
    static const std::set<std::string> known = {"p", "N", "weight", "nebentype", "ell_max", "restart_percent",
                                                "row_block", "resident_rows", "cache_dir", "format", "workers",
                                                "rep"};
    for (const auto& [k, v] : j.items())
      if (!known.count(k)) throw UsageError("unknown config key '" + k + "'");
    try {
      if (j.contains("p")) c.p = j["p"].get<unsigned>();
      if (j.contains("N")) c.N = j["N"].get<unsigned>();
      if (j.contains("weight")) c.weight = weight_text(j["weight"]);
      if (j.contains("nebentype")) c.nebentype = j["nebentype"].get<std::string>();
      if (j.contains("ell_max")) c.ell_max = j["ell_max"].get<unsigned>();
      if (j.contains("restart_percent")) c.restart_percent = j["restart_percent"].get<double>();
      if (j.contains("row_block")) c.row_block = j["row_block"].get<size_t>();
      if (j.contains("resident_rows")) c.resident_rows = j["resident_rows"].get<size_t>();
      if (j.contains("cache_dir")) {
        fs::path cp = j["cache_dir"].get<std::string>();
        if (cp.is_relative() && cp != "none") cp = fs::path(f.config).parent_path() / cp;
        c.cache_dir = cp.string();
      }
      if (j.contains("format")) c.format = j["format"].get<std::string>();
      if (j.contains("workers")) c.workers = j["workers"].get<unsigned>();
      if (j.contains("rep")) {
        if (j["rep"].is_string()) {
          fs::path rp = j["rep"].get<std::string>();
          if (rp.is_relative()) rp = fs::path(f.config).parent_path() / rp;
          c.rep_path = rp.string();
        } else {
          c.rep = j["rep"];
        }
      }
    } catch (const json::exception& e) {
      throw UsageError("config " + f.config + ": " + e.what());
    }
  }
  if (const char* env = std::getenv(kCacheEnv); env && *env) c.cache_dir = env;
  if (f.p) c.p = *f.p;
  if (f.N) c.N = *f.N;
  if (f.weight) c.weight = *f.weight;
  if (f.nebentype) c.nebentype = *f.nebentype;
  if (f.ell_max) c.ell_max = *f.ell_max;
  if (f.restart_percent) c.restart_percent = *f.restart_percent;
  if (f.row_block) c.row_block = *f.row_block;
  if (f.resident_rows) c.resident_rows = *f.resident_rows;
  if (f.cache_dir) c.cache_dir = *f.cache_dir;
  if (f.format) c.format = *f.format;
  if (f.workers) c.workers = *f.workers;
  if (f.rep) {
    c.rep_path = *f.rep;
    c.rep = nullptr;
  }
  if (f.output) c.output = *f.output;
  c.verbose = f.verbose;
  if (c.format != "csv" && c.format != "json") throw UsageError("format must be csv or json");
  if (c.workers == 0) throw UsageError("workers must be positive");
  if (c.row_block == 0) throw UsageError("row_block must be positive");
  if (c.ell_max < 2) throw UsageError("ell_max must be at least 2");
  if (c.cache_dir == "none") c.cache_dir.clear();
  return c;
}

bool is_prime(unsigned n) {
  if (n < 2) return false;
  for (unsigned d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

unsigned gcd(unsigned a, unsigned b) { return b ? gcd(b, a % b) : a; }

// Checks the space parameters; returns the normalized weight.
std::array<int, 3> space_params(const RunConfig& c) {
  if (c.p == 0) throw UsageError("p is required");
  if (c.p <= 3 || !is_prime(c.p)) throw UsageError("p must be a prime greater than 3");
  if (c.N == 0) throw UsageError("N is required");
  if (gcd(c.N, c.p) != 1) throw UsageError("N must be prime to p");
  if (c.weight.empty()) throw UsageError("weight is required");
  std::array<int, 3> w{};
  if (sl3_weight_parse(c.weight.c_str(), c.p, w.data()) != SL3_OK) throw UsageError(sl3_last_error());
  const int q = static_cast<int>(c.p) - 1;
  if (w[0] - w[1] < 0 || w[0] - w[1] > q || w[1] - w[2] < 0 || w[1] - w[2] > q)
    throw UsageError("weight " + c.weight + " is not p-restricted");
  return w;
}

std::string weight_label(const std::array<int, 3>& w) {
  return "F(" + std::to_string(w[0]) + "," + std::to_string(w[1]) + "," + std::to_string(w[2]) + ")";
}

std::string num(double x) { return json(x).dump(); }

sl3cli::KeyValues echo(const RunConfig& c, const std::string& command) {
  sl3cli::KeyValues kv = {{"tool", std::string("sl3hecke ") + sl3_version()}, {"command", command}};
  kv.emplace_back("p", c.p ? std::to_string(c.p) : "-");
  kv.emplace_back("N", c.N ? std::to_string(c.N) : "-");
  kv.emplace_back("weight", c.weight.empty() ? "-" : c.weight);
  kv.emplace_back("nebentype", c.nebentype.empty() ? "trivial" : c.nebentype);
  kv.emplace_back("ell_max", std::to_string(c.ell_max));
  kv.emplace_back("restart_percent", num(c.restart_percent));
  kv.emplace_back("row_block", std::to_string(c.row_block));
  kv.emplace_back("resident_rows", std::to_string(c.resident_rows));
  kv.emplace_back("cache_dir", c.cache_dir.empty() ? "none" : c.cache_dir);
  kv.emplace_back("format", c.format);
  kv.emplace_back("workers", std::to_string(c.workers));
  if (!c.rep_path.empty()) kv.emplace_back("rep", c.rep_path);
  return kv;
}

json echo_json(const sl3cli::KeyValues& kv) {
  json j = json::object();
  for (const auto& [k, v] : kv) j[k] = v;
  return j;
}

void log_stderr(const char* msg, void*) { std::cerr << "[sl3hecke] " << msg << '\n'; }

void emit(const RunConfig& c, const std::string& text) {
  if (c.output.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  const std::string tmp = c.output + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw UsageError("cannot write " + c.output);
    out << text;
    if (!out) throw UsageError("short write to " + c.output);
  }
  fs::rename(tmp, c.output);
}

void emit_doc(const RunConfig& c, const sl3cli::Document& d, const json& result) {
  if (c.format == "json") {
    json j = result;
    j["config"] = echo_json(d.config);
    emit(c, j.dump(2) + "\n");
  } else {
    emit(c, sl3cli::emit_csv(d));
  }
}

std::string str(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "yes" : "no";
  return v.dump();
}

std::string join(const json& arr, const char* sep) {
  std::string out;
  for (size_t i = 0; i < arr.size(); ++i) out += (i ? sep : "") + str(arr[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Stages.

Homology compute_homology(const RunConfig& c, const std::array<int, 3>& w) {
  sl3_homology_options o;
  sl3_homology_options_init(&o);
  o.p = c.p;
  o.N = c.N;
  o.weight[0] = w[0];
  o.weight[1] = w[1];
  o.weight[2] = w[2];
  o.nebentype = c.nebentype.empty() ? "trivial" : c.nebentype.c_str();
  o.restart_percent = c.restart_percent;
  o.row_block = c.row_block;
  o.resident_rows = c.resident_rows;
  o.cache_dir = c.cache_dir.c_str();
  o.workers = c.workers;
  if (c.verbose) o.log = log_stderr;
  sl3_homology* h = nullptr;
  check(sl3_homology_compute(&o, &h), "homology");
  return Homology(h);
}

Eigen compute_eigen(const RunConfig& c, const sl3_homology* h) {
  sl3_eigensystems* e = nullptr;
  check(sl3_eigensystems_compute(h, c.ell_max, c.cache_dir.c_str(), c.verbose ? log_stderr : nullptr, nullptr, &e),
        "eigensystems");
  return Eigen(e);
}

Rep load_rep(const RunConfig& c) {
  std::string text;
  if (!c.rep_path.empty()) {
    text = read_file(c.rep_path);
  } else if (!c.rep.is_null()) {
    text = c.rep.dump();
  } else {
    throw UsageError("a representation spec is required (--rep or config key 'rep')");
  }
  sl3_rep* r = nullptr;
  check(sl3_rep_parse(text.c_str(), &r), "representation");
  return Rep(r);
}

json homology_summary(const sl3_homology* h) {
  char* s = nullptr;
  check(sl3_homology_json(h, &s), "homology summary");
  return json::parse(take(s));
}

void add_eigen_tables(const json& ej, sl3cli::Document& d) {
  sl3cli::Table sys{"systems", {"system", "degree", "field", "multiplicity", "conjugate", "fallback"}, {}};
  sl3cli::Table vals{"eigenvalues", {"system", "ell", "a1", "a2"}, {}};
  for (const auto& s : ej["systems"]) {
    const std::string idx = str(s["index"]);
    sys.rows.push_back({idx, str(s["degree"]), str(s["field"]), str(s["multiplicity"]), str(s["conjugate"]),
                        str(s["fallback"])});
    for (const auto& r : s["values"]) vals.rows.push_back({idx, str(r["ell"]), str(r["a1"]), str(r["a2"])});
  }
  d.tables.push_back(std::move(sys));
  d.tables.push_back(std::move(vals));
}

// ---------------------------------------------------------------------------
// Commands.

int cmd_homology(const RunConfig& c) {
  const auto w = space_params(c);
  Homology h = compute_homology(c, w);
  const json hj = homology_summary(h.get());
  sl3cli::Document d;
  d.config = echo(c, "homology");
  d.summary = {{"dim", str(hj["dim"])}, {"module_dim", str(hj["module_dim"])}, {"weight", weight_label(w)}};
  sl3cli::Table t{"distinguished", {"basis", "coordinate"}, {}};
  for (size_t i = 0; i < hj["distinguished"].size(); ++i)
    t.rows.push_back({std::to_string(i), str(hj["distinguished"][i])});
  d.tables.push_back(std::move(t));
  emit_doc(c, d, json{{"homology", hj}});
  return kExitOk;
}

int cmd_hecke(const RunConfig& c) {
  const auto w = space_params(c);
  Homology h = compute_homology(c, w);
  if (sl3_homology_dim(h.get()) == 0) std::cerr << "warning: the homology space is zero; the table is empty\n";
  Eigen e = compute_eigen(c, h.get());
  char* s = nullptr;
  check(sl3_eigensystems_json(e.get(), &s), "eigensystem table");
  const json ej = json::parse(take(s));
  sl3cli::Document d;
  d.config = echo(c, "hecke");
  d.summary = {{"dim", str(ej["dim"])}, {"systems", std::to_string(ej["systems"].size())}};
  add_eigen_tables(ej, d);
  emit_doc(c, d, json{{"hecke", ej}});
  return kExitOk;
}

sl3cli::Document prediction_doc(const RunConfig& c, const json& pj) {
  sl3cli::Document d;
  d.config = echo(c, "predict");
  d.summary = {{"name", str(pj["name"])},
               {"level", str(pj["level"])},
               {"nebentype", str(pj["nebentype"])},
               {"parity", pj["parity"]["ok"].get<bool>() ? "ok" : "fails"},
               {"parity_reason", str(pj["parity"]["reason"])}};
  for (const auto& [ell, cls] : pj["fixture_classes"].items())
    d.summary.emplace_back("fixture", "class " + str(cls) + " for Frob" + ell);
  if (pj["frobenius"].is_null()) d.summary.emplace_back("frobenius", str(pj["frobenius_note"]));
  sl3cli::Table wt{"weights", {"label", "display", "candidates", "levi"}, {}};
  for (const auto& x : pj["weights"])
    wt.rows.push_back({str(x["label"]), str(x["display"]), join(x["candidates"], " "), str(x["levi"])});
  d.tables.push_back(std::move(wt));
  sl3cli::Table ft{"frobenius", {"branch", "field", "ell", "order", "cycle_type", "class", "c1", "c2", "c3"}, {}};
  if (pj["frobenius"].is_array())
    for (const auto& b : pj["frobenius"])
      for (const auto& e : b["entries"])
        for (const auto& k : e["candidates"])
          ft.rows.push_back({str(b["branch"]), str(b["field"]), str(e["ell"]), str(e["order"]),
                             join(e["cycle_type"], " "), str(k["class"]), str(k["c1"]), str(k["c2"]), str(k["c3"])});
  d.tables.push_back(std::move(ft));
  return d;
}

json predict_json(const RunConfig& c, const sl3_rep* r) {
  char* s = nullptr;
  check(sl3_predict_json(r, c.ell_max, &s), "prediction");
  return json::parse(take(s));
}

int cmd_predict(const RunConfig& c) {
  Rep r = load_rep(c);
  const json pj = predict_json(c, r.get());
  emit_doc(c, prediction_doc(c, pj), json{{"prediction", pj}});
  return kExitOk;
}

int cmd_match(RunConfig c) {
  Rep r = load_rep(c);
  const json pj = predict_json(c, r.get());
  // Unset space parameters come from the prediction.
  if (c.p == 0) c.p = pj["p"].get<unsigned>();
  if (c.N == 0) c.N = pj["level"].get<unsigned>();
  if (c.nebentype.empty()) c.nebentype = pj["nebentype"].get<std::string>();
  if (c.weight.empty()) {
    if (pj["weights"].empty()) throw UsageError("no weight given and none predicted: " + str(pj["parity"]["reason"]));
    c.weight = pj["weights"][0]["candidates"][0].get<std::string>();  // smallest candidate
  }
  const auto w = space_params(c);
  Homology h = compute_homology(c, w);
  if (sl3_homology_dim(h.get()) == 0) throw ApiError(SL3_ERR_COMPUTATION, "the homology space is zero");
  Eigen e = compute_eigen(c, h.get());
  char* s = nullptr;
  int passed = 0;
  check(sl3_match_json(r.get(), e.get(), &s, &passed), "match");
  const json mj = json::parse(take(s));

  sl3cli::Document d;
  d.config = echo(c, "match");
  d.summary = {{"verdict", passed ? "PASS" : "FAIL"},
               {"representation", str(mj["representation"])},
               {"weight", weight_label(w)},
               {"level", str(mj["N"])},
               {"nebentype", str(mj["eps"])},
               {"matched", mj["matched"].empty() ? "none" : join(mj["matched"], " ")}};
  unsigned first = 0;
  for (const auto& note : mj["ambiguity"]) d.summary.emplace_back("ambiguity", str(note));
  sl3cli::Table st{"systems", {"system", "pass", "branch", "first_failure"}, {}};
  sl3cli::Table rt{"rows", {"system", "ell", "pass", "a1", "a2", "c1", "c2", "class", "candidates"}, {}};
  for (const auto& m : mj["systems"]) {
    const std::string idx = str(m["eigensystem"]);
    const unsigned ff = m["first_failure"].get<unsigned>();
    if (!m["pass"].get<bool>() && ff > first) first = ff;
    st.rows.push_back({idx, str(m["pass"]), str(m["branch"]), ff ? std::to_string(ff) : "-"});
    for (const auto& x : m["rows"])
      rt.rows.push_back({idx, str(x["ell"]), str(x["pass"]), str(x["a1"]), str(x["a2"]), str(x["c1"]), str(x["c2"]),
                         str(x["class"]), str(x["candidates"])});
  }
  if (!passed) d.summary.emplace_back("first_mismatch", first ? std::to_string(first) : "-");
  d.tables.push_back(std::move(st));
  d.tables.push_back(std::move(rt));
  emit_doc(c, d, json{{"match", mj}});
  if (!passed) {
    std::cerr << "match FAILED";
    if (first) std::cerr << ": first mismatching ell = " << first;
    std::cerr << '\n';
    return kExitMatchFailure;
  }
  return kExitOk;
}

int cmd_cache_list(const RunConfig& c) {
  if (c.cache_dir.empty()) throw UsageError("no cache directory configured");
  char* s = nullptr;
  check(sl3_cache_list(c.cache_dir.c_str(), &s), "cache list");
  const json j = json::parse(take(s));
  sl3cli::Document d;
  d.config = echo(c, "cache list");
  d.summary = {{"entries", std::to_string(j["entries"].size())}};
  sl3cli::Table t{"cache", {"kind", "file", "bytes"}, {}};
  for (const auto& e : j["entries"]) t.rows.push_back({str(e["kind"]), str(e["file"]), str(e["bytes"])});
  d.tables.push_back(std::move(t));
  emit_doc(c, d, json{{"cache", j}});
  return kExitOk;
}

int cmd_cache_clear(const RunConfig& c) {
  if (c.cache_dir.empty()) throw UsageError("no cache directory configured");
  size_t removed = 0;
  check(sl3_cache_clear(c.cache_dir.c_str(), &removed), "cache clear");
  sl3cli::Document d;
  d.config = echo(c, "cache clear");
  d.summary = {{"removed", std::to_string(removed)}};
  emit_doc(c, d, json{{"removed", removed}});
  return kExitOk;
}

int cmd_selftest(const RunConfig& c) {
  char* s = nullptr;
  int failures = 0;
  check(sl3_selftest(&s, &failures), "selftest");
  const json j = json::parse(take(s));
  sl3cli::Document d;
  d.config = echo(c, "selftest");
  d.summary = {{"failures", std::to_string(failures)}};
  sl3cli::Table t{"checks", {"name", "ok", "detail"}, {}};
  for (const auto& x : j["checks"]) t.rows.push_back({str(x["name"]), str(x["ok"]), str(x["detail"])});
  d.tables.push_back(std::move(t));
  emit_doc(c, d, j);
  return failures ? kExitComputation : kExitOk;
}

void add_common(CLI::App* app, Flags& f) {
  app->add_option("-c,--config", f.config, "JSON run configuration")->check(CLI::ExistingFile);
  app->add_option("--cache-dir", f.cache_dir, std::string("cache directory, 'none' to disable (env ") + kCacheEnv + ")");
  app->add_option("--format", f.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  app->add_option("-o,--output", f.output, "write to this file instead of stdout");
  app->add_flag("-v,--verbose", f.verbose, "progress messages on stderr");
  app->add_option("--ell-max", f.ell_max, "largest Hecke prime (default 47)");
}

void add_space(CLI::App* app, Flags& f) {
  app->add_option("-p,--p", f.p, "characteristic, a prime > 3");
  app->add_option("-N,--level", f.N, "level N, prime to p");
  app->add_option("-w,--weight", f.weight, "F(a,b,c), F(a,b,c)⊗det^s or a,b,c");
  app->add_option("-e,--nebentype", f.nebentype, "trivial, eps<q> or products eps3*eps13");
  app->add_option("--restart-percent", f.restart_percent, "restart after this share of rows; negative disables");
  app->add_option("--row-block", f.row_block, "rows per streamed batch");
  app->add_option("--resident-rows", f.resident_rows, "echelon rows kept in memory; 0: no spilling");
  app->add_option("-j,--workers", f.workers, "threads");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mod p homology of Gamma_0(N) in SL3(Z), Hecke eigensystems and Galois predictions"};
  app.set_version_flag("--version", std::string(sl3_version()));
  app.require_subcommand(1);
  Flags f;
  std::function<int(const RunConfig&)> run;

  auto* homology = app.add_subcommand("homology", "dimension and distinguished coordinates");
  add_common(homology, f);
  add_space(homology, f);
  homology->callback([&] { run = cmd_homology; });

  auto* hecke = app.add_subcommand("hecke", "eigenvalue table of T(ell,1), T(ell,2)");
  add_common(hecke, f);
  add_space(hecke, f);
  hecke->callback([&] { run = cmd_hecke; });

  auto* predict = app.add_subcommand("predict", "weights, level and Frobenius data of a representation");
  add_common(predict, f);
  predict->add_option("-r,--rep", f.rep, "representation spec (JSON)")->check(CLI::ExistingFile);
  predict->callback([&] { run = cmd_predict; });

  auto* matchc = app.add_subcommand("match", "predict, compute and compare; exit 3 on mismatch");
  add_common(matchc, f);
  add_space(matchc, f);
  matchc->add_option("-r,--rep", f.rep, "representation spec (JSON)")->check(CLI::ExistingFile);
  matchc->callback([&] { run = cmd_match; });

  auto* cache = app.add_subcommand("cache", "inspect or clear the cache");
  cache->require_subcommand(1);
  auto* clist = cache->add_subcommand("list", "list cached files");
  add_common(clist, f);
  clist->callback([&] { run = cmd_cache_list; });
  auto* cclear = cache->add_subcommand("clear", "delete cached files");
  add_common(cclear, f);
  cclear->callback([&] { run = cmd_cache_clear; });

  auto* selftest = app.add_subcommand("selftest", "built-in invariant checks");
  add_common(selftest, f);
  selftest->callback([&] { run = cmd_selftest; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }
  try {
    return run(resolve(f));
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ApiError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.status == SL3_ERR_INVALID_ARGUMENT ? kExitUsage : kExitComputation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitComputation;
  }
}
