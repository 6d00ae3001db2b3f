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

#include "sl3hecke/sl3hecke.h"

#include <cblas.h>

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <optional>

#include "cache.hpp"
#include "report.hpp"
#include "selftest.hpp"

#ifndef SL3_VERSION
#define SL3_VERSION "0.0.0"
#endif

using nlohmann::json;

struct sl3_homology {
  sl3::HomologySpace space;
};

struct sl3_eigensystems {
  sl3::HomologySpace space;
  unsigned ell_max = 47;
  std::vector<sl3::EigenSystem> systems;
};

struct sl3_rep {
  sl3::GaloisRepSpec spec;
};

namespace {

thread_local std::string g_error;

sl3_status status_of(sl3::ErrorKind k) {
  switch (k) {
    case sl3::ErrorKind::InvalidArgument: return SL3_ERR_INVALID_ARGUMENT;
    case sl3::ErrorKind::DivisionByZero: return SL3_ERR_DIVISION_BY_ZERO;
    case sl3::ErrorKind::Unsupported: return SL3_ERR_UNSUPPORTED;
    case sl3::ErrorKind::Computation: return SL3_ERR_COMPUTATION;
    case sl3::ErrorKind::Io: return SL3_ERR_IO;
  }
  return SL3_ERR_INTERNAL;
}

// Runs fn and converts exceptions into a status plus the thread's message.
template <class Fn>
sl3_status guarded(Fn&& fn) {
  g_error.clear();
  try {
    fn();
    return SL3_OK;
  } catch (const sl3::Error& e) {
    g_error = e.what();
    return status_of(e.kind());
  } catch (const json::exception& e) {
    g_error = std::string("malformed JSON: ") + e.what();
    return SL3_ERR_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    g_error = "out of memory";
    return SL3_ERR_COMPUTATION;
  } catch (const std::exception& e) {
    g_error = e.what();
    return SL3_ERR_INTERNAL;
  } catch (...) {
    g_error = "unknown failure";
    return SL3_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) sl3::fail(sl3::ErrorKind::InvalidArgument, std::string(what) + " is null");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::function<void(const std::string&)> logger(sl3_log_fn fn, void* user) {
  if (!fn) return {};
  return [fn, user](const std::string& m) { fn(m.c_str(), user); };
}

bool has_dir(const char* d) { return d && *d; }

}  // namespace

extern "C" {

const char* sl3_version(void) { return SL3_VERSION; }
const char* sl3_last_error(void) { return g_error.c_str(); }

const char* sl3_status_name(sl3_status s) {
  switch (s) {
    case SL3_OK: return "ok";
    case SL3_ERR_INVALID_ARGUMENT: return "invalid argument";
    case SL3_ERR_DIVISION_BY_ZERO: return "division by zero";
    case SL3_ERR_UNSUPPORTED: return "unsupported";
    case SL3_ERR_COMPUTATION: return "computation error";
    case SL3_ERR_IO: return "i/o error";
    case SL3_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void sl3_string_free(char* s) { std::free(s); }

sl3_status sl3_weight_parse(const char* text, unsigned p, int out[3]) {
  return guarded([&] {
    need(text, "weight text");
    need(out, "output weight");
    sl3::require(p > 2, "p must be an odd prime");
    std::string t = text;
    if (!t.empty() && t[0] != 'F') t = "F(" + t + ")";
    sl3::Weight w = sl3::Weight::parse(t);
    const int q = static_cast<int>(p) - 1;
    const int c = ((w.c % q) + q) % q;
    const int shift = c - w.c;
    out[0] = w.a + shift;
    out[1] = w.b + shift;
    out[2] = c;
  });
}

void sl3_homology_options_init(sl3_homology_options* opt) {
  if (!opt) return;
  const sl3::HomologyOptions d;
  *opt = sl3_homology_options{};
  opt->nebentype = "trivial";
  opt->restart_percent = 100.0 * d.restart_fraction;
  opt->row_block = d.batch_rows;
  opt->resident_rows = d.resident_rows;
  opt->workers = 1;
}

sl3_status sl3_homology_compute(const sl3_homology_options* opt, sl3_homology** out) {
  return guarded([&] {
    need(opt, "options");
    need(out, "output handle");
    *out = nullptr;
    const sl3::Weight w{opt->weight[0], opt->weight[1], opt->weight[2]};
    sl3::require(w.a >= w.b && w.b >= w.c, "weight must satisfy a >= b >= c");
    const sl3::Character eps = sl3::Character::parse(opt->nebentype ? opt->nebentype : "trivial");
    sl3::HomologyOptions ho;
    ho.restart = opt->restart_percent >= 0;
    ho.restart_fraction = opt->restart_percent / 100.0;
    sl3::require(opt->restart_percent <= 100.0, "restart percent must be at most 100");
    sl3::require(opt->row_block > 0, "row block size must be positive");
    ho.batch_rows = opt->row_block;
    ho.resident_rows = opt->resident_rows;
    ho.workers = opt->workers ? opt->workers : 1;
    ho.log = logger(opt->log, opt->log_user);
    openblas_set_num_threads(static_cast<int>(ho.workers));

    std::optional<sl3::HomologySpace> H;
    if (has_dir(opt->cache_dir)) {
      const sl3::HomologyCache cache(opt->cache_dir);
      ho.spill_dir = std::string(opt->cache_dir) + "/spill";
      H = cache.load(opt->p, opt->N, w, eps);
      if (H) {
        if (ho.log) ho.log("homology loaded from " + cache.path_for(opt->p, opt->N, w, eps));
      } else {
        sl3::CacheLock lock(opt->cache_dir);
        H = cache.load(opt->p, opt->N, w, eps);  // another writer may have finished meanwhile
        if (!H) {
          H = sl3::homology_space(opt->p, opt->N, w, eps, ho);
          cache.store(*H);
        }
      }
    } else {
      H = sl3::homology_space(opt->p, opt->N, w, eps, ho);
    }
    *out = new sl3_homology{std::move(*H)};
  });
}

size_t sl3_homology_dim(const sl3_homology* h) { return h ? h->space.dim() : 0; }

sl3_status sl3_homology_json(const sl3_homology* h, char** out) {
  return guarded([&] {
    need(h, "homology");
    need(out, "output string");
    *out = dup_string(sl3::homology_json(h->space).dump());
  });
}

void sl3_homology_free(sl3_homology* h) { delete h; }

sl3_status sl3_eigensystems_compute(const sl3_homology* h, unsigned ell_max, const char* cache_dir, sl3_log_fn log,
                                    void* log_user, sl3_eigensystems** out) {
  return guarded([&] {
    need(h, "homology");
    need(out, "output handle");
    *out = nullptr;
    sl3::require(ell_max >= 2, "ell_max must be at least 2");
    auto e = std::make_unique<sl3_eigensystems>();
    e->space = h->space;
    e->ell_max = ell_max;
    std::unique_ptr<sl3::SymbolCache> symbols;
    std::unique_ptr<sl3::CacheLock> lock;
    if (has_dir(cache_dir)) {
      symbols = std::make_unique<sl3::SymbolCache>(cache_dir);
      lock = std::make_unique<sl3::CacheLock>(cache_dir);
    }
    if (h->space.dim() > 0) {
      sl3::EigenOptions eo;
      eo.ell_max = ell_max;
      eo.cache = symbols.get();
      eo.log = logger(log, log_user);
      e->systems = sl3::eigensystems(h->space, eo);
    }
    *out = e.release();
  });
}

size_t sl3_eigensystems_count(const sl3_eigensystems* e) { return e ? e->systems.size() : 0; }

sl3_status sl3_eigensystems_json(const sl3_eigensystems* e, char** out) {
  return guarded([&] {
    need(e, "eigensystems");
    need(out, "output string");
    std::vector<sl3::u32> ells;
    for (sl3::u32 l = 2; l <= e->ell_max; ++l) {
      bool prime = true;
      for (sl3::u32 d = 2; d * d <= l; ++d) prime = prime && l % d != 0;
      if (prime) ells.push_back(l);
    }
    json j = sl3::eigensystems_json(e->space, e->systems, ells);
    j["ell_max"] = e->ell_max;
    *out = dup_string(j.dump());
  });
}

void sl3_eigensystems_free(sl3_eigensystems* e) { delete e; }

sl3_status sl3_rep_parse(const char* json_text, sl3_rep** out) {
  return guarded([&] {
    need(json_text, "JSON text");
    need(out, "output handle");
    *out = nullptr;
    *out = new sl3_rep{sl3::parse_rep_spec(json_text)};
  });
}

void sl3_rep_free(sl3_rep* r) { delete r; }

sl3_status sl3_predict_json(const sl3_rep* r, unsigned ell_max, char** out) {
  return guarded([&] {
    need(r, "representation");
    need(out, "output string");
    const auto rep = sl3::predict_report(r->spec, ell_max);
    json j = sl3::prediction_json(r->spec, rep);
    j["ell_max"] = ell_max;
    *out = dup_string(j.dump());
  });
}

sl3_status sl3_match_json(const sl3_rep* r, const sl3_eigensystems* e, char** out, int* passed) {
  return guarded([&] {
    need(r, "representation");
    need(e, "eigensystems");
    need(out, "output string");
    const auto& spec = r->spec;
    sl3::require(spec.p == e->space.p(), "representation and homology use different primes");
    const auto branches = sl3::frobenius_data(spec, e->ell_max);
    json j;
    j["p"] = e->space.p();
    j["N"] = e->space.level();
    j["weight"] = e->space.weight().label();
    j["eps"] = e->space.character().name();
    j["ell_max"] = e->ell_max;
    j["representation"] = spec.name;
    json notes = json::array();
    for (const auto& [ell, cls] : spec.frobenius_classes)
      notes.push_back("class " + cls + " for Frob" + std::to_string(ell) + " (fixture)");
    j["ambiguity"] = notes;
    json systems = json::array();
    json matched = json::array();
    for (const auto& s : e->systems) {
      const auto m = sl3::match(s, branches);
      if (m.pass) matched.push_back(m.eigensystem);
      systems.push_back(sl3::match_json(m));
    }
    j["systems"] = systems;
    j["matched"] = matched;
    j["pass"] = !matched.empty();
    if (passed) *passed = matched.empty() ? 0 : 1;
    *out = dup_string(j.dump());
  });
}

sl3_status sl3_cache_list(const char* dir, char** out) {
  return guarded([&] {
    need(dir, "cache directory");
    need(out, "output string");
    json arr = json::array();
    for (const auto& c : sl3::cache_list(dir)) arr.push_back({{"kind", c.kind}, {"file", c.file}, {"bytes", c.bytes}});
    *out = dup_string(json{{"dir", dir}, {"entries", arr}}.dump());
  });
}

sl3_status sl3_cache_clear(const char* dir, size_t* removed) {
  return guarded([&] {
    need(dir, "cache directory");
    sl3::CacheLock lock(dir);
    const size_t n = sl3::cache_clear(dir);
    if (removed) *removed = n;
  });
}

sl3_status sl3_selftest(char** out, int* failures) {
  return guarded([&] {
    need(out, "output string");
    json arr = json::array();
    int bad = 0;
    for (const auto& c : sl3::run_selftest()) {
      bad += c.ok ? 0 : 1;
      arr.push_back({{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
    }
    if (failures) *failures = bad;
    *out = dup_string(json{{"checks", arr}, {"failures", bad}}.dump());
  });
}

}  // extern "C"
