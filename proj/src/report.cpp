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

#include "report.hpp"

namespace sl3 {

using nlohmann::json;

namespace {

std::string elem(const ExtField& E, const ExtField::Elem& x) {
  return E.degree() == 1 ? std::to_string(x.c[0]) : E.to_string(x);
}

json weight_list(const std::vector<Weight>& ws) {
  json j = json::array();
  for (const auto& w : ws) j.push_back(w.label());
  return j;
}

}  // namespace

json homology_json(const HomologySpace& H) {
  json j;
  j["p"] = H.p();
  j["N"] = H.level();
  j["weight"] = H.weight().label();
  j["eps"] = H.character().name();
  j["module_dim"] = H.module().dim();
  j["dim"] = H.dim();
  j["distinguished"] = H.distinguished();
  return j;
}

json eigensystems_json(const HomologySpace& H, const std::vector<EigenSystem>& systems, const std::vector<u32>& ells) {
  json j = homology_json(H);
  json arr = json::array();
  for (const auto& s : systems) {
    json e;
    e["index"] = s.index;
    e["degree"] = s.degree;
    e["field"] = s.field().header();
    e["multiplicity"] = s.multiplicity;
    e["conjugate"] = s.conjugate;
    e["fallback"] = s.fallback;
    json rows = json::array();
    for (u32 ell : ells) {
      json r;
      r["ell"] = ell;
      const bool bad = H.p() % ell == 0 || H.level() % ell == 0;
      if (bad || !s.a.count(ell)) {
        r["a1"] = "*";
        r["a2"] = "*";
      } else {
        r["a1"] = s.value_string(ell, 1);
        r["a2"] = s.value_string(ell, 2);
      }
      rows.push_back(r);
    }
    e["values"] = rows;
    arr.push_back(e);
  }
  j["systems"] = arr;
  return j;
}

PredictionReport predict_report(const GaloisRepSpec& spec, u32 ell_max) {
  PredictionReport r;
  if (!spec.inertia.blocks.empty()) {
    InertiaSpec in = spec.inertia;
    if (in.p == 0) in.p = spec.p;
    std::vector<LeviShape> levis = spec.levis;
    if (levis.empty()) levis.push_back(LeviShape::full(in.n()));
    std::vector<int> signs = spec.conjugation;
    if (signs.empty()) signs = {1, -1, 1};
    for (const auto& l : levis) {
      r.parity.push_back(strict_parity(signs, l));
      r.parity_ok = r.parity_ok || r.parity.back().ok;
    }
    if (r.parity_ok) {
      r.weights = predicted_weights(in, levis, signs);
      r.parity_reason = "strict parity holds";
    } else {
      r.parity_reason = "strict parity fails for every Levi shape";
    }
  } else {
    r.parity_reason = "no inertia data";
  }
  RamificationData ram = spec.ramification;
  for (u32 q : spec.twist.factors()) ram = twist_quadratic(ram, q);
  r.level = level_nebentype(ram);
  if (spec.construction == Construction::LocalOnly) {
    r.frobenius_note = "no global description";
  } else {
    r.frobenius = frobenius_data(spec, ell_max);
  }
  return r;
}

json frobenius_json(const FrobeniusData& d) {
  const ExtField E = d.field();
  json j;
  j["branch"] = d.branch;
  j["field"] = E.header();
  json rows = json::array();
  for (const auto& [ell, e] : d.entries) {
    json r;
    r["ell"] = ell;
    r["order"] = e.order;
    r["cycle_type"] = e.cycle_type;
    json cs = json::array();
    for (const auto& c : e.candidates) {
      json x;
      x["class"] = c.cls;
      x["c1"] = elem(E, c.c[0]);
      x["c2"] = elem(E, c.c[1]);
      x["c3"] = elem(E, c.c[2]);
      cs.push_back(x);
    }
    r["candidates"] = cs;
    rows.push_back(r);
  }
  j["entries"] = rows;
  return j;
}

json prediction_json(const GaloisRepSpec& spec, const PredictionReport& r) {
  json j;
  j["name"] = spec.name;
  j["p"] = spec.p;
  json ws = json::array();
  for (const auto& w : r.weights) {
    json x;
    x["label"] = w.label();
    x["display"] = w.display();
    x["candidates"] = weight_list(w.candidates);
    x["derived"] = w.derived;
    x["levi"] = w.levi;
    ws.push_back(x);
  }
  j["weights"] = ws;
  json par = json::array();
  for (size_t i = 0; i < r.parity.size(); ++i)
    par.push_back({{"levi", spec.levis.empty() ? std::string("full") : spec.levis[i].name()},
                   {"ok", r.parity[i].ok},
                   {"reason", r.parity[i].reason}});
  j["parity"] = {{"ok", r.parity_ok}, {"reason", r.parity_reason}, {"levis", par}};
  j["level"] = r.level.N;
  j["nebentype"] = r.level.eps.name();
  if (r.frobenius.empty()) {
    j["frobenius"] = nullptr;
    j["frobenius_note"] = r.frobenius_note;
  } else {
    json fs = json::array();
    for (const auto& d : r.frobenius) fs.push_back(frobenius_json(d));
    j["frobenius"] = fs;
  }
  json fx = json::object();
  for (const auto& [ell, cls] : spec.frobenius_classes) fx[std::to_string(ell)] = cls;
  j["fixture_classes"] = fx;
  return j;
}

json match_json(const MatchReport& r) {
  json j;
  j["eigensystem"] = r.eigensystem;
  j["pass"] = r.pass;
  j["branch"] = r.branch;
  j["first_failure"] = r.first_failure;
  json rows = json::array();
  for (const auto& x : r.rows)
    rows.push_back({{"ell", x.ell},
                    {"pass", x.pass},
                    {"a1", x.a1},
                    {"a2", x.a2},
                    {"c1", x.c1},
                    {"c2", x.c2},
                    {"class", x.cls},
                    {"candidates", x.candidates}});
  j["rows"] = rows;
  return j;
}

}  // namespace sl3
