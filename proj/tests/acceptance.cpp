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

// Acceptance checks.  Prints one PASS or FAIL line per criterion, comparing
// exactly (values in F_p or F_{p^k}, labels as strings).
//
//   acceptance [criterion ...]     default: 1 through 7
//
// A criterion may fail only in the documented way listed in kDocumented: its
// mismatch list must then equal the documented one exactly.  Anything else,
// including an unexpected pass, makes the exit status nonzero.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include "galois.hpp"
#include "linalg.hpp"
#include "report.hpp"

using namespace sl3;
using Elem = ExtField::Elem;

namespace {

struct Outcome {
  std::vector<std::string> mismatches;  // empty: pass
  std::string detail;
};

struct Documented {
  std::vector<std::string> mismatches;
  std::string reason;
};

// Reference cells that the computation contradicts, with the evidence.
const std::map<int, Documented> kDocumented = {
    {1,
     {{"a(29,2): reference 29, computed 14"},
      "the Frobenius prediction gives c2(29) = 36 = 29*14 mod 37, while 29*29 = 27"}},
    {4,
     {{"psl27_p11_rho_prime: reference F(3,2,0)⊗det^6 not predicted",
       "psl27_p11_rho_prime: predicted F(3,2,0)⊗det^4 not in reference"},
      "H(11,31,F(7,6,4),eps31), the det^4 twist, carries the representation, while "
      "H(11,31,F(9,8,6),eps31), the det^6 twist, fails at ell = 2"}},
};

std::string data_dir() { return SL3_DATA_DIR; }

GaloisRepSpec load_spec(const std::string& name) {
  std::ifstream in(data_dir() + "/reps/" + name + ".json");
  if (!in) fail(ErrorKind::Io, "missing spec " + name);
  std::ostringstream os;
  os << in.rdbuf();
  return parse_rep_spec(os.str());
}

std::vector<u32> primes_upto(u32 n) {
  std::vector<u32> out;
  for (u32 l = 2; l <= n; ++l) {
    bool prime = true;
    for (u32 d = 2; d * d <= l; ++d) prime = prime && l % d != 0;
    if (prime) out.push_back(l);
  }
  return out;
}

// Shared computations.
struct Level4 {
  HomologySpace H;
  std::vector<EigenSystem> systems;
};

const Level4& level4() {
  static const Level4 L = [] {
    Level4 x;
    x.H = homology_space(37, 4, Weight{16, 0, 0}, Character());
    x.systems = eigensystems(x.H, EigenOptions{});
    return x;
  }();
  return L;
}

// Reference rows: ell -> (a(ell,1), a(ell,2)).
using Rows = std::map<u32, std::pair<std::string, std::string>>;

const Rows kLevel4Rows = {{3, {"2", "24"}},   {5, {"5", "22"}},   {7, {"6", "15"}},   {11, {"10", "26"}},
                          {13, {"13", "17"}}, {17, {"17", "13"}}, {19, {"19", "35"}}, {23, {"23", "8"}},
                          {29, {"29", "29"}}, {31, {"31", "31"}}, {41, {"3", "27"}},  {43, {"6", "6"}},
                          {47, {"9", "25"}}};

const Rows kLevel31Rows = {{2, {"4", "3"}},   {3, {"0", "0"}},   {5, {"1", "9"}},   {7, {"6", "10"}},
                           {13, {"7", "3"}},  {17, {"10", "2"}}, {19, {"1", "7"}},  {23, {"7", "6"}},
                           {29, {"0", "0"}},  {37, {"1", "8"}},  {41, {"0", "0"}},  {43, {"0", "0"}},
                           {47, {"0", "0"}}};

std::vector<std::string> row_mismatches(const EigenSystem& s, const Rows& rows) {
  std::vector<std::string> out;
  for (const auto& [ell, v] : rows) {
    if (!s.a.count(ell)) {
      out.push_back("a(" + std::to_string(ell) + ",*): not computed");
      continue;
    }
    const std::string a1 = s.value_string(ell, 1), a2 = s.value_string(ell, 2);
    if (a1 != v.first) out.push_back("a(" + std::to_string(ell) + ",1): reference " + v.first + ", computed " + a1);
    if (a2 != v.second)
      out.push_back("a(" + std::to_string(ell) + ",2): reference " + v.second + ", computed " + a2);
  }
  return out;
}

// The one-dimensional rational system closest to the reference rows.
std::pair<const EigenSystem*, std::vector<std::string>> closest(const std::vector<EigenSystem>& systems,
                                                                const Rows& rows) {
  const EigenSystem* best = nullptr;
  std::vector<std::string> best_mm;
  for (const auto& s : systems) {
    if (s.degree != 1 || s.multiplicity != 1) continue;
    auto mm = row_mismatches(s, rows);
    if (!best || mm.size() < best_mm.size()) {
      best = &s;
      best_mm = mm;
    }
  }
  return {best, best_mm};
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
  const auto& L = level4();
  Outcome o;
  if (L.H.module().dim() != 4284) o.mismatches.push_back("module dim " + std::to_string(L.H.module().dim()));
  if (L.H.dim() != 15) o.mismatches.push_back("homology dim " + std::to_string(L.H.dim()) + " != 15");
  const auto [s, mm] = closest(L.systems, kLevel4Rows);
  if (!s) {
    o.mismatches.push_back("no one-dimensional rational eigensystem");
    return o;
  }
  o.mismatches.insert(o.mismatches.end(), mm.begin(), mm.end());
  o.detail = "dim 15, system " + std::to_string(s->index) + ", " + std::to_string(2 * kLevel4Rows.size() - mm.size()) +
             "/" + std::to_string(2 * kLevel4Rows.size()) + " cells equal";
  return o;
}

Outcome criterion2() {
  const auto H = homology_space(11, 31, Weight{4, 2, 1}, Character::parse("eps31"));
  EigenOptions eo;
  const auto systems = eigensystems(H, eo);
  Outcome o;
  const auto [s, mm] = closest(systems, kLevel31Rows);
  if (!s) {
    o.mismatches.push_back("no one-dimensional rational eigensystem");
    return o;
  }
  o.mismatches = mm;
  // 11 = p and 31 = N are starred in the exported table.
  const auto j = eigensystems_json(H, {*s}, {11, 31});
  for (const auto& r : j["systems"][0]["values"])
    if (r["a1"] != "*" || r["a2"] != "*") o.mismatches.push_back("ell " + r["ell"].dump() + " not starred");
  o.detail = "dim " + std::to_string(H.dim()) + ", system " + std::to_string(s->index) + ", " +
             std::to_string(2 * kLevel31Rows.size() - mm.size()) + "/" + std::to_string(2 * kLevel31Rows.size()) +
             " cells equal, ell in {11,31} starred";
  return o;
}

Outcome criterion3() {
  const auto H = homology_space(19, 11, Weight{22, 11, 0}, Character::parse("eps11"));
  Outcome o;
  if (H.dim() != 31) o.mismatches.push_back("homology dim " + std::to_string(H.dim()) + " != 31");
  o.detail = "module dim " + std::to_string(H.module().dim()) + ", homology dim " + std::to_string(H.dim());
  return o;
}

Outcome criterion4() {
  struct Case {
    std::string spec;
    std::vector<std::string> weights;  // empty: not checked
    std::optional<std::pair<u64, std::string>> level;
  };
  const std::vector<Case> cases = {
      {"s3_p37_level4", {"F(16,0,0)"}, std::pair<u64, std::string>{4, "trivial"}},
      {"a4_p7_level13",
       {"F(2,1,0)", "F(6,3,0)", "F(2,1,0)⊗det^2", "F(6,3,0)⊗det^2", "F(2,1,0)⊗det^4", "F(6,3,0)⊗det^4"},
       std::pair<u64, std::string>{13, "eps13"}},
      {"d5_p19_rho", {"F(13,2,0)", "F(20,13,0)", "F(16,14,3)", "F(34,21,14)"}, std::nullopt},
      {"d5_p19_rho_prime", {"F(9,6,0)", "F(24,9,0)", "F(16,10,7)", "F(34,25,10)"}, std::nullopt},
      {"s4_p5_level73",
       {"F(1,0,0)′", "F(5,3,1)", "F(2,2,1)′", "F(4,1,0)", "F(4,3,2)", "F(6,5,2)"},
       std::pair<u64, std::string>{73, "eps73"}},
      {"cubic_p7_a", {"F(3,2,0)", "F(3,2,0)⊗det^4", "F(3,2,0)⊗det^2"}, std::pair<u64, std::string>{59, "eps59"}},
      {"cubic_p7_b", {"F(3,1,0)⊗det^1", "F(3,1,0)⊗det^3", "F(3,1,0)⊗det^5"},
       std::pair<u64, std::string>{59, "eps59"}},
      {"psl27_p11_rho", {"F(4,2,1)", "F(6,6,0)⊗det^5", "F(8,3,0)⊗det^2"}, std::pair<u64, std::string>{31, "eps31"}},
      {"psl27_p11_rho_prime", {"F(6,0,0)⊗det^7", "F(3,2,0)⊗det^6", "F(8,5,0)⊗det^8"},
       std::pair<u64, std::string>{31, "eps31"}},
  };
  Outcome o;
  size_t cells = 0, good = 0;
  for (const auto& c : cases) {
    const auto spec = load_spec(c.spec);
    const auto rep = predict_report(spec, spec.construction == Construction::LocalOnly ? 0 : 7);
    // One-to-one label matching.
    std::vector<bool> used(rep.weights.size(), false);
    for (const auto& label : c.weights) {
      ++cells;
      bool hit = false;
      for (size_t i = 0; i < rep.weights.size() && !hit; ++i)
        if (!used[i] && matches_label(rep.weights[i], label, spec.p)) used[i] = hit = true;
      if (hit) {
        ++good;
      } else {
        o.mismatches.push_back(c.spec + ": reference " + label + " not predicted");
      }
    }
    for (size_t i = 0; i < rep.weights.size(); ++i)
      if (!used[i]) {
        const auto& w = rep.weights[i];
        // Report in the reference style F(x,y,0)⊗det^c.
        const auto base = w.candidates.front();
        o.mismatches.push_back(c.spec + ": predicted " + base.display() + " not in reference");
      }
    if (c.level) {
      ++cells;
      if (rep.level.N == c.level->first && rep.level.eps.name() == c.level->second) {
        ++good;
      } else {
        o.mismatches.push_back(c.spec + ": level " + std::to_string(rep.level.N) + " " + rep.level.eps.name() +
                               ", reference " + std::to_string(c.level->first) + " " + c.level->second);
      }
    }
  }
  o.detail = std::to_string(good) + "/" + std::to_string(cells) + " cells equal";
  return o;
}

Outcome criterion5() {
  const auto& L = level4();
  const auto spec = load_spec("s3_p37_level4");
  const auto branches = frobenius_data(spec, 47);
  Outcome o;
  if (branches.size() != 1) {
    o.mismatches.push_back("expected one branch, got " + std::to_string(branches.size()));
    return o;
  }
  const FrobeniusData& d = branches[0];
  std::set<u32> want;
  for (const auto& [ell, v] : kLevel4Rows) want.insert(ell);
  std::set<u32> have;
  for (const auto& [ell, e] : d.entries) have.insert(ell);
  if (have != want) o.mismatches.push_back("good primes differ from the 13 expected");
  // Compare with every one-dimensional system; the attached one must agree everywhere.
  const EigenSystem* hit = nullptr;
  std::vector<std::string> first_mm;
  for (const auto& s : L.systems) {
    if (s.degree != 1) continue;
    std::vector<std::string> mm;
    for (const auto& [ell, e] : d.entries) {
      if (e.candidates.size() != 1) mm.push_back("ell " + std::to_string(ell) + " ambiguous");
      const auto& c = e.candidates.front().c;
      const u32 a1 = s.a.at(ell)[0].c[0], a2 = s.a.at(ell)[1].c[0];
      if (c[0].c[0] != a1) mm.push_back("c1(" + std::to_string(ell) + ") != a(" + std::to_string(ell) + ",1)");
      if (c[1].c[0] != static_cast<u32>(static_cast<u64>(ell) * a2 % 37))
        mm.push_back("c2(" + std::to_string(ell) + ") != ell a(" + std::to_string(ell) + ",2)");
    }
    if (mm.empty()) {
      hit = &s;
      break;
    }
    if (first_mm.empty()) first_mm = mm;
  }
  if (!hit) {
    o.mismatches.push_back("no eigensystem agrees with the predicted characteristic polynomials");
    o.mismatches.insert(o.mismatches.end(), first_mm.begin(), first_mm.end());
    return o;
  }
  o.detail = "system " + std::to_string(hit->index) + " agrees at " + std::to_string(d.entries.size()) +
             " good primes <= 47";
  // The predicted c2 at 29 also settles the disputed reference cell.
  const u32 c2_29 = d.entries.at(29).candidates.front().c[1].c[0];
  o.detail += "; c2(29) = " + std::to_string(c2_29);
  return o;
}

// Property suites.
using Dense = std::vector<Vec>;

Dense operator_P(const GModule& V) {
  const PrimeField& F = V.field();
  Dense P(V.dim(), Vec(V.dim(), 0));
  for (const auto& g : MonomialGroup::elements()) {
    const Dense A = V.action_matrix(g.m).to_dense();
    for (size_t i = 0; i < V.dim(); ++i)
      for (size_t j = 0; j < V.dim(); ++j) P[i][j] = g.sign > 0 ? F.add(P[i][j], A[i][j]) : F.sub(P[i][j], A[i][j]);
  }
  return P;
}

Vec random_vec(std::mt19937_64& rng, size_t n, u32 p) {
  Vec v(n);
  for (auto& x : v) x = static_cast<u32>(rng() % p);
  return v;
}

std::shared_ptr<const GModule> random_module(std::mt19937_64& rng, u32 p) {
  for (;;) {
    const int kind = static_cast<int>(rng() % 3);
    std::shared_ptr<const GModule> m;
    if (kind == 0) {
      m = std::make_shared<SymModule>(8 + static_cast<int>(rng() % 18), p);
    } else if (kind == 1) {
      m = std::make_shared<TensorModule>(1 + static_cast<int>(rng() % 4), static_cast<int>(rng() % 3), p);
    } else {
      const u32 N = rng() % 2 ? 2 : 3;
      m = std::make_shared<InducedModule>(std::make_shared<SymModule>(1 + static_cast<int>(rng() % 4), p), N,
                                          Character());
    }
    if (m->dim() >= 50 && m->dim() <= 400) return m;
  }
}

Mat3 random_semigroup(std::mt19937_64& rng, i64 pN) {
  for (;;) {
    Mat3 m;
    for (auto& x : m.a) x = static_cast<i64>(rng() % 11) - 5;
    const i64 d = det(m);
    if (d > 0 && std::gcd(d, pN) == 1) return m;
  }
}

Outcome criterion6() {
  Outcome o;
  std::vector<std::string> done;
  auto fail_if = [&](bool bad, const std::string& what) {
    if (bad) o.mismatches.push_back(what);
  };
  std::mt19937_64 rng(20261014);

  // P^2 = 24 P.
  {
    const std::vector<std::shared_ptr<const GModule>> mods = {
        std::make_shared<SymModule>(4, 7), std::make_shared<TensorModule>(2, 1, 11),
        std::make_shared<InducedModule>(std::make_shared<SymModule>(2, 5), 2, Character()),
        std::make_shared<InducedModule>(std::make_shared<SymModule>(1, 13), 3, Character::parse("eps3"))};
    for (const auto& V : mods) {
      const PrimeField& F = V->field();
      const Dense P = operator_P(*V);
      const Dense P2 = linalg::matmul(F, P, P);
      bool ok = true;
      for (size_t i = 0; i < P.size(); ++i)
        for (size_t j = 0; j < P.size(); ++j) ok = ok && P2[i][j] == F.mul(24, P[i][j]);
      fail_if(!ok, "P^2 != 24P on a module of dim " + std::to_string(V->dim()));
    }
    done.push_back("P^2=24P");
  }
  // h^3 = I.
  fail_if(!(mat_h() * mat_h() * mat_h() == Mat3::identity()) || mat_h() == Mat3::identity(), "h^3 != I");
  done.push_back("h^3=I");
  // Streaming kernel against the dense oracle.
  {
    int modules = 0;
    for (int t = 0; modules < 24; ++t) {
      const u32 p = std::array<u32, 4>{5, 7, 11, 13}[t % 4];
      const auto V = random_module(rng, p);
      std::vector<Vec> basis = semi_invariants(*V);
      if (t % 2) {
        basis.clear();
        for (size_t j = 5 + rng() % 40; j > 0; --j) basis.push_back(random_vec(rng, V->dim(), p));
      }
      if (basis.empty()) continue;
      ++modules;
      const auto dense = h_kernel_dense(*V, basis);
      HomologyOptions opt;
      opt.batch_rows = 1 + rng() % 30;
      opt.restart_fraction = 0.3;
      opt.restart_min = 1;
      fail_if(h_kernel(*V, basis, opt) != dense, "streaming kernel differs on a module of dim " +
                                                      std::to_string(V->dim()));
    }
    done.push_back(std::to_string(modules) + " streaming kernels");
  }
  // Semigroup action law.
  {
    const std::vector<std::pair<std::shared_ptr<const GModule>, i64>> mods = {
        {std::make_shared<SymModule>(5, 7), 7},
        {std::make_shared<TensorModule>(3, 1, 11), 11},
        {std::make_shared<InducedModule>(std::make_shared<SymModule>(2, 7), 4, Character::parse("eps4")), 28},
        {std::make_shared<InducedModule>(std::make_shared<SymModule>(1, 11), 5, Character::parse("eps5")), 55}};
    for (const auto& [V, pN] : mods)
      for (int t = 0; t < 25; ++t) {
        const Mat3 g = random_semigroup(rng, pN), h = random_semigroup(rng, pN);
        const Vec v = random_vec(rng, V->dim(), V->field().p());
        fail_if(V->act(V->act(v, g), h) != V->act(v, g * h), "action law fails on dim " + std::to_string(V->dim()));
      }
    done.push_back("action law");
  }
  // Highest weight vectors: fixed by the lower unipotent generator, torus weight (a,b).
  for (auto [a, b, p] : {std::tuple{3, 1, 7u}, {4, 2, 11u}, {5, 5, 7u}, {6, 3, 5u}, {9, 4, 19u}}) {
    TensorModule T(a, b, p);
    const Vec v = hw_vector(T, a, b);
    fail_if(T.act(v, mat_g1()) != v, "hw vector not fixed for F(" + std::to_string(a) + "," + std::to_string(b) + ")");
    const PrimeField& F = T.field();
    for (int t = 0; t < 4; ++t) {
      const u32 t1 = 1 + rng() % (p - 1), t2 = 1 + rng() % (p - 1), t3 = 1 + rng() % (p - 1);
      const u32 s = F.mul(F.pow(t1, a), F.pow(t2, b));
      Vec sv = v;
      for (auto& x : sv) x = F.mul(s, x);
      fail_if(T.act(v, Mat3::diag(t1, t2, t3)) != sv, "hw vector has the wrong torus weight");
    }
  }
  done.push_back("hw vectors");
  // Hecke operators on the level 4 space: commutativity and the defining conditions.
  {
    const auto H = homology_space(37, 4, Weight{16, 0, 0}, Character());
    const PrimeField& F = H.module().field();
    const auto T3 = hecke_operator(3, 1, 4, 37), T5 = hecke_operator(5, 1, 4, 37);
    const auto A3 = hecke_matrix(H, T3), A5 = hecke_matrix(H, T5);
    fail_if(linalg::matmul(F, A3, A5) != linalg::matmul(F, A5, A3), "T(3,1) T(5,1) != T(5,1) T(3,1)");
    for (size_t l = 0; l < H.dim(); ++l) {
      fail_if(!satisfies_conditions(H.module(), hecke_image(H.module(), T3, H.vector(l))), "T(3,1) leaves H");
      fail_if(!satisfies_conditions(H.module(), hecke_image(H.module(), T5, H.vector(l))), "T(5,1) leaves H");
    }
    done.push_back("Hecke commutativity and conditions");
  }
  // Symbol reduction.
  {
    int n = 0;
    while (n < 300) {
      Mat3 q;
      for (auto& x : q.a) x = static_cast<i64>(rng() % 19) - 9;
      if (det(q) == 0) continue;
      ++n;
      ReduceStats st;
      const auto terms = reduce_symbol(q, &st);
      fail_if(!st.det_decreased, "determinant did not decrease");
      for (const auto& s : terms) fail_if(std::abs(det(s.m)) != 1, "non-unimodular output");
    }
    done.push_back("300 symbol reductions");
  }
  // Coset counts and distinctness.
  for (u32 ell : {2u, 3u, 5u, 7u})
    for (int k : {1, 2}) {
      const auto c = hecke_cosets(ell, k, 31, 11);
      fail_if(c.reps.size() != ell * ell + ell + 1, "coset count for ell " + std::to_string(ell));
      for (size_t i = 0; i < c.reps.size(); ++i)
        for (size_t j = i + 1; j < c.reps.size(); ++j)
          fail_if(same_coset(c.reps[i], c.reps[j], 31), "repeated coset for ell " + std::to_string(ell));
    }
  done.push_back("cosets");
  for (size_t i = 0; i < done.size(); ++i) o.detail += (i ? ", " : "") + done[i];
  return o;
}

Outcome criterion7() {
  const auto H = homology_space(7, 59, Weight{3, 2, 0}, Character::parse("eps59"));
  const auto systems = eigensystems(H, EigenOptions{});
  const auto spec = load_spec("cubic_p7_a");
  const auto branches = frobenius_data(spec, 47);
  Outcome o;
  // Trace row: exponent of zeta, or -1 for trace 0.
  const std::map<u32, int> trace = {{2, 1},  {3, -1},  {5, -1}, {11, 5}, {13, 6}, {17, -1}, {19, -1}, {23, 1},
                                    {29, -1}, {31, 2}, {37, 7}, {41, -1}, {43, 0}, {47, 1}};
  // Other conjugate triples over F_343 occur too; the attached one is picked out by
  // the Frobenius data and must be a single full orbit.
  std::vector<const EigenSystem*> cubic;
  size_t over_343 = 0;
  for (const auto& s : systems) {
    if (s.degree != 3) continue;
    ++over_343;
    if (match(s, branches).pass) cubic.push_back(&s);
  }
  if (cubic.size() != 3) {
    o.mismatches.push_back(std::to_string(cubic.size()) + " of " + std::to_string(over_343) +
                           " systems over F_343 match, expected 3");
    return o;
  }
  std::set<size_t> conj;
  for (const auto* s : cubic) conj.insert(s->conjugate);
  if (conj.size() != 3) o.mismatches.push_back("matching systems are not one conjugate orbit");
  std::set<std::vector<u32>> zetas;
  for (const auto* s : cubic) {
    const ExtField E = s->field();
    const Elem z = s->a.at(2)[0];
    if (E.mult_order(z) != 9) o.mismatches.push_back("system " + std::to_string(s->index) + ": a(2,1) not of order 9");
    if (!(E.pow(z, 3) == E.from_coeffs({4}))) o.mismatches.push_back("a(2,1)^3 != 4");
    for (const auto& [ell, e] : trace) {
      const Elem want = e < 0 ? E.from_coeffs({0}) : E.pow(z, static_cast<u64>(e));
      if (!(s->a.at(ell)[0] == want))
        o.mismatches.push_back("system " + std::to_string(s->index) + ": a(" + std::to_string(ell) + ",1) = " +
                               E.to_string(s->a.at(ell)[0]));
    }
    // Compare the three a(2,1) inside one field.
    const ExtField E0 = cubic.front()->field();
    if (E.header() != E0.header()) o.mismatches.push_back("systems use different fields");
    zetas.insert(std::vector<u32>(z.c.begin(), z.c.end()));
  }
  // {z, z^4, z^7} for the first system's z.
  const ExtField E0 = cubic.front()->field();
  const Elem z0 = cubic.front()->a.at(2)[0];
  std::set<std::vector<u32>> orbit;
  for (int e : {1, 4, 7}) {
    const Elem x = E0.pow(z0, static_cast<u64>(e));
    orbit.insert(std::vector<u32>(x.c.begin(), x.c.end()));
  }
  if (zetas != orbit) o.mismatches.push_back("a(2,1) values are not {z, z^4, z^7}");
  o.detail = "dim " + std::to_string(H.dim()) + ", " + std::to_string(over_343) + " systems over " + E0.header() +
             ", 3 matching: systems";
  for (const auto* s : cubic) o.detail += " " + std::to_string(s->index);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<int, std::pair<std::string, std::function<Outcome()>>> criteria = {
      {1, {"level 4 weight F(16,0,0): dimension and eigenvalue rows", criterion1}},
      {2, {"level 31 weight F(4,2,1) eps31: eigenvalue table", criterion2}},
      {3, {"level 11 weight F(22,11,0) eps11: dimension 31", criterion3}},
      {4, {"predicted weights, levels and nebentypes", criterion4}},
      {5, {"Frobenius predictions against level 4 eigenvalues", criterion5}},
      {6, {"property suites", criterion6}},
      {7, {"level 59 weight F(3,2,0) eps59: conjugate systems over F_343", criterion7}},
  };
  std::vector<int> run;
  for (int i = 1; i < argc; ++i) run.push_back(std::stoi(argv[i]));
  if (run.empty())
    for (const auto& [k, v] : criteria) run.push_back(k);

  int unexpected = 0;
  for (int k : run) {
    const auto it = criteria.find(k);
    if (it == criteria.end()) {
      std::cerr << "unknown criterion " << k << '\n';
      return 2;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = it->second.second();
    } catch (const std::exception& e) {
      o.mismatches.push_back(std::string("error: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = o.mismatches.empty();
    std::ostringstream line;
    line << (pass ? "PASS" : "FAIL") << " [" << k << "] " << it->second.first;
    if (!o.detail.empty()) line << " | " << o.detail;
    for (const auto& m : o.mismatches) line << " | " << m;
    line.precision(1);
    line << std::fixed << " (" << secs << "s)";
    const auto doc = kDocumented.find(k);
    if (doc != kDocumented.end()) {
      if (pass || o.mismatches != doc->second.mismatches) {
        ++unexpected;
        line << " | UNEXPECTED: documented deviation not reproduced";
      } else {
        line << " | documented: " << doc->second.reason;
      }
    } else if (!pass) {
      ++unexpected;
    }
    std::cout << line.str() << std::endl;
  }
  return unexpected ? 1 : 0;
}
