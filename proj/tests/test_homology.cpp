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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "error.hpp"
#include "homology.hpp"
#include "cache.hpp"
#include "linalg.hpp"

using namespace sl3;

namespace {

using Dense = std::vector<Vec>;

Dense to_dense(const SparseMat& m) { return m.to_dense(); }

Dense dense_sum(const PrimeField& F, const Dense& a, const Dense& b, int sign) {
  Dense c = a;
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[i].size(); ++j) c[i][j] = sign > 0 ? F.add(a[i][j], b[i][j]) : F.sub(a[i][j], b[i][j]);
  return c;
}

Dense operator_P(const GModule& V) {
  const PrimeField& F = V.field();
  Dense P(V.dim(), Vec(V.dim(), 0));
  for (const auto& g : MonomialGroup::elements()) P = dense_sum(F, P, to_dense(V.action_matrix(g.m)), g.sign);
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
      int a = 1 + static_cast<int>(rng() % 4), b = static_cast<int>(rng() % 3);
      m = std::make_shared<TensorModule>(a, b, p);
    } else {
      const u32 N = rng() % 2 ? 2 : 3;
      if (N % p == 0) continue;
      auto inner = std::make_shared<SymModule>(1 + static_cast<int>(rng() % 4), p);
      m = std::make_shared<InducedModule>(inner, N, Character());
    }
    if (m->dim() >= 50 && m->dim() <= 400) return m;
  }
}

}  // namespace

TEST_CASE("monomial group") {
  const auto& M = MonomialGroup::elements();
  REQUIRE(M.size() == 24);
  CHECK(M[0].m == Mat3::identity());
  std::set<std::array<i64, 9>> seen;
  for (const auto& g : M) {
    CHECK(det(g.m) == 1);
    seen.insert(g.m.a);
  }
  CHECK(seen.size() == 24);
  for (const auto& g : M)
    for (const auto& k : M) {
      Mat3 gk = g.m * k.m;
      CHECK(seen.count(gk.a) == 1);
      CHECK(MonomialGroup::sign_of(gk) == g.sign * k.sign);
    }
  CHECK_THROWS_AS(MonomialGroup::sign_of(mat_h()), Error);
}

TEST_CASE("h has order three") {
  const Mat3 h = mat_h();
  CHECK(h * h * h == Mat3::identity());
  CHECK(h * h == mat_h_sq());
  CHECK(mat_h_sq() != Mat3::identity());
}

TEST_CASE("P squared is 24 P") {
  std::vector<std::shared_ptr<const GModule>> mods = {
      std::make_shared<SymModule>(3, 7), std::make_shared<SymModule>(6, 5),
      std::make_shared<TensorModule>(2, 1, 11),
      std::make_shared<InducedModule>(std::make_shared<SymModule>(2, 7), 2, Character()),
      std::make_shared<InducedModule>(std::make_shared<SymModule>(1, 13), 3, Character::parse("eps3"))};
  for (const auto& V : mods) {
    const PrimeField& F = V->field();
    Dense P = operator_P(*V);
    Dense P2 = linalg::matmul(F, P, P);
    for (size_t i = 0; i < P.size(); ++i)
      for (size_t j = 0; j < P.size(); ++j) REQUIRE(P2[i][j] == F.mul(24, P[i][j]));
  }
}

TEST_CASE("semi-invariants two ways") {
  SymModule S2(2, 7);
  auto a = semi_invariants(S2);
  auto b = semi_invariants_direct(S2);
  CHECK(a == b);
  for (const auto& v : a) {
    Vec s = S2.act(v, Mat3::diag(-1, -1, 1));
    CHECK(s == v);
  }
  std::mt19937_64 rng(7);
  for (int t = 0; t < 6; ++t) {
    const u32 p = std::array<u32, 4>{5, 7, 11, 13}[t % 4];
    auto V = random_module(rng, p);
    CHECK(semi_invariants(*V) == semi_invariants_direct(*V));
  }
}

TEST_CASE("trivial module") {
  SymModule triv(0, 7);
  CHECK(semi_invariants(triv).empty());
  auto k = h_kernel(triv, {Vec{1}});
  CHECK(k.empty());
  auto H = homology_space(7, 1, Weight{0, 0, 0}, Character());
  CHECK(H.dim() == 0);
}

TEST_CASE("p at most 3 is unsupported") {
  SymModule s(2, 3);
  try {
    semi_invariants(s);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Unsupported);
  }
  CHECK_THROWS_AS(homology_space(3, 2, Weight{1, 0, 0}, Character()), Error);
  CHECK_THROWS_AS(homology_space(7, 7, Weight{1, 0, 0}, Character()), Error);
  CHECK_THROWS_AS(homology_space(7, 1, Weight{9, 0, 0}, Character()), Error);
}

TEST_CASE("echelon accumulator against dense elimination") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 12; ++t) {
    const u32 p = std::array<u32, 4>{5, 7, 11, 13}[t % 4];
    const size_t c = 20 + rng() % 60, r = 10 + rng() % 80, rk = 1 + rng() % c;
    // Random rank-deficient matrix: product of r x rk and rk x c.
    const PrimeField F(p);
    Dense A(r), B(rk);
    for (auto& x : A) x = random_vec(rng, rk, p);
    for (auto& x : B) x = random_vec(rng, c, p);
    Dense M = linalg::matmul(F, A, B);
    EchelonAccumulator::Options opt;
    opt.panel_rows = 1 + rng() % 9;
    EchelonAccumulator acc(p, c, opt);
    std::vector<double> buf;
    for (size_t i = 0; i < r;) {
      const size_t n = std::min<size_t>(1 + rng() % 13, r - i);
      buf.clear();
      for (size_t k = 0; k < n; ++k) buf.insert(buf.end(), M[i + k].begin(), M[i + k].end());
      acc.add_rows(buf, n);
      i += n;
    }
    CHECK(acc.rank() == linalg::rank(F, M));
    CHECK(acc.kernel_dim() == c - acc.rank());
    auto piv = acc.pivots();
    CHECK(std::set<size_t>(piv.begin(), piv.end()).size() == piv.size());
    CHECK(acc.kernel() == linalg::right_kernel(F, M, c));
  }
}

TEST_CASE("disk spill gives the same kernel") {
  const auto dir = (std::filesystem::temp_directory_path() / "sl3_spill_test").string();
  std::mt19937_64 rng(5);
  const u32 p = 13;
  const size_t c = 70;
  const PrimeField F(p);
  Dense M;
  for (int i = 0; i < 60; ++i) M.push_back(random_vec(rng, c, p));
  EchelonAccumulator mem(p, c);
  EchelonAccumulator::Options opt;
  opt.panel_rows = 4;
  opt.resident_rows = 8;
  opt.spill_dir = dir;
  {
    EchelonAccumulator disk(p, c, opt);
    for (const auto& row : M) {
      mem.add_row(row);
      disk.add_row(row);
    }
    CHECK(disk.spilled_blocks() > 0);
    CHECK(std::filesystem::exists(dir + "/manifest.txt"));
    CHECK(disk.rank() == mem.rank());
    CHECK(disk.pivots() == mem.pivots());
    CHECK(disk.kernel() == mem.kernel());
  }
  CHECK_FALSE(std::filesystem::exists(dir + "/manifest.txt"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("streaming h kernel equals dense oracle") {
  std::mt19937_64 rng(2024);
  const auto dir = (std::filesystem::temp_directory_path() / "sl3_stream_test").string();
  int restarts = 0;
  for (int t = 0; t < 24; ++t) {
    const u32 p = std::array<u32, 4>{5, 7, 11, 13}[t % 4];
    auto V = random_module(rng, p);
    std::vector<Vec> basis;
    if (t % 2 == 0) {
      basis = semi_invariants(*V);
    } else {
      const size_t c = 5 + rng() % 40;
      for (size_t j = 0; j < c; ++j) basis.push_back(random_vec(rng, V->dim(), p));
    }
    if (basis.empty()) continue;
    auto dense = h_kernel_dense(*V, basis);
    HomologyOptions plain;
    plain.restart = false;
    plain.batch_rows = 1 + rng() % 40;
    CHECK(h_kernel(*V, basis, plain) == dense);
    HomologyOptions eager;
    eager.restart_fraction = 0.5;
    eager.restart_min = 1;
    eager.batch_rows = 1 + rng() % 20;
    eager.panel_rows = 1 + rng() % 8;
    if (t % 3 == 0) {
      eager.resident_rows = 4;
      eager.spill_dir = dir;
    }
    std::vector<std::string> log;
    eager.log = [&](const std::string& s) { log.push_back(s); };
    CHECK(h_kernel(*V, basis, eager) == dense);
    for (const auto& s : log) restarts += s.rfind("restart", 0) == 0;
  }
  CHECK(restarts > 0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("homology of a level 4 module") {
  HomologyReport rep;
  auto H = homology_space(37, 4, Weight{16, 0, 0}, Character(), {}, &rep);
  CHECK(H.module().dim() == 4284);
  CHECK(H.dim() == 15);
  // Semi-invariants make up about 1/24 of the module.
  CHECK(rep.semi_dim * 24 > 4284 * 9 / 10);
  CHECK(rep.semi_dim * 24 < 4284 * 11 / 10);
  for (size_t l = 0; l < H.dim(); ++l) {
    CHECK(satisfies_conditions(H.module(), H.vector(l)));
    for (size_t m = 0; m < H.dim(); ++m) CHECK(H.vector(m)[H.distinguished(l)] == (l == m ? 1u : 0u));
  }
  HomologyOptions noreset;
  noreset.restart = false;
  auto H2 = homology_space(37, 4, Weight{16, 0, 0}, Character(), noreset);
  CHECK(H2.basis() == H.basis());
  CHECK(H2.distinguished() == H.distinguished());
  auto H3 = homology_space(37, 4, Weight{16, 0, 0}, Character());
  CHECK(H3.basis() == H.basis());
}

TEST_CASE("homology with a nebentype") {
  auto H = homology_space(11, 31, Weight{4, 2, 1}, Character::parse("eps31"));
  CHECK(H.dim() > 0);
  CHECK(H.det_twist() == 1);
  for (size_t l = 0; l < H.dim(); ++l) CHECK(satisfies_conditions(H.module(), H.vector(l)));
  HomologyOptions noreset;
  noreset.restart = false;
  CHECK(homology_space(11, 31, Weight{4, 2, 1}, Character::parse("eps31"), noreset).basis() == H.basis());
}

TEST_CASE("worker count does not change the basis") {
  const Weight w{4, 2, 1};
  const Character eps = Character::parse("eps31");
  auto H1 = homology_space(11, 31, w, eps);
  for (size_t workers : {2u, 5u}) {
    HomologyOptions opt;
    opt.workers = workers;
    opt.batch_rows = 97;
    auto H = homology_space(11, 31, w, eps, opt);
    CHECK(H.basis() == H1.basis());
    CHECK(H.distinguished() == H1.distinguished());
  }
}

TEST_CASE("homology cache round trip") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "sl3_test_homology_cache";
  fs::remove_all(dir);
  HomologyCache cache(dir.string());
  const Weight w{4, 2, 1};
  const Character eps = Character::parse("eps31");
  CHECK_FALSE(cache.load(11, 31, w, eps).has_value());
  auto H = homology_space(11, 31, w, eps);
  {
    CacheLock lock(dir.string());
    cache.store(H);
  }
  CHECK(fs::path(cache.path_for(11, 31, w, eps)).filename() == "11_31_4-2-1_eps31.bin");
  auto G = cache.load(11, 31, w, eps);
  REQUIRE(G.has_value());
  CHECK(G->basis() == H.basis());
  CHECK(G->distinguished() == H.distinguished());
  CHECK(G->module().dim() == H.module().dim());
  CHECK_FALSE(cache.load(11, 31, Weight{4, 2, 0}, eps).has_value());

  auto entries = cache_list(dir.string());
  REQUIRE(entries.size() == 1);
  CHECK(entries[0].kind == "homology");

  // A damaged header is a miss, so the space is recomputed.
  {
    std::fstream f(cache.path_for(11, 31, w, eps), std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(0);
    f.write("XXXXXXXX", 8);
  }
  CHECK_FALSE(cache.load(11, 31, w, eps).has_value());
  CHECK(cache_clear(dir.string()) == 1);
  CHECK(cache_list(dir.string()).empty());
  fs::remove_all(dir);
}
