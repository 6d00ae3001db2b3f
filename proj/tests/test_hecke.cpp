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
#include <random>

#include "error.hpp"
#include "hecke.hpp"
#include "linalg.hpp"

using namespace sl3;
namespace fs = std::filesystem;

namespace {

// a b^{-1} integral, det 1, first row (*,0,0) mod N.
bool coset_oracle(const Mat3& a, const Mat3& b, u32 N) {
  const i64 d = det(b);
  if (det(a) != d) return false;
  const Mat3 x = a * adj(b);
  Mat3 q;
  for (int i = 0; i < 9; ++i) {
    if (x.a[i] % d != 0) return false;
    q.a[i] = x.a[i] / d;
  }
  return det(q) == 1 && q(0, 1) % static_cast<i64>(N) == 0 && q(0, 2) % static_cast<i64>(N) == 0;
}

std::vector<Vec> matmul(const PrimeField& F, const std::vector<Vec>& A, const std::vector<Vec>& B) {
  const size_t n = A.size();
  std::vector<Vec> C(n, Vec(n, 0));
  for (size_t i = 0; i < n; ++i)
    for (size_t k = 0; k < n; ++k)
      for (size_t j = 0; j < n; ++j) C[i][j] = F.add(C[i][j], F.mul(A[i][k], B[k][j]));
  return C;
}

const HomologySpace& level4_space() {
  static const HomologySpace H = homology_space(37, 4, Weight{16, 0, 0}, Character());
  return H;
}

}  // namespace

TEST_CASE("coset representatives") {
  for (u32 ell : {2u, 3u, 5u, 7u}) {
    for (int k : {1, 2}) {
      for (u32 N : {1u, 9u, 31u}) {
        if (N % ell == 0) continue;
        const auto c = hecke_cosets(ell, k, N, 11);
        REQUIRE(c.reps.size() == ell * ell + ell + 1);
        const i64 dk = k == 1 ? ell : static_cast<i64>(ell) * ell;
        for (const auto& b : c.reps) {
          CHECK(det(b) == dk);
          CHECK(b(0, 1) % static_cast<i64>(N) == 0);
          CHECK(b(0, 2) % static_cast<i64>(N) == 0);
        }
        for (size_t i = 0; i < c.reps.size(); ++i)
          for (size_t j = 0; j < c.reps.size(); ++j) {
            CHECK(coset_oracle(c.reps[i], c.reps[j], N) == (i == j));
            CHECK(same_coset(c.reps[i], c.reps[j], N) == (i == j));
          }
      }
    }
  }
  CHECK(hecke_cosets(47, 1, 4, 37).reps.size() == 2257);
  CHECK_THROWS_AS(hecke_cosets(2, 1, 4, 37), Error);
  CHECK_THROWS_AS(hecke_cosets(37, 1, 4, 37), Error);
  CHECK_THROWS_AS(hecke_cosets(4, 1, 1, 37), Error);
  CHECK_THROWS_AS(hecke_cosets(3, 3, 1, 37), Error);
}

TEST_CASE("symbol reduction") {
  const Mat3 u = Mat3::rows({2, 1, 0}, {1, 1, 0}, {3, -4, 1});
  auto one = reduce_symbol(u);
  REQUIRE(one.size() == 1);
  CHECK(one[0].m == u);
  CHECK(one[0].sign == 1);
  CHECK_THROWS_AS(reduce_symbol(Mat3::rows({1, 2, 3}, {2, 4, 6}, {0, 0, 1})), Error);

  std::mt19937_64 rng(7);
  for (int t = 0; t < 300; ++t) {
    Mat3 q;
    for (auto& x : q.a) x = static_cast<i64>(rng() % 19) - 9;
    if (det(q) == 0) continue;
    ReduceStats st;
    const auto terms = reduce_symbol(q, &st);
    CHECK(st.det_decreased);
    CHECK(!terms.empty());
    for (const auto& s : terms) CHECK(std::abs(det(s.m)) == 1);
  }
  // Symbols only see the lines spanned by the columns.
  const auto d2 = reduce_symbol(Mat3::diag(1, 1, 2));
  REQUIRE(d2.size() == 1);
  CHECK(d2[0].m == Mat3::identity());
  ReduceStats st;
  const auto skew = reduce_symbol(Mat3::rows({1, 0, 1}, {0, 1, 1}, {0, 0, 2}), &st);
  CHECK(st.det_decreased);
  CHECK(st.max_depth >= 1);
  for (const auto& s : skew) CHECK(std::abs(det(s.m)) == 1);
}

TEST_CASE("decomposition cache") {
  const fs::path dir = fs::temp_directory_path() / "sl3_test_symbols";
  fs::remove_all(dir);
  SymbolCache cache(dir.string());
  const auto fresh = hecke_operator(5, 2, 31, 11);
  const auto stored = hecke_operator(5, 2, 31, 11, &cache);
  REQUIRE(fs::exists(cache.path_for(hecke_cosets(5, 2, 31, 11))));
  const auto loaded = hecke_operator(5, 2, 31, 11, &cache);
  CHECK(stored.terms == fresh.terms);
  CHECK(loaded.terms == fresh.terms);
  CHECK(loaded.signs == fresh.signs);
  // A different operator must not hit the same entry.
  CHECK(cache.path_for(hecke_cosets(5, 1, 31, 11)) != cache.path_for(hecke_cosets(5, 2, 31, 11)));
  fs::remove_all(dir);
}

TEST_CASE("hecke operators on the zero space") {
  auto H = homology_space(7, 1, Weight{0, 0, 0}, Character());
  REQUIRE(H.dim() == 0);
  CHECK(hecke_matrix(H, hecke_operator(2, 1, 1, 7)).empty());
  CHECK_THROWS_AS(eigensystems(H), Error);
}

TEST_CASE("hecke operators commute and preserve the conditions") {
  const auto& H = level4_space();
  const PrimeField& F = H.module().field();
  const auto T3 = hecke_operator(3, 1, 4, 37);
  const auto T5 = hecke_operator(5, 1, 4, 37);
  const auto T32 = hecke_operator(3, 2, 4, 37);
  const auto A3 = hecke_matrix(H, T3), A5 = hecke_matrix(H, T5), A32 = hecke_matrix(H, T32);
  CHECK(matmul(F, A3, A5) == matmul(F, A5, A3));
  CHECK(matmul(F, A3, A32) == matmul(F, A32, A3));
  for (size_t l = 0; l < H.dim(); ++l) {
    const Vec img = hecke_image(H.module(), T3, H.vector(l));
    CHECK(satisfies_conditions(H.module(), img));
    // The image is recovered from its distinguished coordinates.
    Vec coords(H.dim());
    for (size_t m = 0; m < H.dim(); ++m) coords[m] = img[H.distinguished(m)];
    CHECK(combine_basis(H, coords) == img);
    for (size_t m = 0; m < H.dim(); ++m) CHECK(A3[l][m] == coords[m]);
  }
}

TEST_CASE("eigenvalues at small primes in level 4") {
  const auto& H = level4_space();
  EigenOptions opt;
  opt.ell_max = 13;
  const auto sys = eigensystems(H, opt);
  const EigenSystem* hit = nullptr;
  for (const auto& s : sys)
    if (s.degree == 1 && s.a.at(3)[0].c[0] == 2 && s.a.at(3)[1].c[0] == 24) hit = &s;
  REQUIRE(hit != nullptr);
  CHECK(hit->multiplicity == 1);
  const std::map<u32, std::pair<u32, u32>> expect = {{3, {2, 24}}, {5, {5, 22}}, {7, {6, 15}}, {11, {10, 26}},
                                                     {13, {13, 17}}};
  for (const auto& [ell, v] : expect) {
    CHECK(hit->a.at(ell)[0].c[0] == v.first);
    CHECK(hit->a.at(ell)[1].c[0] == v.second);
  }

  // Same eigenvalue from two different module coordinates.
  const ExtField E = hit->field();
  Vec coeffs(H.dim());
  for (size_t l = 0; l < H.dim(); ++l) coeffs[l] = hit->vector[l].c[0];
  const Vec f = combine_basis(H, coeffs);
  std::vector<size_t> support;
  for (size_t i = 0; i < f.size() && support.size() < 4; ++i)
    if (f[i]) support.push_back(i);
  REQUIRE(support.size() >= 2);
  for (u32 ell : {5u, 7u}) {
    const auto T = hecke_operator(ell, 2, 4, 37);
    const auto first = eigenvalue_at(H, E, hit->vector, T, support.front());
    for (size_t i : support) CHECK(eigenvalue_at(H, E, hit->vector, T, i) == first);
    CHECK(first == hit->a.at(ell)[1]);
  }
}

TEST_CASE("good primes") {
  CHECK(good_primes(20, 37, 4) == std::vector<u32>{3, 5, 7, 11, 13, 17, 19});
  CHECK(good_primes(13, 11, 31) == std::vector<u32>{2, 3, 5, 7, 13});
}
