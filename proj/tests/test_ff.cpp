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

#include <random>
#include <set>

#include "ff.hpp"

using namespace sl3;

TEST_CASE("prime field inverses") {
  CHECK(PrimeField(37).inv(2) == 19);
  CHECK(PrimeField(5).inv(4) == 4);
  CHECK(PrimeField(11).inv(1) == 1);
  CHECK_THROWS_AS(PrimeField(7).inv(0), Error);
  for (u32 p = 5; p <= 97; ++p) {
    if (!is_prime(p)) continue;
    PrimeField F(p);
    for (u32 x = 1; x < p; ++x) CHECK(F.mul(x, F.inv(x)) == 1);
  }
}

TEST_CASE("prime field rejects composites") {
  CHECK_THROWS_AS(PrimeField(9), Error);
  CHECK_THROWS_AS(PrimeField(1), Error);
}

TEST_CASE("primitive roots") {
  CHECK(PrimeField(7).primitive_root() == 3);
  CHECK(PrimeField(37).primitive_root() == 2);
  CHECK(PrimeField(11).primitive_root() == 2);
  PrimeField F(19);
  std::set<u32> seen;
  u32 g = F.primitive_root(), x = 1;
  for (int i = 0; i < 18; ++i) {
    seen.insert(x);
    x = F.mul(x, g);
  }
  CHECK(seen.size() == 18);
}

TEST_CASE("irreducibility and canonical moduli") {
  PrimeField F(7);
  CHECK(poly::is_irreducible(F, Poly{1, 0, 1}));       // X^2+1, -1 nonsquare mod 7
  CHECK_FALSE(poly::is_irreducible(F, Poly{6, 0, 1}));  // X^2-1
  Poly m2 = poly::smallest_irreducible(F, 2);
  CHECK(m2 == Poly{1, 0, 1});
  Poly m3 = poly::smallest_irreducible(F, 3);
  CHECK(poly::degree(m3) == 3);
  // No root in F_7 for a cubic irreducible.
  for (u32 x = 0; x < 7; ++x) CHECK(poly::eval(F, m3, x) != 0);
  // Every lexicographically smaller monic cubic is reducible.
  u64 idx = m3[0] + 7ull * m3[1] + 49ull * m3[2];
  for (u64 j = 0; j < idx; ++j) {
    Poly f{static_cast<u32>(j % 7), static_cast<u32>(j / 7 % 7), static_cast<u32>(j / 49), 1};
    CHECK_FALSE(poly::is_irreducible(F, f));
  }
}

TEST_CASE("polynomial division") {
  PrimeField F(11);
  Poly f{3, 1, 4, 1, 5}, g{9, 2, 6};
  Poly q, r;
  poly::divmod(F, f, g, q, r);
  CHECK(poly::add(F, poly::mul(F, q, g), r) == f);
  CHECK(poly::degree(r) < poly::degree(g));
  CHECK(poly::gcd(F, poly::mul(F, f, g), g) == poly::monic(F, g));
}

TEST_CASE("extension field axioms") {
  std::mt19937_64 rng(7);
  for (auto [p, k] : {std::pair<u32, int>{7, 2}, {7, 3}, {11, 2}, {5, 3}}) {
    ExtField E(p, k);
    auto rnd = [&] { return E.from_index(rng() % E.order()); };
    for (int t = 0; t < 200; ++t) {
      auto x = rnd(), y = rnd(), z = rnd();
      CHECK(E.add(x, y) == E.add(y, x));
      CHECK(E.mul(x, y) == E.mul(y, x));
      CHECK(E.mul(E.mul(x, y), z) == E.mul(x, E.mul(y, z)));
      CHECK(E.mul(x, E.add(y, z)) == E.add(E.mul(x, y), E.mul(x, z)));
      if (!E.is_zero(x)) CHECK(E.mul(x, E.inv(x)) == E.one());
      CHECK(E.frobenius(E.add(x, y)) == E.add(E.frobenius(x), E.frobenius(y)));
      CHECK(E.frobenius(E.mul(x, y)) == E.mul(E.frobenius(x), E.frobenius(y)));
      auto w = x;
      for (int i = 0; i < k; ++i) w = E.frobenius(w);
      CHECK(w == x);
    }
    for (u32 a = 0; a < p; ++a) CHECK(E.frobenius(E.from_base(a)) == E.from_base(a));
  }
}

TEST_CASE("frobenius on a primitive ninth root of unity") {
  ExtField E(7, 3);
  // Oracle: an element of order 342 raised to 38 has order 9.
  ExtField::Elem g{};
  for (u64 i = 1; i < E.order(); ++i) {
    g = E.from_index(i);
    if (E.mult_order(g) == E.order() - 1) break;
  }
  auto z = E.pow(g, 38);
  CHECK(E.mult_order(z) == 9);
  CHECK(E.frobenius(z) == E.pow(z, 7));
  CHECK(E.frobenius(E.frobenius(E.frobenius(z))) == z);
}

TEST_CASE("roots in extensions") {
  {
    ExtField E(5, 1);
    auto r = roots_in_ext(E, Poly{2, 1});  // X - 3
    REQUIRE(r.size() == 1);
    CHECK(r[0] == E.from_base(3));
  }
  {
    ExtField E(7, 2);
    auto r = roots_in_ext(E, Poly{1, 0, 1});
    REQUIRE(r.size() == 2);
    CHECK(E.add(r[0], r[1]) == E.zero());
    CHECK(E.mul(r[0], r[0]) == E.neg(E.one()));
  }
  {
    ExtField E(7, 3);
    Poly f(10, 0);
    f[0] = 6;
    f[9] = 1;
    auto r = roots_in_ext(E, f);
    CHECK(r.size() == 9);
    std::set<ExtField::Elem> distinct(r.begin(), r.end());
    CHECK(distinct.size() == 9);
  }
  {
    // Multiplicity: (X-1)^3 (X-2) over F_7.
    ExtField E(7, 1);
    PrimeField F(7);
    Poly f{1};
    for (u32 a : {1u, 1u, 1u, 2u}) f = poly::mul(F, f, Poly{F.neg(a), 1});
    auto r = roots_in_ext(E, f);
    CHECK(r.size() == 4);
    CHECK(std::count(r.begin(), r.end(), E.from_base(1)) == 3);
  }
}

TEST_CASE("serialization") {
  ExtField E(7, 2);
  CHECK(E.to_string(E.from_coeffs({3, 5})) == "[3,5]");
  CHECK(E.header() == "F_7^2 mod X^2 + 1");
}
