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

#include "selftest.hpp"

#include <functional>
#include <random>

#include "galois.hpp"

namespace sl3 {

namespace {

using Check = std::function<std::string()>;  // empty string: passed

std::string field_laws() {
  std::mt19937_64 rng(7);
  for (u32 p : {5u, 7u, 11u}) {
    for (int k = 1; k <= 3; ++k) {
      ExtField E(p, k);
      u64 q = 1;
      for (int i = 0; i < k; ++i) q *= p;
      for (int t = 0; t < 50; ++t) {
        const auto a = E.from_index(rng() % q), b = E.from_index(rng() % q), c = E.from_index(rng() % q);
        if (!(E.mul(a, E.add(b, c)) == E.add(E.mul(a, b), E.mul(a, c)))) return "distributivity in " + E.header();
        if (!(E.pow(a, q) == a)) return "a^q != a in " + E.header();
        if (!E.in_base(a) || k == 1) continue;
        if (!(E.frobenius(a) == a)) return "base element moved by Frobenius";
      }
    }
  }
  return {};
}

std::string group_tables() {
  for (const auto& g : group_names()) group_data(g).validate();
  return {};
}

std::string restricted_weights() {
  for (u32 p : {5u, 7u, 11u}) {
    for (int a = 0; a < 2 * static_cast<int>(p); ++a)
      for (int b = 0; b <= a; ++b) {
        const Weight w{a, b, 0};
        for (const auto& r : restrict_prime(w, p))
          if (!r.p_restricted(p)) return "restrict_prime gave " + r.label();
      }
  }
  return {};
}

std::string twist_round_trip() {
  const u32 p = 11;
  for (int a = 0; a < 10; ++a)
    for (int b = 0; b <= a; ++b) {
      const std::vector<Weight> ws = {Weight{a, b, 0}};
      if (twist_weights(twist_weights(ws, 3, p), -3, p) != ws)
        return "twist round trip at " + ws[0].label();
    }
  return {};
}

std::string homology_invariants() {
  auto H = homology_space(7, 1, Weight{0, 0, 0}, Character());
  if (H.dim() != 0) return "H(7,1,F(0,0,0)) has dimension " + std::to_string(H.dim());
  const Weight w{4, 2, 1};
  const Character eps = Character::parse("eps31");
  auto A = homology_space(11, 31, w, eps);
  HomologyOptions opt;
  opt.restart = false;
  opt.workers = 3;
  opt.batch_rows = 113;
  auto B = homology_space(11, 31, w, eps, opt);
  if (A.basis() != B.basis()) return "basis depends on restart or worker count";
  for (size_t l = 0; l < A.dim(); ++l)
    if (!satisfies_conditions(A.module(), A.vector(l))) return "basis vector fails the defining conditions";
  return {};
}

std::string prime_factorization() {
  // x^3 - x - 1 has discriminant -23.
  const ZPoly f = parse_zpoly("x^3 - x - 1");
  for (u32 ell : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u}) {
    const auto d = factor_degrees(f, ell);
    const bool split2 = d.size() == 2;  // 2 + 1
    if (split2 != (quad_char(23, ell) == -1)) return "factor degrees disagree with (ell|23) at " + std::to_string(ell);
  }
  return {};
}

}  // namespace

std::vector<SelfCheck> run_selftest() {
  const std::vector<std::pair<std::string, Check>> checks = {
      {"field laws", field_laws},
      {"group tables", group_tables},
      {"restricted weights", restricted_weights},
      {"twist round trip", twist_round_trip},
      {"cubic factorization", prime_factorization},
      {"homology invariants", homology_invariants},
  };
  std::vector<SelfCheck> out;
  for (const auto& [name, fn] : checks) {
    SelfCheck c{name, false, {}};
    try {
      c.detail = fn();
      c.ok = c.detail.empty();
    } catch (const std::exception& e) {
      c.detail = e.what();
    }
    out.push_back(c);
  }
  return out;
}

}  // namespace sl3
