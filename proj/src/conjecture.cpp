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

#include "conjecture.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

namespace sl3 {

namespace {

i64 floor_mod(i64 x, i64 m) {
  const i64 r = x % m;
  return r < 0 ? r + m : r;
}

i64 ipow(i64 b, int e) {
  i64 r = 1;
  while (e-- > 0) r *= b;
  return r;
}

Tuple to_tuple(const Weight& w) { return {w.a, w.b, w.c}; }
Weight to_weight(const Tuple& t) {
  require(t.size() == 3, "weights are triples");
  return {static_cast<int>(t[0]), static_cast<int>(t[1]), static_cast<int>(t[2])};
}

Character times(const Character& a, const Character& b) {
  if (a.is_trivial()) return b;
  if (b.is_trivial()) return a;
  return Character::parse(a.name() + "*" + b.name());
}

}  // namespace

bool is_p_restricted(const Tuple& b, u32 p) {
  if (b.empty()) return false;
  const i64 q = p;
  for (size_t i = 0; i + 1 < b.size(); ++i) {
    const i64 d = b[i] - b[i + 1];
    if (d < 0 || d > q - 1) return false;
  }
  return b.back() >= 0 && b.back() < q - 1;
}

std::vector<Tuple> restrict_prime(const Tuple& t, u32 p) {
  require(p >= 2 && !t.empty(), "restrict_prime needs p >= 2 and a nonempty tuple");
  const i64 q = static_cast<i64>(p) - 1;
  // Last entry is forced; each gap is forced unless it is 0 mod p-1.
  std::vector<Tuple> out{{floor_mod(t.back(), q)}};
  for (size_t k = t.size() - 1; k-- > 0;) {
    const i64 r = floor_mod(t[k] - t[k + 1], q);
    std::vector<Tuple> next;
    for (const auto& tail : out) {
      for (i64 gap : r == 0 ? std::vector<i64>{0, q} : std::vector<i64>{r}) {
        Tuple u{tail.front() + gap};
        u.insert(u.end(), tail.begin(), tail.end());
        next.push_back(std::move(u));
      }
    }
    out = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Weight> restrict_prime(const Weight& w, u32 p) {
  std::vector<Weight> out;
  for (const auto& t : restrict_prime(to_tuple(w), p)) out.push_back(to_weight(t));
  return out;
}

std::vector<Tuple> base_p_expansions(i64 m, int d, u32 p) {
  require(d >= 1 && d <= 3, "niveau must be 1, 2 or 3");
  const i64 modulus = ipow(p, d) - 1;
  const i64 rep = (modulus) / (static_cast<i64>(p) - 1);  // 1 + p + ... + p^{d-1}
  const i64 target = floor_mod(m, modulus);
  std::vector<Tuple> out;
  for (i64 last = 0; last < static_cast<i64>(p) - 1; ++last) {
    const i64 rest = target - last * rep;  // sum_{i<d} e_i p^{i-1}, e_i in [0, p-1]
    if (rest < 0) break;
    i64 r = rest;
    Tuple a(d);
    for (int i = 0; i + 1 < d; ++i) {
      a[i] = last + r % p;
      r /= p;
    }
    a[d - 1] = last;
    if (r == 0) out.push_back(a);
  }
  return out;
}

int InertiaSpec::n() const {
  int s = 0;
  for (const auto& b : blocks) s += b.d;
  return s;
}

LeviShape LeviShape::diagonal(int n) {
  LeviShape l;
  for (int i = 1; i <= n; ++i) l.blocks.push_back({i});
  return l;
}

LeviShape LeviShape::full(int n) {
  LeviShape l;
  l.blocks.emplace_back();
  for (int i = 1; i <= n; ++i) l.blocks[0].push_back(i);
  return l;
}

LeviShape LeviShape::parse(const std::string& s) {
  LeviShape l;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, '|')) {
    std::vector<int> b;
    for (char ch : part) {
      require(ch >= '1' && ch <= '9', "cannot parse Levi shape '" + s + "'");
      b.push_back(ch - '0');
    }
    require(!b.empty(), "empty Levi block in '" + s + "'");
    std::sort(b.begin(), b.end());
    l.blocks.push_back(b);
  }
  std::vector<int> all;
  for (const auto& b : l.blocks) all.insert(all.end(), b.begin(), b.end());
  std::sort(all.begin(), all.end());
  for (size_t i = 0; i < all.size(); ++i)
    require(all[i] == static_cast<int>(i) + 1, "Levi blocks must partition 1..n in '" + s + "'");
  return l;
}

std::string LeviShape::name() const {
  std::string s;
  for (size_t i = 0; i < blocks.size(); ++i) {
    if (i) s += '|';
    for (int x : blocks[i]) s += std::to_string(x);
  }
  return s;
}

int LeviShape::n() const {
  int s = 0;
  for (const auto& b : blocks) s += static_cast<int>(b.size());
  return s;
}

namespace {

// Exponent sets of the characters of a niveau block: {m p^j mod p^d - 1}.
std::set<i64> character_orbit(const NiveauBlock& b, u32 p) {
  const i64 modulus = ipow(p, b.d) - 1;
  std::set<i64> s;
  i64 m = floor_mod(b.m, modulus);
  for (int j = 0; j < b.d; ++j) {
    s.insert(m);
    m = m * p % modulus;
  }
  return s;
}

// All ways to place blocks (by size) into the slots of one Levi block, each
// block receiving an increasing list of positions.
void placements(const std::vector<int>& slots, const std::vector<int>& sizes, size_t k, std::vector<bool>& used,
                std::vector<std::vector<int>>& cur, std::vector<std::vector<std::vector<int>>>& out) {
  if (k == sizes.size()) {
    out.push_back(cur);
    return;
  }
  const int need = sizes[k];
  std::vector<int> free;
  for (size_t i = 0; i < slots.size(); ++i)
    if (!used[i]) free.push_back(static_cast<int>(i));
  const size_t f = free.size();
  std::vector<bool> pick(f, false);
  std::fill(pick.begin(), pick.begin() + need, true);
  do {
    std::vector<int> pos;
    for (size_t i = 0; i < f; ++i)
      if (pick[i]) {
        pos.push_back(slots[free[i]]);
        used[free[i]] = true;
      }
    cur.push_back(pos);
    placements(slots, sizes, k + 1, used, cur, out);
    cur.pop_back();
    for (size_t i = 0; i < f; ++i)
      if (pick[i]) used[free[i]] = false;
  } while (std::prev_permutation(pick.begin(), pick.end()));
}

// Tuples for one assignment of niveau blocks to Levi blocks.
void tuples_for(const InertiaSpec& spec, const LeviShape& levi, const std::vector<int>& assign,
                const std::vector<std::vector<Tuple>>& values, std::set<Tuple>& out) {
  struct Group {
    std::vector<size_t> members;
    std::vector<std::vector<std::vector<int>>> options;
  };
  std::vector<Group> groups(levi.blocks.size());
  for (size_t i = 0; i < spec.blocks.size(); ++i) groups[assign[i]].members.push_back(i);
  for (size_t j = 0; j < groups.size(); ++j) {
    auto& g = groups[j];
    bool wild = false;
    for (size_t i : g.members) wild = wild || spec.blocks[i].wild;
    if (wild) {
      std::vector<std::vector<int>> given;
      for (size_t i : g.members) {
        auto pos = spec.blocks[i].positions;
        std::sort(pos.begin(), pos.end());
        given.push_back(pos);
      }
      g.options.push_back(given);
      continue;
    }
    std::vector<int> sizes;
    int total = 0;
    for (size_t i : g.members) {
      sizes.push_back(spec.blocks[i].d);
      total += spec.blocks[i].d;
    }
    if (total != static_cast<int>(levi.blocks[j].size())) return;
    std::vector<bool> used(levi.blocks[j].size(), false);
    std::vector<std::vector<int>> cur;
    placements(levi.blocks[j], sizes, 0, used, cur, g.options);
  }
  for (const auto& v : values)
    if (v.empty()) return;

  // Odometer over (placement per Levi block) x (value per niveau block).
  const int n = spec.n();
  std::vector<size_t> pl(groups.size(), 0), val(spec.blocks.size(), 0);
  for (;;) {
    Tuple t(n, 0);
    for (size_t j = 0; j < groups.size(); ++j) {
      const auto& opt = groups[j].options[pl[j]];
      for (size_t r = 0; r < groups[j].members.size(); ++r) {
        const size_t i = groups[j].members[r];
        const Tuple& v = values[i][val[i]];
        for (size_t s = 0; s < v.size(); ++s) t[opt[r][s] - 1] = v[s];
      }
    }
    out.insert(t);
    size_t k = 0;
    for (; k < val.size(); ++k) {
      if (++val[k] < values[k].size()) break;
      val[k] = 0;
    }
    if (k < val.size()) continue;
    for (k = 0; k < pl.size(); ++k) {
      if (++pl[k] < groups[k].options.size()) break;
      pl[k] = 0;
    }
    if (k == pl.size()) break;
  }
}

}  // namespace

std::set<Tuple> derived_tuples(const InertiaSpec& spec, const LeviShape& levi) {
  const int n = spec.n();
  require(n >= 1, "inertia data has no blocks");
  require(levi.n() == n, "Levi shape and inertia data have different sizes");
  std::vector<int> owner(n + 1, -1);
  for (size_t i = 0; i < spec.blocks.size(); ++i) {
    const auto& b = spec.blocks[i];
    require(b.d >= 1 && b.d <= 3, "niveau must be 1, 2 or 3");
    require(static_cast<int>(b.positions.size()) == b.d, "a niveau d block occupies d positions");
    for (int x : b.positions) {
      require(x >= 1 && x <= n && owner[x] < 0, "niveau block positions must partition 1..n");
      owner[x] = static_cast<int>(i);
    }
  }
  std::vector<int> levi_of(n + 1, -1);
  for (size_t j = 0; j < levi.blocks.size(); ++j)
    for (int x : levi.blocks[j]) levi_of[x] = static_cast<int>(j);

  bool any_wild = false;
  for (const auto& b : spec.blocks) any_wild = any_wild || b.wild;
  if (any_wild) {
    for (size_t i = 0; i < spec.blocks.size(); ++i)
      for (size_t j = i + 1; j < spec.blocks.size(); ++j)
        if (spec.blocks[i].d == spec.blocks[j].d &&
            character_orbit(spec.blocks[i], spec.p) == character_orbit(spec.blocks[j], spec.p))
          fail(ErrorKind::Unsupported,
               "wild ramification with repeated niveau collections needs the full filtration analysis");
  }

  // Per niveau block: the decreasing d-tuples from its conjugate exponents.
  std::vector<std::vector<Tuple>> values(spec.blocks.size());
  for (size_t i = 0; i < spec.blocks.size(); ++i) {
    std::set<Tuple> vs;
    for (i64 m : character_orbit(spec.blocks[i], spec.p))
      for (auto a : base_p_expansions(m, spec.blocks[i].d, spec.p)) {
        std::sort(a.rbegin(), a.rend());
        vs.insert(a);
      }
    values[i].assign(vs.begin(), vs.end());
  }

  std::set<Tuple> out;
  std::vector<int> assign(spec.blocks.size(), -1);
  bool fits = true;
  for (size_t i = 0; i < spec.blocks.size(); ++i) {
    assign[i] = levi_of[spec.blocks[i].positions.front()];
    for (int x : spec.blocks[i].positions) fits = fits && levi_of[x] == assign[i];
  }
  if (fits) {
    tuples_for(spec, levi, assign, values, out);
    return out;
  }
  // Positions that cross the Levi blocks only fix the niveau data: refit the
  // blocks into the Levi blocks by size in every possible way.
  require(!any_wild, "wild niveau blocks must sit inside the Levi blocks");
  std::vector<int> room;
  for (const auto& b : levi.blocks) room.push_back(static_cast<int>(b.size()));
  std::function<void(size_t)> refit = [&](size_t i) {
    if (i == spec.blocks.size()) {
      tuples_for(spec, levi, assign, values, out);
      return;
    }
    for (size_t j = 0; j < room.size(); ++j) {
      if (room[j] < spec.blocks[i].d) continue;
      room[j] -= spec.blocks[i].d;
      assign[i] = static_cast<int>(j);
      refit(i + 1);
      room[j] += spec.blocks[i].d;
    }
  };
  refit(0);
  return out;
}

ParityResult strict_parity(const std::vector<int>& signs, const LeviShape& levi) {
  const int n = levi.n();
  if (static_cast<int>(signs.size()) != n) return {false, "expected one conjugation sign per position"};
  for (int s : signs)
    if (s != 1 && s != -1) return {false, "conjugation signs must be +1 or -1"};
  for (int lead : {1, -1}) {
    bool ok = true;
    for (const auto& b : levi.blocks) {
      int want = 0, have = 0;
      for (int x : b) {
        want += (x % 2 == 1) ? lead : -lead;
        have += signs[x - 1];
      }
      ok = ok && want == have;
    }
    if (ok) return {true, "conjugation is alternating within Levi " + levi.name()};
  }
  return {false, "conjugation cannot be made alternating within Levi " + levi.name()};
}

std::string WeightPrediction::label() const {
  return candidates.front().label() + (ambiguous() ? "′" : "");
}

std::string WeightPrediction::display() const {
  return candidates.front().display() + (ambiguous() ? "′" : "");
}

std::vector<WeightPrediction> predicted_weights(const InertiaSpec& spec, const std::vector<LeviShape>& levis,
                                                const std::vector<int>& signs) {
  require(!levis.empty(), "at least one Levi shape is needed");
  std::vector<WeightPrediction> out;
  std::vector<std::string> reasons;
  bool any_parity = false;
  for (const auto& levi : levis) {
    const auto par = strict_parity(signs, levi);
    if (!par.ok) {
      reasons.push_back(par.reason);
      continue;
    }
    any_parity = true;
    const int n = levi.n();
    for (const auto& t : derived_tuples(spec, levi)) {
      require(n == 3, "weight labels are defined for n = 3");
      WeightPrediction w;
      w.derived = t;
      w.raw = {static_cast<int>(t[0] - 2), static_cast<int>(t[1] - 1), static_cast<int>(t[2])};
      w.candidates = restrict_prime(w.raw, spec.p);
      w.levi = levi.name();
      const bool seen = std::any_of(out.begin(), out.end(),
                                    [&](const WeightPrediction& o) { return o.candidates == w.candidates; });
      if (!seen) out.push_back(std::move(w));
    }
  }
  if (!any_parity) {
    std::string msg = "strict parity fails:";
    for (const auto& r : reasons) msg += " " + r + ";";
    fail(ErrorKind::InvalidArgument, msg);
  }
  return out;
}

bool matches_label(const WeightPrediction& w, const std::string& label, u32 p) {
  std::string s = label;
  bool primed = false;
  for (const std::string mark : {"′", "'"}) {
    const auto at = s.find(mark);
    if (at != std::string::npos) {
      s.erase(at, mark.size());
      primed = true;
    }
  }
  const Weight parsed = Weight::parse(s);
  if (primed) return restrict_prime(parsed, p) == w.candidates;
  return std::find(w.candidates.begin(), w.candidates.end(), parsed) != w.candidates.end();
}

std::vector<Weight> twist_weights(const std::vector<Weight>& ws, int s, u32 p) {
  const int q = static_cast<int>(p) - 1;
  std::vector<Weight> out;
  for (const auto& w : ws) {
    const int c = static_cast<int>(floor_mod(w.c + s, q));
    const int shift = c - w.c;
    out.push_back({w.a + shift, w.b + shift, c});
  }
  return out;
}

std::set<Tuple> twist_tuples(const std::set<Tuple>& ts, i64 s) {
  std::set<Tuple> out;
  for (auto t : ts) {
    for (auto& x : t) x += s;
    out.insert(t);
  }
  return out;
}

Weight extra_weight(const Weight& w, u32 p) {
  const int q = static_cast<int>(p);
  require(w.a - w.c < q - 2, "extra weight needs a - c < p - 2");
  if (w.a >= q - 2) return {q - 2 + w.c, w.b, w.a - (q - 2)};
  return {2 * (q - 2) + w.c + 1, w.b + (q - 1), w.a + 1};
}

Tuple dual_tuple(const Tuple& t) {
  Tuple d(t.rbegin(), t.rend());
  for (auto& x : d) x = -x;
  return d;
}

std::vector<Weight> dual_weight(const Weight& w, u32 p) { return restrict_prime(Weight{-w.c, -w.b, -w.a}, p); }

int fixed_dim_of_involution(int trace) {
  require(trace == 3 || trace == 1 || trace == -1 || trace == -3, "involution trace must be odd with |t| <= 3");
  return (3 + trace) / 2;
}

RamificationData twist_quadratic(const RamificationData& r, u32 q) {
  RamificationData out = r;
  bool found = false;
  for (auto& x : out.primes) {
    if (x.q != q) continue;
    found = true;
    require(x.inertia_order == 2 && x.wild_exponent == 0,
            "quadratic twists are modelled only for inertia generated by an involution");
    x.fixed_dim = 3 - x.fixed_dim;
  }
  if (!found) out.primes.push_back({q, 2, 0, 0});
  // det(rho (x) eps) = det(rho) eps^3.
  out.det_eps = times(out.det_eps, Character::legendre(q));
  return out;
}

LevelNebentype level_nebentype(const RamificationData& r) {
  LevelNebentype out;
  for (const auto& x : r.primes) {
    require(x.q >= 2 && is_prime(x.q), "ramified primes must be prime");
    require(x.fixed_dim >= 0 && x.fixed_dim <= 3, "fixed space dimension must be in 0..3");
    require(x.wild_exponent >= 0, "wild conductor exponent must be nonnegative");
    for (int e = 0; e < (3 - x.fixed_dim) + x.wild_exponent; ++e) out.N *= x.q;
  }
  for (u32 q : r.det_eps.factors()) {
    const u32 prime = q == 4 ? 2 : q;
    require(out.N % prime == 0, "nebentype is ramified at a prime outside the level");
  }
  out.eps = r.det_eps;
  return out;
}

}  // namespace sl3
