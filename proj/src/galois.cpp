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

#include "galois.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace sl3 {

extern const char* const kGroupTablesJson;

using Elem = ExtField::Elem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Integer polynomials.

ZPoly parse_zpoly(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += static_cast<char>(std::tolower(ch));
  require(!s.empty(), "empty polynomial");
  ZPoly f;
  size_t i = 0;
  auto number = [&](i64& out) {
    const size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == start) return false;
    out = std::stoll(s.substr(start, i - start));
    return true;
  };
  while (i < s.size()) {
    i64 sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    } else if (i != 0) {
      fail(ErrorKind::InvalidArgument, "bad polynomial near '" + s.substr(i) + "'");
    }
    i64 coef = 1;
    const bool has_coef = number(coef);
    int e = 0;
    if (i < s.size() && s[i] == '*') {
      require(has_coef, "bad polynomial: stray '*'");
      ++i;
    }
    if (i < s.size() && s[i] == 'x') {
      ++i;
      e = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        i64 ee = 0;
        require(number(ee), "bad polynomial: missing exponent");
        e = static_cast<int>(ee);
      }
    } else {
      require(has_coef, "bad polynomial: missing term");
    }
    if (static_cast<int>(f.size()) <= e) f.resize(e + 1, 0);
    f[e] += sign * coef;
  }
  while (!f.empty() && f.back() == 0) f.pop_back();
  return f;
}

std::string zpoly_to_string(const ZPoly& f) {
  std::ostringstream os;
  bool first = true;
  for (size_t k = f.size(); k-- > 0;) {
    const i64 c = f[k];
    if (c == 0) continue;
    const i64 a = c < 0 ? -c : c;
    if (first)
      os << (c < 0 ? "-" : "");
    else
      os << (c < 0 ? " - " : " + ");
    first = false;
    if (k == 0 || a != 1) os << a << (k ? "*" : "");
    if (k >= 1) os << "x";
    if (k >= 2) os << "^" << k;
  }
  return first ? "0" : os.str();
}

Poly reduce_zpoly(const ZPoly& f, const PrimeField& F) {
  Poly g(f.size());
  for (size_t i = 0; i < f.size(); ++i) g[i] = F.from_int(f[i]);
  poly::trim(g);
  return g;
}

std::vector<DegreeFactor> distinct_degree_factorization(const PrimeField& F, const Poly& f_in) {
  Poly f = poly::monic(F, f_in);
  std::vector<DegreeFactor> out;
  const Poly x = {0, 1};
  Poly h = poly::mod(F, x, f);
  for (int d = 1; 2 * d <= poly::degree(f); ++d) {
    h = poly::powmod(F, h, F.p(), f);
    const Poly g = poly::gcd(F, f, poly::sub(F, h, x));
    if (poly::degree(g) > 0) {
      out.push_back({d, g});
      Poly q, r;
      poly::divmod(F, f, g, q, r);
      f = q;
      h = poly::mod(F, h, f);
    }
  }
  if (poly::degree(f) > 0) out.push_back({poly::degree(f), f});
  return out;
}

std::vector<int> factor_degrees(const ZPoly& f, u32 ell) {
  require(!f.empty() && f.back() == 1, "polynomial must be monic");
  const PrimeField F(ell);
  const Poly g = reduce_zpoly(f, F);
  if (poly::degree(poly::gcd(F, g, poly::derivative(F, g))) > 0)
    fail(ErrorKind::InvalidArgument, "ramified: " + zpoly_to_string(f) + " is not squarefree mod " +
                                         std::to_string(ell));
  std::vector<int> degs;
  for (const auto& df : distinct_degree_factorization(F, g))
    for (int k = 0; k < poly::degree(df.product) / df.degree; ++k) degs.push_back(df.degree);
  std::sort(degs.rbegin(), degs.rend());
  return degs;
}

int quad_char(u32 q, u32 ell) {
  require(q > 2 && is_prime(q), "quadratic character needs an odd prime modulus");
  const u32 a = ell % q;
  require(a != 0, "quadratic character evaluated at its own modulus");
  return powmod_u64(a, (q - 1) / 2, q) == 1 ? 1 : -1;
}

// ---------------------------------------------------------------------------
// Character tables.

namespace {

// Arithmetic in Z[t]/(m), m monic.
CycVal cyc_reduce(CycVal a, const ZPoly& m) {
  const size_t n = m.size() - 1;
  for (size_t k = a.size(); k-- > n;) {
    const i64 c = a[k];
    if (c == 0) continue;
    for (size_t j = 0; j <= n; ++j) a[k - n + j] -= c * m[j];
  }
  a.resize(std::max<size_t>(n, 1), 0);
  return a;
}

CycVal cyc_mul(const CycVal& a, const CycVal& b, const ZPoly& m) {
  if (a.empty() || b.empty()) return {0};
  CycVal c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return cyc_reduce(c, m);
}

CycVal cyc_add(CycVal a, const CycVal& b) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (size_t i = 0; i < b.size(); ++i) a[i] += b[i];
  return a;
}

bool cyc_is(const CycVal& a, i64 v) {
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != (i == 0 ? v : 0)) return false;
  return !a.empty() || v == 0;
}

int lcm_of(const std::vector<int>& v) {
  int l = 1;
  for (int x : v) l = std::lcm(l, x);
  return l;
}

struct Tables {
  int version = 0;
  std::vector<GroupData> groups;
};

GroupData parse_group(const json& g) {
  GroupData d;
  d.name = g.at("name").get<std::string>();
  d.degree = g.at("degree").get<int>();
  d.order = g.at("order").get<u64>();
  d.irrational = g.at("irrational").get<ZPoly>();
  const auto& cls = g.at("classes");
  std::map<std::string, size_t> idx;
  for (size_t i = 0; i < cls.size(); ++i) idx[cls[i].at("name").get<std::string>()] = i;
  auto find = [&](const json& c, const char* key) {
    const auto it = idx.find(c.at(key).get<std::string>());
    require(it != idx.end(), "group " + d.name + ": unknown class in '" + key + "'");
    return it->second;
  };
  for (const auto& c : cls) {
    GroupClass k;
    k.name = c.at("name").get<std::string>();
    k.size = c.at("size").get<u64>();
    k.order = c.at("order").get<int>();
    k.cycle_type = c.at("cycle_type").get<std::vector<int>>();
    k.square = find(c, "square");
    k.cube = find(c, "cube");
    k.inverse = find(c, "inverse");
    d.classes.push_back(std::move(k));
  }
  for (const auto& ch : g.at("characters")) {
    GroupCharacter x;
    x.name = ch.at("name").get<std::string>();
    x.values = ch.at("values").get<std::vector<CycVal>>();
    d.characters.push_back(std::move(x));
  }
  return d;
}

const Tables& tables() {
  static Tables t;
  static std::once_flag once;
  std::call_once(once, [] {
    const json j = json::parse(kGroupTablesJson);
    t.version = j.value("version", 0);
    if (j.contains("groups"))
      for (const auto& g : j.at("groups")) {
        GroupData d = parse_group(g);
        d.validate();
        t.groups.push_back(std::move(d));
      }
  });
  return t;
}

}  // namespace

size_t GroupData::class_index(const std::string& n) const {
  for (size_t i = 0; i < classes.size(); ++i)
    if (classes[i].name == n) return i;
  fail(ErrorKind::InvalidArgument, "group " + name + " has no class '" + n + "'");
}

size_t GroupData::character_index(const std::string& n) const {
  for (size_t i = 0; i < characters.size(); ++i)
    if (characters[i].name == n) return i;
  fail(ErrorKind::InvalidArgument, "group " + name + " has no character '" + n + "'");
}

std::vector<size_t> GroupData::class_candidates(const std::vector<int>& cycle_type) const {
  std::vector<int> want = cycle_type;
  std::sort(want.rbegin(), want.rend());
  std::vector<size_t> out;
  for (size_t i = 0; i < classes.size(); ++i)
    if (classes[i].cycle_type == want) out.push_back(i);
  return out;
}

void GroupData::validate() const {
  const std::string where = "group " + name + ": ";
  require(!irrational.empty() && irrational.back() == 1, where + "table polynomial must be monic");
  require(!classes.empty() && classes[0].order == 1 && classes[0].size == 1, where + "first class must be the identity");
  require(characters.size() == classes.size(), where + "table is not square");
  u64 total = 0;
  for (const auto& c : classes) {
    total += c.size;
    require(order % c.size == 0 && order % c.order == 0, where + "class " + c.name + " is inconsistent with |G|");
    int sum = 0;
    for (int x : c.cycle_type) sum += x;
    require(sum == degree, where + "cycle type of " + c.name + " has the wrong degree");
    require(std::is_sorted(c.cycle_type.rbegin(), c.cycle_type.rend()), where + "cycle types must be decreasing");
    require(lcm_of(c.cycle_type) == c.order, where + "cycle type of " + c.name + " disagrees with its order");
    require(classes[c.square].order == c.order / std::gcd(c.order, 2), where + "bad square map at " + c.name);
    require(classes[c.cube].order == c.order / std::gcd(c.order, 3), where + "bad cube map at " + c.name);
    require(classes[c.inverse].order == c.order && classes[classes[c.inverse].inverse].name == c.name,
            where + "bad inverse map at " + c.name);
  }
  require(total == order, where + "class sizes do not sum to |G|");
  const i64 G = static_cast<i64>(order);
  for (size_t i = 0; i < characters.size(); ++i) {
    require(characters[i].values.size() == classes.size(), where + "character " + characters[i].name + " is short");
    for (size_t j = 0; j < characters.size(); ++j) {
      CycVal s = {0};
      for (size_t k = 0; k < classes.size(); ++k) {
        CycVal term = cyc_mul(characters[i].values[k], characters[j].values[classes[k].inverse], irrational);
        for (auto& x : term) x *= static_cast<i64>(classes[k].size);
        s = cyc_add(s, term);
      }
      require(cyc_is(cyc_reduce(s, irrational), i == j ? G : 0),
              where + "characters " + characters[i].name + " and " + characters[j].name + " are not orthonormal");
    }
  }
}

int group_tables_version() { return tables().version; }

std::vector<std::string> group_names() {
  std::vector<std::string> out;
  for (const auto& g : tables().groups) out.push_back(g.name);
  return out;
}

const GroupData& group_data(const std::string& name) {
  for (const auto& g : tables().groups)
    if (g.name == name) return g;
  fail(ErrorKind::InvalidArgument, "unknown group '" + name + "'");
}

// ---------------------------------------------------------------------------
// Frobenius predictions.

namespace {

// Branch parameter: the image of t (group constructions) or of zeta (induced).
struct Branch {
  Elem value;
  std::string name;
};

const GroupData* spec_group(const GaloisRepSpec& s) {
  if (s.construction == Construction::TwoDimPlusCharacter || s.construction == Construction::Irreducible3)
    return &group_data(s.group);
  return nullptr;
}

u32 mult_order_mod(u32 p, u32 n) {
  require(std::gcd(p, n) == 1, "root of unity order must be prime to p");
  u64 x = p % n;
  u32 k = 1;
  while (x != 1 % n) {
    x = x * p % n;
    ++k;
  }
  return k;
}

Elem power_char(const ExtField& E, const PowerCharacter& c, u32 ell) {
  const u32 w = E.base().pow(ell % E.p(), static_cast<u64>(((c.omega % static_cast<i64>(E.p() - 1)) + E.p() - 1) %
                                                        (E.p() - 1)));
  return E.from_base(E.base().mul(w, c.eps.value_mod(ell, E.base())));
}

Elem eval_cyc(const ExtField& E, const CycVal& v, const Elem& t) {
  Elem acc = E.zero();
  for (size_t i = v.size(); i-- > 0;) acc = E.add(E.mul(acc, t), E.from_base(E.base().from_int(v[i])));
  return acc;
}

std::vector<Branch> branches_of(const GaloisRepSpec& s) {
  const ExtField E = prediction_field(s);
  std::vector<Branch> out;
  if (const GroupData* g = spec_group(s)) {
    if (g->irrational.size() <= 2) {
      // Rational table: the root is an integer.
      out.push_back({E.from_base(E.base().from_int(-g->irrational[0])), "rational"});
      return out;
    }
    auto roots = roots_in_ext(E, reduce_zpoly(g->irrational, E.base()));
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    require(roots.size() + 1 == g->irrational.size(), "table polynomial of " + g->name + " is not separable mod p");
    for (const auto& r : roots) {
      if (!s.root.empty() && E.from_coeffs(s.root) != r) continue;
      out.push_back({r, "t=" + (E.degree() == 1 ? std::to_string(r.c[0]) : E.to_string(r))});
    }
    require(!out.empty(), "pinned root is not a root of the table polynomial mod p");
    return out;
  }
  if (s.construction == Construction::Induced) {
    const u32 n = static_cast<u32>(s.induced.zeta_order);
    for (u64 i = 1; i < E.order(); ++i) {
      const Elem z = E.from_index(i);
      if (E.mult_order(z) != n) continue;
      Branch b{z, "zeta=" + (E.degree() == 1 ? std::to_string(z.c[0]) : E.to_string(z))};
      // Keep roots whose order-2 Frobenius data is compatible with det rho.
      bool ok = true;
      for (const auto& [ell, ex] : s.induced.chi) {
        if (ex.size() != 1 || !is_good_prime(s, ell)) continue;
        const Elem xi = E.pow(z, static_cast<u64>(ex[0] % static_cast<int>(n) + n) % n);
        const Elem c3 = E.neg(E.pow(xi, 3));
        const Elem mult = power_char(E, PowerCharacter{s.omega, s.twist}, ell);
        if (E.mul(c3, E.pow(mult, 3)) != det_value(s, ell)) ok = false;
      }
      if (ok) out.push_back(b);
    }
    require(!out.empty(), "no root of unity is compatible with the determinant");
    return out;
  }
  out.push_back({E.zero(), "single"});
  return out;
}

// Elementary symmetric functions of three values.
std::array<Elem, 3> elementary(const ExtField& E, const std::array<Elem, 3>& x) {
  return {E.add(E.add(x[0], x[1]), x[2]),
          E.add(E.add(E.mul(x[0], x[1]), E.mul(x[0], x[2])), E.mul(x[1], x[2])),
          E.mul(E.mul(x[0], x[1]), x[2])};
}

FrobeniusEntry predict(const GaloisRepSpec& s, const ExtField& E, const Branch& br, u32 ell) {
  require(is_good_prime(s, ell), "prime " + std::to_string(ell) + " is bad for " + s.name);
  FrobeniusEntry e;
  e.ell = ell;
  if (!s.polynomial.empty()) e.cycle_type = factor_degrees(s.polynomial, ell);
  e.order = lcm_of(e.cycle_type);
  const Elem mult = power_char(E, PowerCharacter{s.omega, s.twist}, ell);
  const Elem tw = power_char(E, PowerCharacter{0, s.twist}, ell);
  const u32 inv2 = E.base().inv(2), inv6 = E.base().inv(6);

  // Twisting by a character m multiplies c_k by m^k.
  auto scaled = [&](std::array<Elem, 3> c, const Elem& m) {
    c[0] = E.mul(c[0], m);
    c[1] = E.mul(c[1], E.mul(m, m));
    c[2] = E.mul(c[2], E.pow(m, 3));
    return c;
  };

  switch (s.construction) {
    case Construction::SumOfCharacters: {
      require(s.summands.size() == 3, "a sum of characters needs three summands");
      std::array<Elem, 3> v;
      for (int i = 0; i < 3; ++i) v[i] = power_char(E, s.summands[i], ell);
      e.candidates.push_back({scaled(elementary(E, v), tw), ""});
      break;
    }
    case Construction::TwoDimPlusCharacter:
    case Construction::Irreducible3: {
      const GroupData& g = *spec_group(s);
      const auto& chi = g.characters[g.character_index(s.character)];
      std::vector<size_t> cls;
      if (const auto it = s.frobenius_classes.find(ell); it != s.frobenius_classes.end()) {
        cls.push_back(g.class_index(it->second));
        require(g.classes[cls[0]].cycle_type == e.cycle_type,
                "fixture class " + it->second + " at " + std::to_string(ell) + " contradicts the factorization");
      } else {
        cls = g.class_candidates(e.cycle_type);
      }
      require(!cls.empty(), "no class of " + g.name + " has cycle type of the Frobenius at " + std::to_string(ell));
      for (size_t k : cls) {
        const GroupClass& C = g.classes[k];
        const Elem p1 = eval_cyc(E, chi.values[k], br.value);
        const Elem p2 = eval_cyc(E, chi.values[C.square], br.value);
        const Elem p3 = eval_cyc(E, chi.values[C.cube], br.value);
        const Elem e2 = E.scale(E.sub(E.mul(p1, p1), p2), inv2);
        std::array<Elem, 3> c;
        if (s.construction == Construction::TwoDimPlusCharacter) {
          const Elem w = power_char(E, PowerCharacter{s.omega, Character()}, ell);
          c = {E.add(p1, w), E.add(e2, E.mul(w, p1)), E.mul(w, e2)};
          c = scaled(c, tw);
        } else {
          // e3 = (p1^3 - 3 p1 p2 + 2 p3) / 6
          const Elem e3 = E.scale(
              E.add(E.sub(E.mul(E.mul(p1, p1), p1), E.scale(E.mul(p1, p2), 3)), E.scale(p3, 2)), inv6);
          c = scaled({p1, e2, e3}, mult);
        }
        e.candidates.push_back({c, C.name});
      }
      break;
    }
    case Construction::Induced: {
      const u32 n = static_cast<u32>(s.induced.zeta_order);
      const auto it = s.induced.chi.find(ell);
      std::array<Elem, 3> c{};
      if (e.order == 3) {
        c[2] = det_value(s, ell);
      } else {
        require(it != s.induced.chi.end(), "no ray class character data at " + std::to_string(ell));
        auto zpow = [&](int k) { return E.pow(br.value, static_cast<u64>((k % static_cast<int>(n)) + n) % n); };
        if (e.order == 2) {
          require(it->second.size() == 1, "an inert-split prime carries one character value");
          const Elem xi = zpow(it->second[0]);
          c = scaled({xi, E.neg(E.mul(xi, xi)), E.neg(E.pow(xi, 3))}, mult);
        } else {
          require(it->second.size() == 3, "a split prime carries three character values");
          c = scaled(elementary(E, {zpow(it->second[0]), zpow(it->second[1]), zpow(it->second[2])}), mult);
          // The determinant fixes c_3 at split primes.
          c[2] = det_value(s, ell);
        }
      }
      e.candidates.push_back({c, ""});
      break;
    }
    case Construction::LocalOnly:
      fail(ErrorKind::Unsupported, s.name + " has no global description to predict Frobenius from");
  }
  return e;
}

std::string elem_str(const ExtField& E, const Elem& x) {
  return E.degree() == 1 ? std::to_string(x.c[0]) : E.to_string(x);
}

}  // namespace

ExtField prediction_field(const GaloisRepSpec& s) {
  require(s.p >= 5 && is_prime(s.p), "predictions need a prime p >= 5");
  if (s.construction == Construction::LocalOnly)
    fail(ErrorKind::Unsupported, s.name + " has no global description to predict Frobenius from");
  if (s.construction == Construction::Induced)
    return ExtField(s.p, static_cast<int>(mult_order_mod(s.p, static_cast<u32>(s.induced.zeta_order))));
  if (const GroupData* g = spec_group(s)) {
    if (g->irrational.size() <= 2) return ExtField(s.p, 1);
    const PrimeField F(s.p);
    int k = 1;
    for (const auto& df : distinct_degree_factorization(F, reduce_zpoly(g->irrational, F)))
      k = std::lcm(k, df.degree);
    return ExtField(s.p, k);
  }
  return ExtField(s.p, 1);
}

int branch_count(const GaloisRepSpec& s) { return static_cast<int>(branches_of(s).size()); }

std::string branch_name(const GaloisRepSpec& s, int branch) {
  const auto b = branches_of(s);
  require(branch >= 0 && branch < static_cast<int>(b.size()), "branch out of range");
  return b[branch].name;
}

bool is_good_prime(const GaloisRepSpec& s, u32 ell) {
  if (!is_prime(ell) || ell == s.p) return false;
  if (std::find(s.bad_primes.begin(), s.bad_primes.end(), ell) != s.bad_primes.end()) return false;
  auto divides = [&](const Character& c) { return !c.is_trivial() && c.conductor() % ell == 0; };
  if (divides(s.twist) || divides(s.det.eps)) return false;
  for (const auto& x : s.summands)
    if (divides(x.eps)) return false;
  if (!s.polynomial.empty()) {
    const PrimeField F(ell);
    const Poly g = reduce_zpoly(s.polynomial, F);
    if (poly::degree(poly::gcd(F, g, poly::derivative(F, g))) > 0) return false;
  }
  return true;
}

FrobeniusEntry charpoly_pred(const GaloisRepSpec& s, u32 ell, int branch) {
  const auto b = branches_of(s);
  require(branch >= 0 && branch < static_cast<int>(b.size()), "branch out of range");
  return predict(s, prediction_field(s), b[branch], ell);
}

std::vector<FrobeniusData> frobenius_data(const GaloisRepSpec& s, u32 ell_max) {
  const ExtField E = prediction_field(s);
  std::vector<FrobeniusData> out;
  for (const auto& br : branches_of(s)) {
    FrobeniusData d;
    d.branch = br.name;
    d.p = s.p;
    d.modulus = E.modulus();
    for (u32 ell = 2; ell <= ell_max; ++ell)
      if (is_good_prime(s, ell)) d.entries[ell] = predict(s, E, br, ell);
    out.push_back(std::move(d));
  }
  return out;
}

Elem det_value(const GaloisRepSpec& s, u32 ell) { return power_char(prediction_field(s), s.det, ell); }

// ---------------------------------------------------------------------------
// Matching.

namespace {

struct Common {
  ExtField E;
  bool from_sys;  // embed predictions into the eigenvalue field
};

Common common_field(const ExtField& S, const ExtField& P) {
  require(S.p() == P.p(), "eigenvalues and predictions live over different primes");
  if (S == P || P.degree() == 1) return {S, true};
  if (S.degree() == 1) return {P, false};
  fail(ErrorKind::Unsupported, "cannot compare values in " + S.header() + " and " + P.header());
}

Elem embed(const ExtField& from, const ExtField& to, const Elem& x) {
  if (from == to) return x;
  require(from.degree() == 1, "only prime field values can be embedded");
  return to.from_base(x.c[0]);
}

}  // namespace

MatchReport match(const EigenSystem& sys, const std::vector<FrobeniusData>& branches) {
  require(!branches.empty(), "no Frobenius data to match");
  const ExtField S = sys.field();
  MatchReport best;
  best.eigensystem = sys.index;
  long best_score = -1;
  for (const auto& d : branches) {
    const ExtField P = d.field();
    const Common cf = common_field(S, P);
    MatchReport rep;
    rep.branch = d.branch;
    rep.eigensystem = sys.index;
    rep.pass = true;
    long score = 0;
    for (const auto& [ell, entry] : d.entries) {
      const auto it = sys.a.find(ell);
      if (it == sys.a.end()) continue;
      const Elem a1 = embed(S, cf.E, it->second[0]);
      const Elem la2 = cf.E.scale(embed(S, cf.E, it->second[1]), ell % sys.p);
      MatchRow row;
      row.ell = ell;
      row.a1 = sys.value_string(ell, 1);
      row.a2 = sys.value_string(ell, 2);
      row.candidates = entry.candidates.size();
      const FrobeniusCandidate* hit = nullptr;
      for (const auto& c : entry.candidates) {
        if (embed(P, cf.E, c.c[0]) == a1 && embed(P, cf.E, c.c[1]) == la2) {
          hit = &c;
          break;
        }
      }
      const FrobeniusCandidate& shown = hit ? *hit : entry.candidates.front();
      row.pass = hit != nullptr;
      row.c1 = elem_str(P, shown.c[0]);
      row.c2 = elem_str(P, shown.c[1]);
      row.cls = shown.cls;
      if (row.pass) {
        ++score;
      } else if (rep.pass) {
        rep.pass = false;
        rep.first_failure = ell;
      }
      rep.rows.push_back(row);
    }
    require(!rep.rows.empty(), "no common good primes between the eigensystem and the predictions");
    if (rep.pass) return rep;
    // Prefer the branch that agrees longest.
    if (rep.first_failure > best.first_failure || (rep.first_failure == best.first_failure && score > best_score)) {
      best = rep;
      best_score = score;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// JSON layout.

namespace {

Construction parse_construction(const std::string& s) {
  if (s == "sum_of_characters") return Construction::SumOfCharacters;
  if (s == "two_dim_plus_character") return Construction::TwoDimPlusCharacter;
  if (s == "irreducible") return Construction::Irreducible3;
  if (s == "induced") return Construction::Induced;
  if (s == "local") return Construction::LocalOnly;
  fail(ErrorKind::InvalidArgument, "unknown construction '" + s + "'");
}

PowerCharacter parse_power(const json& j) {
  PowerCharacter c;
  c.omega = j.value("omega", 0);
  c.eps = Character::parse(j.value("eps", std::string("trivial")));
  return c;
}

u32 prime_key(const std::string& k) {
  const long v = std::stol(k);
  require(v > 1, "bad prime key '" + k + "'");
  return static_cast<u32>(v);
}

}  // namespace

GaloisRepSpec parse_rep_spec(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidArgument, std::string("representation spec is not valid JSON: ") + e.what());
  }
  try {
    GaloisRepSpec s;
    s.name = j.value("name", std::string("rho"));
    s.p = j.at("p").get<u32>();
    s.construction = parse_construction(j.value("construction", std::string("local")));
    if (j.contains("polynomial")) {
      const auto& f = j.at("polynomial");
      s.polynomial = f.is_string() ? parse_zpoly(f.get<std::string>()) : f.get<ZPoly>();
    }
    s.group = j.value("group", std::string());
    s.character = j.value("character", std::string());
    if (j.contains("root")) {
      const auto& r = j.at("root");
      s.root = r.is_array() ? r.get<std::vector<u32>>() : std::vector<u32>{r.get<u32>()};
    }
    s.omega = j.value("omega", 0);
    s.twist = Character::parse(j.value("twist", std::string("trivial")));
    if (j.contains("summands"))
      for (const auto& x : j.at("summands")) s.summands.push_back(parse_power(x));
    if (j.contains("det")) {
      s.det = parse_power(j.at("det"));
    } else {
      require(s.construction == Construction::SumOfCharacters || s.construction == Construction::LocalOnly,
              "det is required for this construction");
      Character eps;
      for (const auto& x : s.summands) {
        s.det.omega += x.omega;
        if (!x.eps.is_trivial()) eps = eps.is_trivial() ? x.eps : Character::parse(eps.name() + "*" + x.eps.name());
      }
      s.det.eps = eps;
    }
    if (j.contains("frobenius_classes"))
      for (const auto& [k, v] : j.at("frobenius_classes").items()) s.frobenius_classes[prime_key(k)] = v.get<std::string>();
    if (j.contains("induced")) {
      const auto& ind = j.at("induced");
      s.induced.zeta_order = ind.value("zeta_order", 9);
      for (const auto& [k, v] : ind.at("chi").items()) s.induced.chi[prime_key(k)] = v.get<std::vector<int>>();
    }
    if (j.contains("bad_primes")) s.bad_primes = j.at("bad_primes").get<std::vector<u32>>();

    if (j.contains("inertia")) {
      const auto& in = j.at("inertia");
      s.inertia.p = in.value("p", s.p);
      for (const auto& b : in.at("blocks")) {
        NiveauBlock nb;
        nb.d = b.value("d", 1);
        nb.m = b.at("m").get<i64>();
        nb.positions = b.at("positions").get<std::vector<int>>();
        nb.wild = b.value("wild", false);
        s.inertia.blocks.push_back(nb);
      }
    }
    if (j.contains("levis"))
      for (const auto& l : j.at("levis")) s.levis.push_back(LeviShape::parse(l.get<std::string>()));
    if (j.contains("conjugation")) s.conjugation = j.at("conjugation").get<std::vector<int>>();
    if (j.contains("ramification")) {
      const auto& r = j.at("ramification");
      for (const auto& q : r.at("primes")) {
        RamifiedPrime rp;
        rp.q = q.at("q").get<u32>();
        rp.inertia_order = q.value("inertia_order", 1);
        rp.fixed_dim = q.value("fixed_dim", 3);
        rp.wild_exponent = q.value("wild_exponent", 0);
        s.ramification.primes.push_back(rp);
      }
      s.ramification.det_eps = Character::parse(r.value("det_eps", std::string("trivial")));
    }

    if (s.construction == Construction::TwoDimPlusCharacter || s.construction == Construction::Irreducible3) {
      const GroupData& g = group_data(s.group);
      g.character_index(s.character);
      require(!s.polynomial.empty(), "a group construction needs the defining polynomial");
      require(static_cast<int>(s.polynomial.size()) == g.degree + 1,
              "polynomial degree does not match the permutation degree of " + g.name);
      const i64 dim = g.characters[g.character_index(s.character)].values[0][0];
      require(dim == (s.construction == Construction::Irreducible3 ? 3 : 2), "character has the wrong dimension");
    }
    if (s.construction == Construction::Induced)
      require(s.polynomial.size() == 4, "an induced representation needs a cubic polynomial");
    return s;
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidArgument, std::string("malformed representation spec: ") + e.what());
  }
}

}  // namespace sl3
