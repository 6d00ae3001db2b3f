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

#include "ff.hpp"

#include <algorithm>
#include <sstream>

namespace sl3 {

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

u64 powmod_u64(u64 base, u64 exp, u64 mod) {
  unsigned __int128 r = 1 % mod, b = base % mod;
  while (exp) {
    if (exp & 1) r = r * b % mod;
    b = b * b % mod;
    exp >>= 1;
  }
  return static_cast<u64>(r);
}

namespace {
std::vector<u64> prime_factors(u64 n) {
  std::vector<u64> out;
  for (u64 d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}
}  // namespace

PrimeField::PrimeField(u32 p) : p_(p) {
  require(p < (1u << 31) && is_prime(p), "modulus must be a prime below 2^31");
}

PrimeField::Elem PrimeField::pow(Elem a, u64 e) const {
  Elem r = 1 % p_;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

PrimeField::Elem PrimeField::inv(Elem a) const {
  if (a % p_ == 0) fail(ErrorKind::DivisionByZero, "inverse of zero in F_" + std::to_string(p_));
  // Extended Euclid on (a, p).
  i64 t = 0, nt = 1, r = p_, nr = a;
  while (nr) {
    i64 q = r / nr;
    i64 tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  return mod_reduce(t, p_);
}

PrimeField::Elem PrimeField::primitive_root() const {
  if (p_ == 2) return 1;
  auto fs = prime_factors(p_ - 1);
  for (Elem g = 2; g < p_; ++g) {
    bool ok = true;
    for (u64 q : fs)
      if (pow(g, (p_ - 1) / q) == 1) {
        ok = false;
        break;
      }
    if (ok) return g;
  }
  fail(ErrorKind::Computation, "no primitive root found");
}

namespace poly {

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

int degree(const Poly& f) {
  for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i)
    if (f[i]) return i;
  return -1;
}

Poly add(const PrimeField& F, const Poly& f, const Poly& g) {
  Poly r(std::max(f.size(), g.size()), 0);
  for (size_t i = 0; i < f.size(); ++i) r[i] = f[i];
  for (size_t i = 0; i < g.size(); ++i) r[i] = F.add(r[i], g[i]);
  trim(r);
  return r;
}

Poly sub(const PrimeField& F, const Poly& f, const Poly& g) {
  Poly r(std::max(f.size(), g.size()), 0);
  for (size_t i = 0; i < f.size(); ++i) r[i] = f[i];
  for (size_t i = 0; i < g.size(); ++i) r[i] = F.sub(r[i], g[i]);
  trim(r);
  return r;
}

Poly mul(const PrimeField& F, const Poly& f, const Poly& g) {
  if (f.empty() || g.empty()) return {};
  Poly r(f.size() + g.size() - 1, 0);
  for (size_t i = 0; i < f.size(); ++i) {
    if (!f[i]) continue;
    for (size_t j = 0; j < g.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(f[i], g[j]));
  }
  trim(r);
  return r;
}

Poly scale(const PrimeField& F, const Poly& f, u32 c) {
  Poly r(f.size());
  for (size_t i = 0; i < f.size(); ++i) r[i] = F.mul(f[i], c);
  trim(r);
  return r;
}

void divmod(const PrimeField& F, const Poly& f, const Poly& g, Poly& q, Poly& r) {
  int dg = degree(g);
  if (dg < 0) fail(ErrorKind::DivisionByZero, "polynomial division by zero");
  r = f;
  trim(r);
  int dr = degree(r);
  q.assign(dr >= dg ? dr - dg + 1 : 0, 0);
  u32 lead_inv = F.inv(g[dg]);
  while (dr >= dg) {
    u32 c = F.mul(r[dr], lead_inv);
    q[dr - dg] = c;
    for (int i = 0; i <= dg; ++i) r[dr - dg + i] = F.sub(r[dr - dg + i], F.mul(c, g[i]));
    trim(r);
    dr = degree(r);
  }
  trim(q);
}

Poly mod(const PrimeField& F, const Poly& f, const Poly& g) {
  Poly q, r;
  divmod(F, f, g, q, r);
  return r;
}

Poly monic(const PrimeField& F, const Poly& f) {
  int d = degree(f);
  if (d < 0) return {};
  return scale(F, f, F.inv(f[d]));
}

Poly gcd(const PrimeField& F, Poly f, Poly g) {
  trim(f);
  trim(g);
  while (!g.empty()) {
    Poly r = mod(F, f, g);
    f = std::move(g);
    g = std::move(r);
  }
  return monic(F, f);
}

Poly derivative(const PrimeField& F, const Poly& f) {
  if (f.size() <= 1) return {};
  Poly r(f.size() - 1);
  for (size_t i = 1; i < f.size(); ++i) r[i - 1] = F.mul(f[i], F.from_int(static_cast<i64>(i)));
  trim(r);
  return r;
}

Poly powmod(const PrimeField& F, const Poly& f, u64 e, const Poly& m) {
  Poly result{1};
  result = mod(F, result, m);
  Poly b = mod(F, f, m);
  while (e) {
    if (e & 1) result = mod(F, mul(F, result, b), m);
    b = mod(F, mul(F, b, b), m);
    e >>= 1;
  }
  return result;
}

u32 eval(const PrimeField& F, const Poly& f, u32 x) {
  u32 acc = 0;
  for (size_t i = f.size(); i-- > 0;) acc = F.add(F.mul(acc, x), f[i]);
  return acc;
}

bool is_irreducible(const PrimeField& F, const Poly& f) {
  int n = degree(f);
  if (n <= 0) return false;
  if (n == 1) return true;
  Poly X{0, 1};
  // X^{p^j} mod f for j = 1..n.
  std::vector<Poly> frob(n + 1);
  frob[0] = mod(F, X, f);
  for (int j = 1; j <= n; ++j) frob[j] = powmod(F, frob[j - 1], F.p(), f);
  if (sub(F, frob[n], frob[0]).size() != 0) return false;
  for (u64 q : prime_factors(static_cast<u64>(n))) {
    Poly d = sub(F, frob[n / q], frob[0]);
    if (degree(gcd(F, f, d)) > 0) return false;
  }
  return true;
}

Poly smallest_irreducible(const PrimeField& F, int k) {
  require(k >= 1, "extension degree must be positive");
  u64 total = 1;
  for (int i = 0; i < k; ++i) total *= F.p();
  for (u64 idx = 0; idx < total; ++idx) {
    Poly f(k + 1, 0);
    u64 t = idx;
    for (int i = 0; i < k; ++i) {
      f[i] = static_cast<u32>(t % F.p());
      t /= F.p();
    }
    f[k] = 1;
    if (is_irreducible(F, f)) return f;
  }
  fail(ErrorKind::Computation, "no irreducible polynomial found");
}

std::string to_string(const Poly& f, const char* var) {
  if (degree(f) < 0) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(f); i >= 0; --i) {
    if (!f[i]) continue;
    if (!first) os << " + ";
    first = false;
    if (i == 0 || f[i] != 1) os << f[i];
    if (i >= 1) os << var;
    if (i >= 2) os << "^" << i;
  }
  return os.str();
}

}  // namespace poly

ExtField::ExtField(u32 p, int k) : F_(p), k_(k) {
  require(k >= 1 && k <= kMaxDegree, "extension degree out of range");
  m_ = poly::smallest_irreducible(F_, k);
  order_ = 1;
  for (int i = 0; i < k; ++i) order_ *= p;
}

ExtField::ExtField(u32 p, const Poly& modulus) : F_(p), m_(modulus) {
  poly::trim(m_);
  k_ = poly::degree(m_);
  require(k_ >= 1 && k_ <= kMaxDegree, "extension degree out of range");
  require(m_[k_] == 1, "modulus must be monic");
  require(poly::is_irreducible(F_, m_), "modulus must be irreducible");
  order_ = 1;
  for (int i = 0; i < k_; ++i) order_ *= p;
}

ExtField::Elem ExtField::gen() const {
  Elem e;
  if (k_ == 1) {
    // X reduces to -m_0 in degree one.
    e.c[0] = F_.neg(m_[0]);
  } else {
    e.c[1] = 1;
  }
  return e;
}

ExtField::Elem ExtField::from_coeffs(const std::vector<u32>& cs) const {
  require(static_cast<int>(cs.size()) <= k_, "too many coefficients for extension element");
  Elem e;
  for (size_t i = 0; i < cs.size(); ++i) e.c[i] = cs[i] % F_.p();
  return e;
}

bool ExtField::in_base(const Elem& a) const {
  for (int i = 1; i < k_; ++i)
    if (a.c[i]) return false;
  return true;
}

ExtField::Elem ExtField::add(const Elem& a, const Elem& b) const {
  Elem r;
  for (int i = 0; i < k_; ++i) r.c[i] = F_.add(a.c[i], b.c[i]);
  return r;
}

ExtField::Elem ExtField::sub(const Elem& a, const Elem& b) const {
  Elem r;
  for (int i = 0; i < k_; ++i) r.c[i] = F_.sub(a.c[i], b.c[i]);
  return r;
}

ExtField::Elem ExtField::neg(const Elem& a) const {
  Elem r;
  for (int i = 0; i < k_; ++i) r.c[i] = F_.neg(a.c[i]);
  return r;
}

ExtField::Elem ExtField::scale(const Elem& a, u32 s) const {
  Elem r;
  for (int i = 0; i < k_; ++i) r.c[i] = F_.mul(a.c[i], s);
  return r;
}

ExtField::Elem ExtField::mul(const Elem& a, const Elem& b) const {
  const u32 p = F_.p();
  std::array<u64, 2 * kMaxDegree> t{};
  for (int i = 0; i < k_; ++i) {
    if (!a.c[i]) continue;
    for (int j = 0; j < k_; ++j) t[i + j] = (t[i + j] + static_cast<u64>(a.c[i]) * b.c[j]) % p;
  }
  for (int i = 2 * k_ - 2; i >= k_; --i) {
    u64 c = t[i] % p;
    if (!c) continue;
    t[i] = 0;
    for (int j = 0; j < k_; ++j)
      t[i - k_ + j] = (t[i - k_ + j] + (p - c) * m_[j]) % p;
  }
  Elem r;
  for (int i = 0; i < k_; ++i) r.c[i] = static_cast<u32>(t[i] % p);
  return r;
}

ExtField::Elem ExtField::pow(Elem a, u64 e) const {
  Elem r = one();
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

ExtField::Elem ExtField::inv(const Elem& a) const {
  if (is_zero(a)) fail(ErrorKind::DivisionByZero, "inverse of zero in " + header());
  return pow(a, order_ - 2);
}

u64 ExtField::mult_order(const Elem& a) const {
  require(!is_zero(a), "order of zero is undefined");
  u64 n = order_ - 1;
  for (u64 q : prime_factors(order_ - 1))
    while (n % q == 0 && pow(a, n / q) == one()) n /= q;
  return n;
}

ExtField::Elem ExtField::from_index(u64 idx) const {
  Elem e;
  for (int i = 0; i < k_; ++i) {
    e.c[i] = static_cast<u32>(idx % F_.p());
    idx /= F_.p();
  }
  return e;
}

std::string ExtField::to_string(const Elem& a) const {
  std::ostringstream os;
  os << '[';
  for (int i = 0; i < k_; ++i) os << (i ? "," : "") << a.c[i];
  os << ']';
  return os.str();
}

std::string ExtField::header() const {
  std::ostringstream os;
  os << "F_" << F_.p();
  if (k_ > 1) os << "^" << k_;
  os << " mod " << poly::to_string(m_);
  return os.str();
}

std::vector<ExtField::Elem> roots_in_ext(const ExtField& E, const Poly& f_in) {
  Poly f = f_in;
  poly::trim(f);
  require(!f.empty(), "roots of the zero polynomial are undefined");
  std::vector<ExtField::Elem> roots;
  if (poly::degree(f) == 0) return roots;
  using V = std::vector<ExtField::Elem>;
  auto horner = [&](const V& g, const ExtField::Elem& x) {
    ExtField::Elem acc = E.zero();
    for (size_t i = g.size(); i-- > 0;) acc = E.add(E.mul(acc, x), g[i]);
    return acc;
  };
  V base(f.size());
  for (size_t i = 0; i < f.size(); ++i) base[i] = E.from_base(f[i]);
  for (u64 idx = 0; idx < E.order(); ++idx) {
    ExtField::Elem x = E.from_index(idx);
    if (!E.is_zero(horner(base, x))) continue;
    V g = base;
    while (g.size() > 1 && E.is_zero(horner(g, x))) {
      roots.push_back(x);
      // Synthetic division by (X - x).
      V q(g.size() - 1);
      ExtField::Elem carry = E.zero();
      for (size_t i = g.size(); i-- > 1;) {
        carry = E.add(g[i], E.mul(carry, x));
        q[i - 1] = carry;
      }
      g = std::move(q);
    }
  }
  return roots;
}

}  // namespace sl3
