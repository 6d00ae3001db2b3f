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

// Prime fields, polynomials over them, and small extension fields.

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "error.hpp"

namespace sl3 {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;

bool is_prime(u64 n);
u64 powmod_u64(u64 base, u64 exp, u64 mod);
// Residue of a signed integer in [0, m).
inline u32 mod_reduce(i64 x, u32 m) {
  i64 r = x % static_cast<i64>(m);
  return static_cast<u32>(r < 0 ? r + m : r);
}

class PrimeField {
 public:
  using Elem = u32;

  explicit PrimeField(u32 p);

  u32 p() const { return p_; }
  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  Elem from_int(i64 x) const { return mod_reduce(x, p_); }
  bool is_zero(Elem a) const { return a == 0; }
  Elem add(Elem a, Elem b) const {
    u32 s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + p_ - b; }
  Elem neg(Elem a) const { return a == 0 ? 0 : p_ - a; }
  Elem mul(Elem a, Elem b) const {
    return static_cast<Elem>(static_cast<u64>(a) * b % p_);
  }
  Elem pow(Elem a, u64 e) const;
  // Throws ErrorKind::DivisionByZero on zero.
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  // Smallest generator of the multiplicative group.
  Elem primitive_root() const;
  std::string to_string(Elem a) const { return std::to_string(a); }
  bool operator==(const PrimeField& o) const { return p_ == o.p_; }

 private:
  u32 p_;
};

// Dense polynomials over F_p, coefficient i is the coefficient of X^i.
// The zero polynomial is the empty vector.
using Poly = std::vector<u32>;

namespace poly {
void trim(Poly& f);
int degree(const Poly& f);  // -1 for zero
Poly add(const PrimeField& F, const Poly& f, const Poly& g);
Poly sub(const PrimeField& F, const Poly& f, const Poly& g);
Poly mul(const PrimeField& F, const Poly& f, const Poly& g);
Poly scale(const PrimeField& F, const Poly& f, u32 c);
// Quotient and remainder; g must be nonzero.
void divmod(const PrimeField& F, const Poly& f, const Poly& g, Poly& q, Poly& r);
Poly mod(const PrimeField& F, const Poly& f, const Poly& g);
Poly gcd(const PrimeField& F, Poly f, Poly g);  // monic
Poly monic(const PrimeField& F, const Poly& f);
Poly derivative(const PrimeField& F, const Poly& f);
Poly powmod(const PrimeField& F, const Poly& f, u64 e, const Poly& m);
u32 eval(const PrimeField& F, const Poly& f, u32 x);
bool is_irreducible(const PrimeField& F, const Poly& f);
// Monic irreducible of degree k with the smallest encoding sum c_i p^i
// over the non-leading coefficients.
Poly smallest_irreducible(const PrimeField& F, int k);
std::string to_string(const Poly& f, const char* var = "X");
}  // namespace poly

// F_{p^k} = F_p[X]/(m(X)) in the polynomial basis 1, X, ..., X^{k-1}.
class ExtField {
 public:
  static constexpr int kMaxDegree = 6;
  struct Elem {
    std::array<u32, kMaxDegree> c{};
    bool operator==(const Elem& o) const { return c == o.c; }
    bool operator!=(const Elem& o) const { return c != o.c; }
    bool operator<(const Elem& o) const { return c < o.c; }
  };

  ExtField(u32 p, int k);
  ExtField(u32 p, const Poly& modulus);

  u32 p() const { return F_.p(); }
  int degree() const { return k_; }
  u64 order() const { return order_; }
  const Poly& modulus() const { return m_; }
  const PrimeField& base() const { return F_; }

  Elem zero() const { return Elem{}; }
  Elem one() const { return from_base(1); }
  Elem gen() const;  // the class of X
  Elem from_base(u32 a) const {
    Elem e;
    e.c[0] = a % F_.p();
    return e;
  }
  Elem from_coeffs(const std::vector<u32>& cs) const;
  bool is_zero(Elem a) const { return a == Elem{}; }
  bool in_base(const Elem& a) const;
  Elem add(const Elem& a, const Elem& b) const;
  Elem sub(const Elem& a, const Elem& b) const;
  Elem neg(const Elem& a) const;
  Elem mul(const Elem& a, const Elem& b) const;
  Elem scale(const Elem& a, u32 s) const;
  Elem pow(Elem a, u64 e) const;
  Elem inv(const Elem& a) const;
  Elem div(const Elem& a, const Elem& b) const { return mul(a, inv(b)); }
  Elem frobenius(const Elem& a) const { return pow(a, F_.p()); }
  // Multiplicative order of a nonzero element.
  u64 mult_order(const Elem& a) const;
  // Enumeration of all p^k elements by base-p digits of idx.
  Elem from_index(u64 idx) const;
  std::string to_string(const Elem& a) const;
  std::string header() const;  // "F_p^k mod m(X)"
  bool operator==(const ExtField& o) const {
    return F_.p() == o.F_.p() && m_ == o.m_;
  }

 private:
  PrimeField F_;
  int k_;
  Poly m_;
  u64 order_;
};

// Roots of f in F_{p^k} listed with multiplicity (exhaustive search).
std::vector<ExtField::Elem> roots_in_ext(const ExtField& E, const Poly& f);

}  // namespace sl3
