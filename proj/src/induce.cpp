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

#include "induce.hpp"

#include <numeric>
#include <sstream>
#include <tuple>

namespace sl3 {

namespace {

u32 encode(const Vec3& r, u32 N) {
  return static_cast<u32>((mod_reduce(r[0], N) * static_cast<u64>(N) + mod_reduce(r[1], N)) * N +
                          mod_reduce(r[2], N));
}

}  // namespace

P2Table::P2Table(u32 N) : N_(N) {
  require(N >= 1, "level must be positive");
  require(static_cast<u64>(N) * N * N <= (1ull << 27), "level too large for the coset table");
  const u32 n3 = N * N * N;
  table_.assign(n3, -1);
  std::vector<u32> units;
  for (u32 u = 1; u <= N; ++u)
    if (std::gcd(u % N, N) == 1 || N == 1) units.push_back(u % N);
  if (N == 1) units = {0};
  for (u32 code = 0; code < n3; ++code) {
    if (table_[code] >= 0) continue;
    u32 c0 = code / (N * N), c1 = code / N % N, c2 = code % N;
    if (std::gcd(std::gcd(std::gcd(c0, c1), c2), N) != 1) continue;
    // Lexicographic iteration meets the smallest representative of each class first.
    int idx = static_cast<int>(points_.size());
    points_.push_back({c0, c1, c2});
    for (u32 u : units) {
      Vec3 r{static_cast<i64>(c0) * u, static_cast<i64>(c1) * u, static_cast<i64>(c2) * u};
      table_[encode(r, N)] = idx;
    }
  }
}

size_t P2Table::index_of(const Vec3& row) const {
  int idx = table_[encode(row, N_)];
  require(idx >= 0, "row is not unimodular modulo N");
  return static_cast<size_t>(idx);
}

u64 p2_count(u32 N) {
  u64 num = static_cast<u64>(N) * N, den = 1;
  for (u64 q : prime_divisors(N)) {
    num *= q * q + q + 1;
    den *= q * q;
  }
  return num / den;
}

std::vector<ProjPoint> proj_points(u32 N, u32 p) {
  require(std::gcd(N, p) == 1, "level must be prime to p");
  return P2Table(N).points();
}

std::string point_to_string(const ProjPoint& pt, u32 N) {
  std::ostringstream os;
  os << '[' << pt[0] << ':' << pt[1] << ':' << pt[2] << "] mod " << N;
  return os.str();
}

ProjPoint coset_of(const Mat3& m, u32 N, u32 p) {
  i64 d = det(m);
  require(d > 0, "determinant must be positive");
  require(std::gcd(d, static_cast<i64>(p) * N) == 1, "determinant must be prime to pN");
  Vec3 e1{1, 0, 0};
  return P2Table(N).normalize(e1 * adj(m));
}

namespace {

// Lift of [[a,b],[c,d]] in SL_2(Z/p) to SL_2(Z).
Mat3 lift_sl2(i64 a, i64 b, i64 c, i64 d, i64 p) {
  a = mod_reduce(a, static_cast<u32>(p));
  b = mod_reduce(b, static_cast<u32>(p));
  c = mod_reduce(c, static_cast<u32>(p));
  d = mod_reduce(d, static_cast<u32>(p));
  require(mod_reduce(a * d - b * c, static_cast<u32>(p)) == 1, "block is not in SL_2(F_p)");
  if (a == 0) a = p;
  while (std::gcd(a, b) != 1) b += p;
  i64 x, y;
  ext_gcd(a, b, y, x);  // a*y + b*x = 1
  x = -x;               // a*y - b*x = 1
  i64 k;
  if (a % p != 0)
    k = mod_reduce((c - x) * inv_mod(a, p), static_cast<u32>(p));
  else
    k = mod_reduce((d - y) * inv_mod(b, p), static_cast<u32>(p));
  Mat3 m = Mat3::identity();
  m(1, 1) = a;
  m(1, 2) = b;
  m(2, 1) = x + k * a;
  m(2, 2) = y + k * b;
  return m;
}

}  // namespace

Mat3 lift_rep(const ProjPoint& point, u32 N, u32 p) {
  require(std::gcd(N, p) == 1, "level must be prime to p");
  const i64 pN = static_cast<i64>(p) * N;
  // Row x = point mod N, x = e_1 mod p.
  Vec3 x{};
  const i64 Ninv = inv_mod(N, p), pinv = inv_mod(p, N);
  for (int t = 0; t < 3; ++t) {
    i64 e = (t == 0) ? 1 : 0;
    // CRT: x = e mod p, x = point[t] mod N.
    i64 v = (e * N % pN * Ninv + static_cast<i64>(point[t]) * p % pN * pinv) % pN;
    x[t] = v;
  }
  if (x == Vec3{0, 0, 0}) x[0] = pN;
  while (gcd3(x) != 1) x[2] += pN;
  // Complete x to U in SL_3(Z) with first row x.
  i64 d = std::gcd(x[0], x[1]);
  Mat3 U;
  if (d == 0) {
    // x = (0, 0, +-1) cannot occur since x[0] = 1 mod p.
    fail(ErrorKind::Computation, "unexpected row in coset lifting");
  }
  i64 a = x[0] / d, b = x[1] / d, u, v, m, n;
  ext_gcd(a, b, u, v);      // a u + b v = 1
  ext_gcd(d, x[2], m, n);   // d m + x3 n = 1
  U = Mat3::rows({x[0], x[1], x[2]}, {-v, u, 0}, {-n * a, -n * b, m});
  require(det(U) == 1, "completion failed");
  // U mod p = [[1,0,0],[*,A]]; left-multiply by a lift of its inverse.
  const u32 pp = p;
  i64 A00 = mod_reduce(U(1, 1), pp), A01 = mod_reduce(U(1, 2), pp);
  i64 A10 = mod_reduce(U(2, 1), pp), A11 = mod_reduce(U(2, 2), pp);
  // inverse of [[A00,A01],[A10,A11]] with det 1
  Mat3 L = lift_sl2(A11, -A01, -A10, A00, p);
  Mat3 R = L * U;
  // Clear the first column below the diagonal mod p with integer multiples of row 0.
  for (int i = 1; i < 3; ++i) {
    i64 c = mod_reduce(R(i, 0), pp);
    if (!c) continue;
    for (int j = 0; j < 3; ++j) R(i, j) -= c * R(0, j);
  }
  require(det(R) == 1, "lifting produced a non-unimodular matrix");
  Mat3 r = inverse_unimodular(R);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) require(mod_reduce(r(i, j) - (i == j), pp) == 0, "lift is not the identity mod p");
  return r;
}

// ---- InducedModule ----------------------------------------------------------

InducedModule::InducedModule(std::shared_ptr<const GModule> inner, u32 N, Character eps)
    : GModule(inner->p()), inner_(std::move(inner)), P_(N), eps_(std::move(eps)) {
  require(std::gcd(N, p()) == 1, "level must be prime to p");
  require(eps_.is_trivial() || N % eps_.conductor() == 0, "character conductor must divide the level");
  for (size_t i = 0; i < P_.size(); ++i) {
    Mat3 r = lift_rep(P_.point(i), N, p());
    reps_.push_back(r);
    reps_mod_.push_back(mod_entries(r, N));
    Mat3 R = inverse_unimodular(r);
    rows_.push_back({mod_reduce(R(0, 0), N), mod_reduce(R(0, 1), N), mod_reduce(R(0, 2), N)});
    require(P_.index_of(rows_.back()) == i, "coset representative has the wrong class");
  }
}

std::string InducedModule::basis_label(size_t i) const {
  const size_t dw = inner_->dim();
  return point_to_string(P_.point(i / dw), P_.N()) + " " + inner_->basis_label(i % dw);
}

void InducedModule::check_semigroup(const Mat3& g) const {
  const i64 d = det(g);
  require(d > 0 && std::gcd(d, static_cast<i64>(p()) * P_.N()) == 1, "matrix is not in the acting semigroup");
}

std::pair<u32, u32> InducedModule::entry(const Mat3& gN, const Mat3& aN, size_t j) const {
  const u32 N = P_.N();
  const auto& pt = P_.point(j);
  Vec3 row{pt[0], pt[1], pt[2]};
  const size_t src = P_.index_of(row * aN);
  // First row of r_src^{-1} g r_j, which must be (s, 0, 0) mod N.
  Vec3 t = rows_[src] * gN;
  for (auto& x : t) x = mod_reduce(x, N);
  Vec3 s = t * reps_mod_[j];
  for (auto& x : s) x = mod_reduce(x, N);
  if (N > 1 && (s[1] != 0 || s[2] != 0)) fail(ErrorKind::Computation, "inner matrix left the congruence subgroup");
  return {static_cast<u32>(src), eps_.is_trivial() ? 1u : eps_.value_mod(s[0], F_)};
}

std::pair<u32, u32> InducedModule::block_entry(const Mat3& g, size_t j) const {
  check_semigroup(g);
  return entry(mod_entries(g, P_.N()), mod_entries(adj(g), P_.N()), j);
}

InducedModule::BlockMap InducedModule::block_map(const Mat3& g) const {
  check_semigroup(g);
  const Mat3 gN = mod_entries(g, P_.N());
  const Mat3 aN = mod_entries(adj(g), P_.N());
  BlockMap bm;
  bm.src.resize(P_.size());
  bm.scalar.resize(P_.size());
  for (size_t j = 0; j < P_.size(); ++j) std::tie(bm.src[j], bm.scalar[j]) = entry(gN, aN, j);
  return bm;
}

SparseMat InducedModule::action_matrix(const Mat3& g) const {
  BlockMap bm = block_map(g);
  SparseMat W = inner_->action_matrix(g);
  const size_t dw = inner_->dim(), nb = P_.size();
  std::vector<u32> target(nb);
  for (size_t j = 0; j < nb; ++j) target[bm.src[j]] = static_cast<u32>(j);
  SparseMat m(dim(), dim());
  for (size_t i = 0; i < nb; ++i) {
    const u32 j = target[i];
    const u32 s = bm.scalar[j];
    for (size_t a = 0; a < dw; ++a) {
      for (u32 k = W.row_begin(a); k < W.row_end(a); ++k)
        m.push_entry(static_cast<u32>(j * dw + W.col_at(k)), F_.mul(s, W.val_at(k)));
      m.end_row();
    }
  }
  return m;
}

Vec InducedModule::act(const Vec& v, const Mat3& g) const {
  require(v.size() == dim(), "vector length does not match module");
  BlockMap bm = block_map(g);
  SparseMat W = inner_->action_matrix(g);
  const size_t dw = inner_->dim();
  Vec out(dim(), 0);
  for (size_t j = 0; j < P_.size(); ++j) {
    Vec blk(v.begin() + bm.src[j] * dw, v.begin() + (bm.src[j] + 1) * dw);
    Vec img = W.apply(F_, blk);
    for (size_t b = 0; b < dw; ++b) out[j * dw + b] = F_.mul(bm.scalar[j], img[b]);
  }
  return out;
}

Vec InducedModule::coeff_functional(const Mat3& g, size_t i) const {
  const size_t dw = inner_->dim();
  const size_t y = i / dw, t = i % dw;
  const auto [src, scalar] = block_entry(g, y);
  Vec f = inner_->coeff_functional(g, t);
  Vec out(dim(), 0);
  for (size_t a = 0; a < dw; ++a) out[src * dw + a] = F_.mul(scalar, f[a]);
  return out;
}

}  // namespace sl3
