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

#include "repmod.hpp"

#include <algorithm>
#include <deque>
#include <regex>
#include <sstream>

namespace sl3 {

// ---- Weight ----------------------------------------------------------------

bool Weight::p_restricted(u32 p) const {
  const int q = static_cast<int>(p);
  return a - b >= 0 && a - b <= q - 1 && b - c >= 0 && b - c <= q - 1 && c >= 0 && c < q - 1;
}

std::string Weight::label() const {
  return "F(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")";
}

std::string Weight::display() const {
  if (c == 0) return label();
  return untwisted().label() + "⊗det^" + std::to_string(c);
}

Weight Weight::parse(const std::string& s) {
  static const std::regex re(
      R"(\s*F\(\s*(-?\d+)\s*,\s*(-?\d+)\s*(?:,\s*(-?\d+)\s*)?\)\s*(?:(?:⊗|\(x\)|\*)\s*det\^?(-?\d+))?\s*'?\s*)");
  std::smatch m;
  require(std::regex_match(s, m, re), "cannot parse weight '" + s + "'");
  Weight w{std::stoi(m[1]), std::stoi(m[2]), m[3].matched ? std::stoi(m[3]) : 0};
  if (m[4].matched) {
    int t = std::stoi(m[4]);
    w.a += t;
    w.b += t;
    w.c += t;
  }
  return w;
}

// ---- Character -------------------------------------------------------------

Character Character::legendre(u32 q) {
  require(q == 4 || (q > 2 && is_prime(q)), "character modulus must be 4 or an odd prime");
  Character c;
  c.factors_.push_back(q);
  return c;
}

Character Character::parse(const std::string& s) {
  Character c;
  if (s.empty() || s == "trivial" || s == "1") return c;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, '*')) {
    part.erase(std::remove_if(part.begin(), part.end(), ::isspace), part.end());
    require(part.rfind("eps", 0) == 0 && part.size() > 3, "cannot parse character '" + s + "'");
    u32 q = static_cast<u32>(std::stoul(part.substr(3)));
    require(q == 4 || (q > 2 && is_prime(q)), "character modulus must be 4 or an odd prime");
    if (std::find(c.factors_.begin(), c.factors_.end(), q) != c.factors_.end())
      c.factors_.erase(std::find(c.factors_.begin(), c.factors_.end(), q));  // square is trivial
    else
      c.factors_.push_back(q);
  }
  std::sort(c.factors_.begin(), c.factors_.end());
  return c;
}

u32 Character::conductor() const {
  u32 n = 1;
  for (u32 q : factors_) n *= q;
  return n;
}

int Character::value(i64 x) const {
  int v = 1;
  for (u32 q : factors_) {
    u32 r = mod_reduce(x, q);
    if (q == 4) {
      require(r % 2 == 1, "character evaluated at a non-unit");
      if (r == 3) v = -v;
      continue;
    }
    require(r != 0, "character evaluated at a non-unit");
    if (powmod_u64(r, (q - 1) / 2, q) != 1) v = -v;
  }
  return v;
}

std::string Character::name() const {
  if (factors_.empty()) return "trivial";
  std::string s;
  for (size_t i = 0; i < factors_.size(); ++i) s += (i ? "*eps" : "eps") + std::to_string(factors_[i]);
  return s;
}

// ---- SparseMat -------------------------------------------------------------

SparseMat SparseMat::from_dense(const std::vector<Vec>& rows, size_t cols) {
  SparseMat m(rows.size(), cols);
  for (const auto& r : rows) {
    for (size_t j = 0; j < cols; ++j)
      if (r[j]) m.push_entry(static_cast<u32>(j), r[j]);
    m.end_row();
  }
  return m;
}

u32 SparseMat::get(size_t i, size_t j) const {
  auto b = idx_.begin() + start_[i], e = idx_.begin() + start_[i + 1];
  auto it = std::lower_bound(b, e, static_cast<u32>(j));
  return (it != e && *it == j) ? val_[it - idx_.begin()] : 0;
}

Vec SparseMat::apply(const PrimeField& F, const Vec& v) const {
  require(v.size() == rows_, "vector length does not match matrix");
  std::vector<u64> acc(cols_, 0);
  const u64 p = F.p();
  for (size_t i = 0; i < rows_; ++i) {
    if (!v[i]) continue;
    for (u32 k = start_[i]; k < start_[i + 1]; ++k) acc[idx_[k]] = (acc[idx_[k]] + static_cast<u64>(v[i]) * val_[k]) % p;
  }
  return Vec(acc.begin(), acc.end());
}

std::vector<Vec> SparseMat::to_dense() const {
  std::vector<Vec> d(rows_, Vec(cols_, 0));
  for (size_t i = 0; i < rows_; ++i)
    for (u32 k = start_[i]; k < start_[i + 1]; ++k) d[i][idx_[k]] = val_[k];
  return d;
}

// ---- GModule defaults ------------------------------------------------------

Vec GModule::coeff_functional(const Mat3& g, size_t i) const {
  SparseMat m = action_matrix(g);
  Vec c(dim(), 0);
  for (size_t a = 0; a < dim(); ++a) c[a] = m.get(a, i);
  return c;
}

Vec GModule::act(const Vec& v, const Mat3& g) const { return action_matrix(g).apply(F_, v); }

u32 GModule::coeff_of(const Vec& v, const Mat3& g, size_t i) const {
  Vec c = coeff_functional(g, i);
  u64 acc = 0;
  for (size_t a = 0; a < v.size(); ++a) acc = (acc + static_cast<u64>(v[a]) * c[a]) % p();
  return static_cast<u32>(acc);
}

// ---- SymModule -------------------------------------------------------------

namespace {

// Position of x^i y^j z^(d-i-j) in degree d, grlex with x > y > z.
inline size_t mono_pos(int d, int i, int j) {
  return static_cast<size_t>((d - i) * (d - i + 1) / 2 + (d - i - j));
}

}  // namespace

SymModule::SymModule(int degree, u32 p) : GModule(p), g_(degree) {
  require(degree >= 0, "symmetric power degree must be non-negative");
  for (int i = degree; i >= 0; --i)
    for (int j = degree - i; j >= 0; --j) mons_.push_back({i, j, degree - i - j});
  binom_.assign(degree + 1, std::vector<u32>(degree + 1, 0));
  for (int n = 0; n <= degree; ++n) {
    binom_[n][0] = 1 % p;
    for (int k = 1; k <= n; ++k) binom_[n][k] = F_.add(binom_[n - 1][k - 1], k <= n - 1 ? binom_[n - 1][k] : 0);
  }
}

size_t SymModule::index_of(int i, int j, int k) const {
  require(i >= 0 && j >= 0 && k >= 0 && i + j + k == g_, "monomial has wrong degree");
  return mono_pos(g_, i, j);
}

std::string SymModule::basis_label(size_t idx) const {
  static const char* vars[3] = {"x", "y", "z"};
  const auto& m = mons_[idx];
  std::string s;
  for (int t = 0; t < 3; ++t) {
    if (!m[t]) continue;
    if (!s.empty()) s += "*";
    s += vars[t];
    if (m[t] > 1) s += "^" + std::to_string(m[t]);
  }
  return s.empty() ? "1" : s;
}

std::vector<Vec> SymModule::dense_action(const Mat3& g) const {
  const Mat3 m = mod_entries(g, p());
  // x_t -> sum_s m(t, s) x_s ; images built degree by degree.
  std::vector<Vec> prev{Vec{1u % p()}};
  for (int d = 1; d <= g_; ++d) {
    const size_t dd = sym_dim(d);
    std::vector<Vec> cur(dd, Vec(dd, 0));
    for (int i = d; i >= 0; --i)
      for (int j = d - i; j >= 0; --j) {
        int k = d - i - j;
        int t;
        size_t src;
        if (i > 0) {
          t = 0;
          src = mono_pos(d - 1, i - 1, j);
        } else if (j > 0) {
          t = 1;
          src = mono_pos(d - 1, 0, j - 1);
        } else {
          t = 2;
          src = mono_pos(d - 1, 0, 0);
        }
        (void)k;
        Vec& out = cur[mono_pos(d, i, j)];
        const Vec& in = prev[src];
        for (int i2 = d - 1; i2 >= 0; --i2)
          for (int j2 = d - 1 - i2; j2 >= 0; --j2) {
            u32 c = in[mono_pos(d - 1, i2, j2)];
            if (!c) continue;
            if (m(t, 0)) { auto& o = out[mono_pos(d, i2 + 1, j2)]; o = F_.add(o, F_.mul(c, static_cast<u32>(m(t, 0)))); }
            if (m(t, 1)) { auto& o = out[mono_pos(d, i2, j2 + 1)]; o = F_.add(o, F_.mul(c, static_cast<u32>(m(t, 1)))); }
            if (m(t, 2)) { auto& o = out[mono_pos(d, i2, j2)]; o = F_.add(o, F_.mul(c, static_cast<u32>(m(t, 2)))); }
          }
      }
    prev = std::move(cur);
  }
  return prev;
}

SparseMat SymModule::action_matrix(const Mat3& g) const { return SparseMat::from_dense(dense_action(g), dim()); }

u32 SymModule::single_coeff(const Mat3& m, size_t source, size_t target, u64* work) const {
  const auto& r = mons_[source];
  const auto& c = mons_[target];
  const u32 p = this->p();
  // Powers m(t,s)^n for n <= g.
  auto pw = [&](int t, int s, int n) { return F_.pow(static_cast<u32>(m(t, s)), n); };
  u64 total = 0;
  u64 visited = 0;
  auto ok = [&](int t, int s, int n) { return n == 0 || m(t, s) != 0; };
  for (int n00 = 0; n00 <= std::min(r[0], c[0]); ++n00) {
    if (!ok(0, 0, n00)) break;
    for (int n10 = 0; n10 <= std::min(r[1], c[0] - n00); ++n10) {
      if (!ok(1, 0, n10)) break;
      int n20 = c[0] - n00 - n10;
      if (n20 > r[2] || !ok(2, 0, n20)) continue;
      for (int n01 = 0; n01 <= std::min(r[0] - n00, c[1]); ++n01) {
        if (!ok(0, 1, n01)) break;
        for (int n11 = 0; n11 <= std::min(r[1] - n10, c[1] - n01); ++n11) {
          if (!ok(1, 1, n11)) break;
          int n21 = c[1] - n01 - n11;
          if (n21 < 0 || n21 > r[2] - n20 || !ok(2, 1, n21)) continue;
          int n02 = r[0] - n00 - n01, n12 = r[1] - n10 - n11, n22 = r[2] - n20 - n21;
          if (!ok(0, 2, n02) || !ok(1, 2, n12) || !ok(2, 2, n22)) continue;
          ++visited;
          u64 term = 1;
          term = term * binom_[r[0]][n00] % p * binom_[n01 + n02][n01] % p;
          term = term * binom_[r[1]][n10] % p * binom_[n11 + n12][n11] % p;
          term = term * binom_[r[2]][n20] % p * binom_[n21 + n22][n21] % p;
          if (!term) continue;
          term = term * pw(0, 0, n00) % p * pw(0, 1, n01) % p * pw(0, 2, n02) % p;
          term = term * pw(1, 0, n10) % p * pw(1, 1, n11) % p * pw(1, 2, n12) % p;
          term = term * pw(2, 0, n20) % p * pw(2, 1, n21) % p * pw(2, 2, n22) % p;
          total = (total + term) % p;
        }
      }
    }
  }
  if (work) *work += visited + 1;
  return static_cast<u32>(total);
}

u32 SymModule::coeff_of(const Vec& v, const Mat3& g, size_t i) const { return coeff_of(v, g, i, nullptr); }

u32 SymModule::coeff_of(const Vec& v, const Mat3& g, size_t i, u64* work) const {
  const Mat3 m = mod_entries(g, p());
  u64 acc = 0;
  for (size_t a = 0; a < v.size(); ++a) {
    if (!v[a]) continue;
    // Cheap weight screen for diagonal g.
    acc = (acc + static_cast<u64>(v[a]) * single_coeff(m, a, i, work)) % p();
  }
  return static_cast<u32>(acc);
}

double SymModule::coeff_cost(size_t i) const {
  double c = 1;
  for (int e : mons_[i]) c *= (e + 1.0) * (e + 2.0) / 2.0;
  return c;
}

Vec SymModule::coeff_functional(const Mat3& g, size_t target) const {
  const Mat3 m = mod_entries(g, p());
  const auto& c = mons_[target];
  const u32 p = this->p();
  // Each column s of the contingency table distributes c[s] among the three rows.
  struct Part {
    int n[3];
    u32 w;  // prod_t m(t,s)^n_t
  };
  std::array<std::vector<Part>, 3> parts;
  for (int s = 0; s < 3; ++s) {
    for (int n0 = 0; n0 <= c[s]; ++n0)
      for (int n1 = 0; n0 + n1 <= c[s]; ++n1) {
        int n2 = c[s] - n0 - n1;
        u32 w = F_.mul(F_.mul(F_.pow(static_cast<u32>(m(0, s)), n0), F_.pow(static_cast<u32>(m(1, s)), n1)),
                       F_.pow(static_cast<u32>(m(2, s)), n2));
        if (w) parts[s].push_back({{n0, n1, n2}, w});
      }
  }
  Vec out(dim(), 0);
  for (const auto& a : parts[0])
    for (const auto& b : parts[1]) {
      u64 ab = static_cast<u64>(a.w) * b.w % p;
      for (const auto& e : parts[2]) {
        int r0 = a.n[0] + b.n[0] + e.n[0], r1 = a.n[1] + b.n[1] + e.n[1];
        // multinomial(r_t; a_t, b_t, e_t) = C(r_t, a_t) C(b_t + e_t, b_t)
        u64 t = ab * e.w % p;
        for (int row = 0; row < 3 && t; ++row) {
          int rt = a.n[row] + b.n[row] + e.n[row];
          t = t * binom_[rt][a.n[row]] % p * binom_[b.n[row] + e.n[row]][b.n[row]] % p;
        }
        if (!t) continue;
        size_t src = mono_pos(g_, r0, r1);
        out[src] = static_cast<u32>((out[src] + t) % p);
      }
    }
  return out;
}

// ---- TensorModule ----------------------------------------------------------

TensorModule::TensorModule(int a, int b, u32 p) : GModule(p), A_(a, p), B_(b, p) {}

std::string TensorModule::basis_label(size_t i) const {
  return A_.basis_label(i / B_.dim()) + "⊗" + B_.basis_label(i % B_.dim());
}

std::array<int, 3> TensorModule::weight_of(size_t i) const {
  const auto& x = A_.monomial(i / B_.dim());
  const auto& y = B_.monomial(i % B_.dim());
  return {x[0] + y[0], x[1] + y[1], x[2] + y[2]};
}

SparseMat TensorModule::action_matrix(const Mat3& g) const {
  auto a = A_.dense_action(g), b = B_.dense_action(g);
  const size_t da = A_.dim(), db = B_.dim();
  SparseMat m(da * db, da * db);
  for (size_t al = 0; al < da; ++al)
    for (size_t be = 0; be < db; ++be) {
      for (size_t ga = 0; ga < da; ++ga) {
        if (!a[al][ga]) continue;
        for (size_t de = 0; de < db; ++de)
          if (b[be][de]) m.push_entry(static_cast<u32>(ga * db + de), F_.mul(a[al][ga], b[be][de]));
      }
      m.end_row();
    }
  return m;
}

Vec TensorModule::coeff_functional(const Mat3& g, size_t i) const {
  const size_t db = B_.dim();
  Vec fa = A_.coeff_functional(g, i / db), fb = B_.coeff_functional(g, i % db);
  Vec out(dim(), 0);
  for (size_t al = 0; al < fa.size(); ++al) {
    if (!fa[al]) continue;
    for (size_t be = 0; be < db; ++be) out[al * db + be] = F_.mul(fa[al], fb[be]);
  }
  return out;
}

Vec TensorModule::act(const Vec& v, const Mat3& g) const {
  require(v.size() == dim(), "vector length does not match module");
  auto a = A_.dense_action(g), b = B_.dense_action(g);
  const size_t da = A_.dim(), db = B_.dim();
  const u64 p = this->p();
  // Y = X B, then result = A^T Y.
  std::vector<u64> y(da * db, 0);
  for (size_t al = 0; al < da; ++al)
    for (size_t be = 0; be < db; ++be) {
      u32 x = v[al * db + be];
      if (!x) continue;
      for (size_t de = 0; de < db; ++de) y[al * db + de] = (y[al * db + de] + static_cast<u64>(x) * b[be][de]) % p;
    }
  Vec out(da * db, 0);
  for (size_t al = 0; al < da; ++al)
    for (size_t ga = 0; ga < da; ++ga) {
      u32 s = a[al][ga];
      if (!s) continue;
      for (size_t de = 0; de < db; ++de) {
        u32 t = static_cast<u32>(y[al * db + de]);
        if (t) out[ga * db + de] = static_cast<u32>((out[ga * db + de] + static_cast<u64>(s) * t) % p);
      }
    }
  return out;
}

// ---- SubModule -------------------------------------------------------------

SubModule::SubModule(std::shared_ptr<const TensorModule> ambient, std::vector<SparseVec> basis)
    : GModule(ambient->p()), amb_(std::move(ambient)), basis_(std::move(basis)) {
  lead_pos_.assign(amb_->dim(), -1);
  for (size_t i = 0; i < basis_.size(); ++i) {
    require(!basis_[i].idx.empty(), "zero basis vector");
    lead_.push_back(basis_[i].idx.front());
  }
  for (size_t i = 0; i < basis_.size(); ++i) lead_pos_[lead_[i]] = static_cast<int>(i);
  // Leading-index property.
  for (size_t j = 0; j < basis_.size(); ++j)
    for (size_t k = 0; k < basis_[j].idx.size(); ++k) {
      int pos = lead_pos_[basis_[j].idx[k]];
      bool fine = pos < 0 || (pos == static_cast<int>(j) ? basis_[j].val[k] == 1 : false);
      require(fine, "basis is not in leading-index form");
    }
}

std::string SubModule::basis_label(size_t i) const { return "[" + amb_->basis_label(lead_[i]) + "]"; }

SparseMat SubModule::action_matrix(const Mat3& g) const {
  const auto& A = amb_->left();
  const auto& B = amb_->right();
  const size_t db = B.dim(), n = dim();
  SparseMat As = A.action_matrix(g), Bs = B.action_matrix(g);
  auto Ad = As.to_dense(), Bd = Bs.to_dense();
  const u64 p = this->p();
  std::vector<u32> lead_a(n), lead_b(n);
  for (size_t i = 0; i < n; ++i) {
    lead_a[i] = static_cast<u32>(lead_[i] / db);
    lead_b[i] = static_cast<u32>(lead_[i] % db);
  }
  SparseMat out(n, n);
  std::vector<u64> acc(n);
  for (size_t j = 0; j < n; ++j) {
    std::fill(acc.begin(), acc.end(), 0);
    const auto& v = basis_[j];
    for (size_t k = 0; k < v.idx.size(); ++k) {
      const size_t al = v.idx[k] / db, be = v.idx[k] % db;
      const u64 c = v.val[k];
      const u64 na = As.row_end(al) - As.row_begin(al), nb = Bs.row_end(be) - Bs.row_begin(be);
      if (na * nb <= n) {
        for (u32 ka = As.row_begin(al); ka < As.row_end(al); ++ka) {
          const u64 ca = c * As.val_at(ka) % p;
          const size_t base = static_cast<size_t>(As.col_at(ka)) * db;
          for (u32 kb = Bs.row_begin(be); kb < Bs.row_end(be); ++kb) {
            int pos = lead_pos_[base + Bs.col_at(kb)];
            if (pos >= 0) acc[pos] = (acc[pos] + ca * Bs.val_at(kb)) % p;
          }
        }
      } else {
        const Vec& ra = Ad[al];
        const Vec& rb = Bd[be];
        for (size_t i = 0; i < n; ++i) {
          u32 x = ra[lead_a[i]];
          if (!x) continue;
          u32 y = rb[lead_b[i]];
          if (y) acc[i] = (acc[i] + c * x % p * y) % p;
        }
      }
    }
    for (size_t i = 0; i < n; ++i)
      if (acc[i]) out.push_entry(static_cast<u32>(i), static_cast<u32>(acc[i]));
    out.end_row();
  }
  return out;
}

Vec SubModule::coeff_functional(const Mat3& g, size_t i) const {
  const size_t db = amb_->right().dim();
  Vec fa = amb_->left().coeff_functional(g, lead_[i] / db);
  Vec fb = amb_->right().coeff_functional(g, lead_[i] % db);
  const u64 p = this->p();
  Vec out(dim(), 0);
  for (size_t j = 0; j < dim(); ++j) {
    const auto& v = basis_[j];
    u64 acc = 0;
    for (size_t k = 0; k < v.idx.size(); ++k) {
      u32 x = fa[v.idx[k] / db];
      if (!x) continue;
      u32 y = fb[v.idx[k] % db];
      if (y) acc = (acc + static_cast<u64>(v.val[k]) * x % p * y) % p;
    }
    out[j] = static_cast<u32>(acc);
  }
  return out;
}

Vec SubModule::to_ambient(const Vec& coords) const {
  Vec out(amb_->dim(), 0);
  for (size_t j = 0; j < dim(); ++j) {
    if (!coords[j]) continue;
    const auto& v = basis_[j];
    for (size_t k = 0; k < v.idx.size(); ++k) out[v.idx[k]] = F_.add(out[v.idx[k]], F_.mul(coords[j], v.val[k]));
  }
  return out;
}

Vec SubModule::from_ambient(const Vec& amb) const {
  Vec out(dim());
  for (size_t j = 0; j < dim(); ++j) out[j] = amb[lead_[j]];
  return out;
}

// ---- TwistedModule ---------------------------------------------------------

TwistedModule::TwistedModule(std::shared_ptr<const GModule> base, int det_power, Character eps, u32 level)
    : GModule(base->p()), base_(std::move(base)), s_(det_power), eps_(std::move(eps)), level_(level) {
  require(level_ % std::max<u32>(eps_.conductor(), 1) == 0, "character conductor must divide the level");
}

u32 TwistedModule::scalar(const Mat3& g) const {
  i64 d = det(g);
  require(std::gcd(d, static_cast<i64>(p())) == 1, "determinant must be prime to p");
  u32 s = 1;
  if (s_ != 0) {
    u32 dp = F_.from_int(d);
    s = s_ > 0 ? F_.pow(dp, s_) : F_.pow(F_.inv(dp), -s_);
  }
  if (!eps_.is_trivial()) {
    require(std::gcd(g(0, 0), static_cast<i64>(level_)) == 1, "(1,1) entry must be prime to the level");
    s = F_.mul(s, eps_.value_mod(g(0, 0), F_));
  }
  return s;
}

SparseMat TwistedModule::action_matrix(const Mat3& g) const {
  const u32 s = scalar(g);
  SparseMat m = base_->action_matrix(g);
  SparseMat out(m.rows(), m.cols());
  for (size_t i = 0; i < m.rows(); ++i) {
    for (u32 k = m.row_begin(i); k < m.row_end(i); ++k) out.push_entry(m.col_at(k), F_.mul(s, m.val_at(k)));
    out.end_row();
  }
  return out;
}

// ---- Highest weight vectors and spans ---------------------------------------

Vec hw_vector(const TensorModule& T, int a, int b) {
  require(T.left().degree() == a && T.right().degree() == b, "tensor module degrees do not match");
  require(a >= b && b >= 0, "need a >= b >= 0");
  const PrimeField& F = T.field();
  const size_t db = T.right().dim();
  Vec v(T.dim(), 0);
  // C(b, i) mod p by the multiplicative recurrence is unsafe when b >= p; use Pascal.
  std::vector<u32> row{1};
  for (int n = 1; n <= b; ++n) {
    std::vector<u32> nr(n + 1, 1);
    for (int k = 1; k < n; ++k) nr[k] = F.add(row[k - 1], row[k]);
    row = std::move(nr);
  }
  for (int i = 0; i <= b; ++i) {
    size_t al = T.left().index_of(a - i, i, 0), be = T.right().index_of(i, b - i, 0);
    u32 c = row[i] % F.p();
    if (i % 2) c = F.neg(c);
    v[al * db + be] = F.add(v[al * db + be], c);
  }
  return v;
}

namespace {

struct WeightClass {
  std::vector<u32> amb;       // ambient indices, increasing
  std::vector<Vec> rows;      // reduced echelon rows, sorted by pivot
  std::vector<u32> pivots;    // local pivot column per row
};

}  // namespace

std::shared_ptr<SubModule> span_submodule(std::shared_ptr<const TensorModule> T, const Vec& seed,
                                          bool split_by_weight) {
  const PrimeField& F = T->field();
  const size_t n = T->dim();
  require(seed.size() == n, "seed length does not match module");
  require(std::any_of(seed.begin(), seed.end(), [](u32 x) { return x != 0; }), "seed must be nonzero");

  // Partition ambient coordinates.
  std::vector<u32> cls(n), local(n);
  std::vector<WeightClass> classes;
  if (split_by_weight) {
    std::map<std::array<int, 3>, u32> ids;
    for (size_t i = 0; i < n; ++i) {
      auto w = T->weight_of(i);
      auto it = ids.find(w);
      if (it == ids.end()) {
        it = ids.emplace(w, static_cast<u32>(classes.size())).first;
        classes.emplace_back();
      }
      cls[i] = it->second;
      local[i] = static_cast<u32>(classes[it->second].amb.size());
      classes[it->second].amb.push_back(static_cast<u32>(i));
    }
  } else {
    classes.resize(1);
    for (size_t i = 0; i < n; ++i) {
      cls[i] = 0;
      local[i] = static_cast<u32>(i);
      classes[0].amb.push_back(static_cast<u32>(i));
    }
  }

  // Generators of GL_3(F_p).
  std::vector<std::pair<SparseMat, SparseMat>> gens;
  {
    std::vector<Mat3> mats;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (i != j) mats.push_back(Mat3::elementary(i, j, 1));
    mats.push_back(Mat3::diag(F.primitive_root(), 1, 1));
    for (const auto& m : mats) gens.emplace_back(T->left().action_matrix(m), T->right().action_matrix(m));
  }
  const size_t db = T->right().dim();

  std::deque<SparseVec> queue;
  // Insert the component of a vector living in one class; returns true if new.
  auto insert_local = [&](WeightClass& C, Vec w) {
    for (size_t r = 0; r < C.rows.size(); ++r) {
      u32 c = w[C.pivots[r]];
      if (!c) continue;
      const Vec& row = C.rows[r];
      for (size_t t = C.pivots[r]; t < w.size(); ++t)
        if (row[t]) w[t] = F.sub(w[t], F.mul(c, row[t]));
    }
    size_t piv = 0;
    while (piv < w.size() && !w[piv]) ++piv;
    if (piv == w.size()) return false;
    u32 inv = F.inv(w[piv]);
    for (auto& x : w) x = F.mul(x, inv);
    for (auto& row : C.rows) {
      u32 c = row[piv];
      if (!c) continue;
      for (size_t t = piv; t < w.size(); ++t)
        if (w[t]) row[t] = F.sub(row[t], F.mul(c, w[t]));
    }
    size_t pos = std::lower_bound(C.pivots.begin(), C.pivots.end(), static_cast<u32>(piv)) - C.pivots.begin();
    C.pivots.insert(C.pivots.begin() + pos, static_cast<u32>(piv));
    SparseVec sv;
    for (size_t t = 0; t < w.size(); ++t)
      if (w[t]) {
        sv.idx.push_back(C.amb[t]);
        sv.val.push_back(w[t]);
      }
    C.rows.insert(C.rows.begin() + pos, std::move(w));
    queue.push_back(std::move(sv));
    return true;
  };
  auto insert_sparse = [&](const std::vector<u32>& idx, const std::vector<u32>& val) {
    std::map<u32, Vec> parts;
    for (size_t k = 0; k < idx.size(); ++k) {
      u32 c = cls[idx[k]];
      auto it = parts.find(c);
      if (it == parts.end()) it = parts.emplace(c, Vec(classes[c].amb.size(), 0)).first;
      it->second[local[idx[k]]] = val[k];
    }
    for (auto& [c, w] : parts) insert_local(classes[c], std::move(w));
  };

  {
    std::vector<u32> idx, val;
    for (size_t i = 0; i < n; ++i)
      if (seed[i]) {
        idx.push_back(static_cast<u32>(i));
        val.push_back(seed[i]);
      }
    if (split_by_weight) {
      u32 c0 = cls[idx.front()];
      for (u32 i : idx) require(cls[i] == c0, "seed must be a weight vector when splitting by weight");
    }
    insert_sparse(idx, val);
  }

  std::vector<u64> buf(n, 0);
  std::vector<u32> touched;
  std::vector<char> mark(n, 0);
  const u64 p = F.p();
  while (!queue.empty()) {
    SparseVec v = std::move(queue.front());
    queue.pop_front();
    for (const auto& [Ag, Bg] : gens) {
      touched.clear();
      for (size_t k = 0; k < v.idx.size(); ++k) {
        const size_t al = v.idx[k] / db, be = v.idx[k] % db;
        const u64 c = v.val[k];
        for (u32 ka = Ag.row_begin(al); ka < Ag.row_end(al); ++ka) {
          const u64 ca = c * Ag.val_at(ka) % p;
          const size_t base = static_cast<size_t>(Ag.col_at(ka)) * db;
          for (u32 kb = Bg.row_begin(be); kb < Bg.row_end(be); ++kb) {
            const size_t t = base + Bg.col_at(kb);
            if (!mark[t]) {
              mark[t] = 1;
              touched.push_back(static_cast<u32>(t));
            }
            buf[t] = (buf[t] + ca * Bg.val_at(kb)) % p;
          }
        }
      }
      std::sort(touched.begin(), touched.end());
      std::vector<u32> idx, val;
      for (u32 t : touched) {
        if (buf[t]) {
          idx.push_back(t);
          val.push_back(static_cast<u32>(buf[t]));
        }
        buf[t] = 0;
        mark[t] = 0;
      }
      if (!idx.empty()) insert_sparse(idx, val);
    }
  }

  std::vector<SparseVec> basis;
  for (const auto& C : classes)
    for (const auto& row : C.rows) {
      SparseVec sv;
      for (size_t t = 0; t < row.size(); ++t)
        if (row[t]) {
          sv.idx.push_back(C.amb[t]);
          sv.val.push_back(row[t]);
        }
      basis.push_back(std::move(sv));
    }
  std::sort(basis.begin(), basis.end(), [](const SparseVec& x, const SparseVec& y) { return x.idx[0] < y.idx[0]; });
  return std::make_shared<SubModule>(std::move(T), std::move(basis));
}

std::shared_ptr<const GModule> irreducible_module(const Weight& w, u32 p) {
  require(w.p_restricted(p), w.label() + " is not p-restricted for p = " + std::to_string(p));
  Weight u = w.untwisted();
  if (u.b == 0) return std::make_shared<SymModule>(u.a, p);
  auto T = std::make_shared<TensorModule>(u.a, u.b, p);
  return span_submodule(T, hw_vector(*T, u.a, u.b), true);
}

}  // namespace sl3
