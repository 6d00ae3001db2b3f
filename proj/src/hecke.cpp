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

#include "hecke.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "error.hpp"
#include "linalg.hpp"

namespace sl3 {

namespace {

i64 ipow(i64 b, int e) {
  i64 r = 1;
  while (e-- > 0) r *= b;
  return r;
}

Mat3 with_col(Mat3 m, int j, const Vec3& v) {
  m.set_col(j, v);
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// Coset representatives

bool same_coset(const Mat3& a, const Mat3& b, u32 N) {
  const i64 d = det(b);
  if (det(a) != d || d == 0) return false;
  Mat3 c = a * adj(b);
  for (auto& x : c.a) {
    if (x % d != 0) return false;
    x /= d;
  }
  return det(c) == 1 && mod_reduce(c(0, 1), N) == 0 && mod_reduce(c(0, 2), N) == 0;
}

HeckeCosets hecke_cosets(u32 ell, int k, u32 N, u32 p) {
  require(is_prime(ell), "ell must be prime");
  require(k == 1 || k == 2, "only T(ell,1) and T(ell,2) are supported");
  require(N >= 1, "level must be positive");
  if (ell == p || N % ell == 0) fail(ErrorKind::InvalidArgument, "ell divides pN");
  const i64 l = ell;
  std::vector<Mat3> hnf;
  if (k == 1) {
    hnf.push_back(Mat3::diag(l, 1, 1));
    for (i64 a = 0; a < l; ++a) hnf.push_back(Mat3::rows({1, a, 0}, {0, l, 0}, {0, 0, 1}));
    for (i64 a = 0; a < l; ++a)
      for (i64 b = 0; b < l; ++b) hnf.push_back(Mat3::rows({1, 0, a}, {0, 1, b}, {0, 0, l}));
  } else {
    for (i64 a = 0; a < l; ++a)
      for (i64 b = 0; b < l; ++b) hnf.push_back(Mat3::rows({1, a, b}, {0, l, 0}, {0, 0, l}));
    for (i64 a = 0; a < l; ++a) hnf.push_back(Mat3::rows({l, 0, 0}, {0, 1, a}, {0, 0, l}));
    hnf.push_back(Mat3::diag(l, l, 1));
  }
  HeckeCosets out{ell, k, N, {}};
  const i64 target = ipow(l, k);
  for (const Mat3& B : hnf) {
    Mat3 Bp = B;
    if (N > 1) Bp = inverse_unimodular(lift_rep(coset_of(B, N, p), N, p)) * B;
    if (det(Bp) != target || mod_reduce(Bp(0, 1), N) != 0 || mod_reduce(Bp(0, 2), N) != 0)
      fail(ErrorKind::Computation, "coset representative outside the semigroup");
    out.reps.push_back(Bp);
  }
  if (ell <= 7) {
    for (size_t i = 0; i < out.reps.size(); ++i)
      for (size_t j = i + 1; j < out.reps.size(); ++j)
        if (same_coset(out.reps[i], out.reps[j], N))
          fail(ErrorKind::Computation, "coset representatives are not distinct");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Symbol reduction

namespace {

// Column Hermite form: lower triangular L = Q U with U unimodular and positive diagonal.
Mat3 column_hnf(Mat3 L) {
  for (int r = 0; r < 3; ++r) {
    for (int c = r + 1; c < 3; ++c) {
      const i64 a = L(r, r), b = L(r, c);
      if (b == 0) continue;
      i64 x, y;
      const i64 g = ext_gcd(a, b, x, y);
      const Vec3 cr = L.col(r), cc = L.col(c);
      Vec3 nr, nc;
      for (int i = 0; i < 3; ++i) {
        nr[i] = x * cr[i] + y * cc[i];
        nc[i] = (-b / g) * cr[i] + (a / g) * cc[i];
      }
      L.set_col(r, nr);
      L.set_col(c, nc);
    }
    if (L(r, r) < 0) {
      Vec3 v = L.col(r);
      for (auto& t : v) t = -t;
      L.set_col(r, v);
    }
  }
  return L;
}

void reduce_rec(Mat3 Q, size_t depth, std::vector<SymbolTerm>& out, ReduceStats& st) {
  st.nodes++;
  st.max_depth = std::max(st.max_depth, depth);
  for (int j = 0; j < 3; ++j) {
    Vec3 v = Q.col(j);
    const i64 g = gcd3(v);
    if (g > 1) {
      for (auto& t : v) t /= g;
      Q.set_col(j, v);
    }
  }
  const i64 d = det(Q);
  if (d == 1 || d == -1) {
    if (d < 0) {
      Vec3 v = Q.col(0);
      for (auto& t : v) t = -t;
      Q.set_col(0, v);
    }
    out.push_back({Q, 1});
    return;
  }
  const i64 D = d < 0 ? -d : d;
  const i64 sgn = d < 0 ? -1 : 1;
  const Mat3 L = column_hnf(Q);
  const Mat3 A = adj(Q);
  i64 best_score = -1;
  Vec3 best_v{}, best_y{};
  for (i64 v0 = 0; v0 < L(0, 0); ++v0)
    for (i64 v1 = 0; v1 < L(1, 1); ++v1)
      for (i64 v2 = 0; v2 < L(2, 2); ++v2) {
        if (v0 == 0 && v1 == 0 && v2 == 0) continue;
        Vec3 y = A * Vec3{v0, v1, v2};
        i64 score = 0;
        for (auto& t : y) {
          t = mod_reduce(sgn * t, static_cast<u32>(D));
          if (2 * t > D) t -= D;
          score = std::max(score, t < 0 ? -t : t);
        }
        Vec3 w = Q * y;
        for (auto& t : w) t /= D;
        if (best_score < 0 || score < best_score || (score == best_score && w < best_v)) {
          best_score = score;
          best_v = w;
          best_y = y;
        }
      }
  for (int i = 0; i < 3; ++i) {
    if (best_y[i] == 0) continue;
    Mat3 child = with_col(Q, i, best_v);
    const i64 cd = det(child);
    if ((cd < 0 ? -cd : cd) >= D) st.det_decreased = false;
    reduce_rec(child, depth + 1, out, st);
  }
}

}  // namespace

std::vector<SymbolTerm> reduce_symbol(const Mat3& Q, ReduceStats* stats) {
  if (det(Q) == 0) fail(ErrorKind::InvalidArgument, "modular symbol of a singular matrix");
  ReduceStats local;
  std::vector<SymbolTerm> out;
  reduce_rec(Q, 0, out, stats ? *stats : local);
  return out;
}

// ---------------------------------------------------------------------------
// Symbol cache

namespace {

constexpr char kSymbolMagic[8] = {'S', 'L', '3', 'S', 'Y', 'M', 'B', '1'};
constexpr u32 kSymbolVersion = 1;

u64 fnv1a(const HeckeCosets& c) {
  u64 h = 1469598103934665603ull;
  auto mix = [&](i64 x) {
    for (int b = 0; b < 8; ++b) {
      h ^= static_cast<u64>(x >> (8 * b)) & 0xff;
      h *= 1099511628211ull;
    }
  };
  mix(c.ell);
  mix(c.k);
  mix(c.N);
  for (const auto& m : c.reps)
    for (i64 x : m.a) mix(x);
  return h;
}

template <class T>
void put(std::ostream& o, const T& v) {
  o.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <class T>
bool get(std::istream& in, T& v) {
  return static_cast<bool>(in.read(reinterpret_cast<char*>(&v), sizeof(T)));
}

}  // namespace

std::string SymbolCache::path_for(const HeckeCosets& c) const {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(c)));
  return dir_ + "/symbols/" + std::to_string(c.ell) + "_" + std::to_string(c.k) + "_" + buf + ".bin";
}

std::optional<std::vector<std::vector<SymbolTerm>>> SymbolCache::load(const HeckeCosets& c) const {
  std::ifstream in(path_for(c), std::ios::binary);
  if (!in) return std::nullopt;
  char magic[8];
  u32 version = 0, ell = 0, N = 0;
  std::int32_t k = 0;
  u64 n = 0;
  if (!in.read(magic, 8) || std::memcmp(magic, kSymbolMagic, 8) != 0) return std::nullopt;
  if (!get(in, version) || version != kSymbolVersion) return std::nullopt;
  if (!get(in, ell) || !get(in, k) || !get(in, N) || !get(in, n)) return std::nullopt;
  if (ell != c.ell || k != c.k || N != c.N || n != c.reps.size()) return std::nullopt;
  std::vector<std::vector<SymbolTerm>> dec(n);
  for (u64 i = 0; i < n; ++i) {
    Mat3 rep;
    for (auto& x : rep.a)
      if (!get(in, x)) return std::nullopt;
    if (!(rep == c.reps[i])) return std::nullopt;
    u64 t = 0;
    if (!get(in, t)) return std::nullopt;
    dec[i].resize(t);
    for (auto& term : dec[i]) {
      std::int32_t s = 0;
      if (!get(in, s)) return std::nullopt;
      term.sign = s;
      for (auto& x : term.m.a)
        if (!get(in, x)) return std::nullopt;
    }
  }
  return dec;
}

void SymbolCache::store(const HeckeCosets& c, const std::vector<std::vector<SymbolTerm>>& dec) const {
  const std::string path = path_for(c);
  std::filesystem::create_directories(std::filesystem::path(path).parent_path());
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::Io, "cannot write " + tmp);
    out.write(kSymbolMagic, 8);
    put(out, kSymbolVersion);
    put(out, c.ell);
    put(out, static_cast<std::int32_t>(c.k));
    put(out, c.N);
    put(out, static_cast<u64>(c.reps.size()));
    for (size_t i = 0; i < c.reps.size(); ++i) {
      for (i64 x : c.reps[i].a) put(out, x);
      put(out, static_cast<u64>(dec[i].size()));
      for (const auto& t : dec[i]) {
        put(out, static_cast<std::int32_t>(t.sign));
        for (i64 x : t.m.a) put(out, x);
      }
    }
    if (!out) fail(ErrorKind::Io, "short write to " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// Hecke operators

HeckeOperator hecke_operator(u32 ell, int k, u32 N, u32 p, const SymbolCache* cache) {
  HeckeCosets c = hecke_cosets(ell, k, N, p);
  std::vector<std::vector<SymbolTerm>> dec;
  if (cache) {
    if (auto hit = cache->load(c)) dec = std::move(*hit);
  }
  if (dec.empty()) {
    for (const auto& B : c.reps) dec.push_back(reduce_symbol(B));
    if (cache) cache->store(c, dec);
  }
  HeckeOperator T{ell, k, N, c.reps.size(), {}, {}};
  for (size_t i = 0; i < c.reps.size(); ++i)
    for (const auto& t : dec[i]) {
      T.terms.push_back(adj(t.m) * c.reps[i]);
      T.signs.push_back(t.sign);
    }
  return T;
}

Vec hecke_image(const GModule& V, const HeckeOperator& T, const Vec& v) {
  const PrimeField& F = V.field();
  Vec out(V.dim(), 0);
  for (size_t t = 0; t < T.terms.size(); ++t) {
    Vec w = V.act(v, T.terms[t]);
    for (size_t i = 0; i < out.size(); ++i) out[i] = T.signs[t] > 0 ? F.add(out[i], w[i]) : F.sub(out[i], w[i]);
  }
  return out;
}

std::vector<u32> hecke_coefficients(const InducedModule& V, const HeckeOperator& T, size_t i,
                                    const std::vector<Vec>& vs) {
  const u32 p = V.p();
  const size_t dw = V.inner().dim(), y = i / dw, t = i % dw;
  std::vector<u64> acc(vs.size(), 0);
  for (size_t n = 0; n < T.terms.size(); ++n) {
    const Mat3& g = T.terms[n];
    const auto [src, scalar] = V.block_entry(g, y);
    const Vec f = V.inner().coeff_functional(g, t);
    for (size_t r = 0; r < vs.size(); ++r) {
      const u32* blk = vs[r].data() + static_cast<size_t>(src) * dw;
      u64 s = 0;
      for (size_t a = 0; a < dw; ++a)
        if (f[a] && blk[a]) s = (s + static_cast<u64>(f[a]) * blk[a]) % p;
      s = s * scalar % p;
      acc[r] = T.signs[n] > 0 ? (acc[r] + s) % p : (acc[r] + p - s) % p;
    }
  }
  return std::vector<u32>(acc.begin(), acc.end());
}

std::vector<Vec> hecke_matrix(const HomologySpace& H, const HeckeOperator& T) {
  const size_t n = H.dim();
  std::vector<Vec> A(n, Vec(n, 0));
  for (size_t l = 0; l < n; ++l) {
    auto col = hecke_coefficients(H.module(), T, H.distinguished(l), H.basis());
    for (size_t r = 0; r < n; ++r) A[r][l] = col[r];
  }
  return A;
}

std::vector<u32> good_primes(u32 bound, u32 p, u32 N) {
  std::vector<u32> out;
  for (u32 l = 2; l <= bound; ++l)
    if (is_prime(l) && l != p && N % l != 0) out.push_back(l);
  return out;
}

Vec combine_basis(const HomologySpace& H, const Vec& coeffs) {
  const PrimeField& F = H.module().field();
  Vec out(H.module().dim(), 0);
  for (size_t l = 0; l < H.dim(); ++l) {
    if (!coeffs[l]) continue;
    const Vec& f = H.vector(l);
    for (size_t i = 0; i < out.size(); ++i)
      if (f[i]) out[i] = F.add(out[i], F.mul(coeffs[l], f[i]));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Eigensystems

namespace {

using EMat = linalg::Matrix<ExtField>;
using Elem = ExtField::Elem;

int exact_degree(const ExtField& E, const Elem& x) {
  for (int d = 1; d < E.degree(); ++d) {
    if (E.degree() % d) continue;
    Elem y = x;
    for (int t = 0; t < d; ++t) y = E.frobenius(y);
    if (y == x) return d;
  }
  return E.degree();
}

std::vector<Elem> distinct_roots(const ExtField& E, const std::vector<Elem>& coeffs) {
  std::vector<Elem> out;
  for (u64 idx = 0; idx < E.order(); ++idx) {
    const Elem x = E.from_index(idx);
    Elem v = E.zero();
    for (size_t i = coeffs.size(); i-- > 0;) v = E.add(E.mul(v, x), coeffs[i]);
    if (E.is_zero(v)) out.push_back(x);
  }
  return out;
}

EMat lift(const ExtField& E, const std::vector<Vec>& A) {
  EMat out(A.size());
  for (size_t i = 0; i < A.size(); ++i)
    for (u32 x : A[i]) out[i].push_back(E.from_base(x));
  return out;
}

EMat minus_scalar(const ExtField& E, EMat A, const Elem& s) {
  for (size_t i = 0; i < A.size(); ++i) A[i][i] = E.sub(A[i][i], s);
  return A;
}

void log_msg(const EigenOptions& opt, const std::string& s) {
  if (opt.log) opt.log(s);
}

Elem twist(const ExtField& E, u32 ell, int k, int c) {
  return E.from_base(static_cast<u32>(powmod_u64(ell % E.p(), static_cast<u64>(k) * c, E.p())));
}

// F_p components of the vectors sum_l X[r][l] f_l.
std::vector<Vec> components(const HomologySpace& H, const ExtField& E, const EMat& X) {
  std::vector<Vec> out;
  for (const auto& x : X)
    for (int s = 0; s < E.degree(); ++s) {
      Vec c(H.dim());
      for (size_t l = 0; l < H.dim(); ++l) c[l] = x[l].c[s];
      out.push_back(combine_basis(H, c));
    }
  return out;
}

// Matrix C of T on the span of the rows of X (reduced echelon form, pivots piv): T x_r = sum_j C[r][j] x_j.
// Only the pivot coordinates of the images are computed.
EMat restrict_operator(const HomologySpace& H, const ExtField& E, const EMat& X, const std::vector<size_t>& piv,
                       const HeckeOperator& T) {
  const size_t m = X.size();
  const int deg = E.degree();
  auto comps = components(H, E, X);
  EMat C(m, linalg::Row<ExtField>(m));
  for (size_t j = 0; j < m; ++j) {
    auto vals = hecke_coefficients(H.module(), T, H.distinguished(piv[j]), comps);
    for (size_t r = 0; r < m; ++r) {
      std::vector<u32> cs(vals.begin() + r * deg, vals.begin() + (r + 1) * deg);
      C[r][j] = E.from_coeffs(cs);
    }
  }
  return C;
}

struct Piece {
  EMat X;
  std::map<std::pair<u32, int>, Elem> values;
};

}  // namespace

std::string EigenSystem::value_string(u32 ell, int k) const {
  const auto it = a.find(ell);
  if (it == a.end()) return "";
  const Elem& v = it->second[k - 1];
  if (degree == 1) return std::to_string(v.c[0]);
  return field().to_string(v);
}

Elem eigenvalue_at(const HomologySpace& H, const ExtField& E, const std::vector<Elem>& x, const HeckeOperator& T,
                   size_t coordinate) {
  const int deg = E.degree();
  std::vector<Vec> comps;
  for (int s = 0; s < deg; ++s) {
    Vec c(H.dim());
    for (size_t l = 0; l < H.dim(); ++l) c[l] = x[l].c[s];
    comps.push_back(combine_basis(H, c));
  }
  auto vals = hecke_coefficients(H.module(), T, coordinate, comps);
  std::vector<u32> num(vals.begin(), vals.end()), den(deg);
  for (int s = 0; s < deg; ++s) den[s] = comps[s][coordinate];
  const Elem d = E.from_coeffs(den);
  if (E.is_zero(d)) fail(ErrorKind::Computation, "eigenvector vanishes at the chosen coordinate");
  return E.div(E.from_coeffs(num), d);
}

std::vector<EigenSystem> eigensystems(const HomologySpace& H, const EigenOptions& opt) {
  require(H.dim() > 0, "eigensystems need a nonzero homology space");
  require(opt.max_degree >= 1 && opt.max_degree <= 3, "extension degree must be 1, 2 or 3");
  const u32 p = H.p(), N = H.level();
  const int c = H.weight().c;
  const auto primes = good_primes(opt.ell_max, p, N);
  require(!primes.empty(), "no good primes below the bound");
  const u32 q = opt.split_prime ? opt.split_prime : primes[0];
  std::map<std::pair<u32, int>, HeckeOperator> ops;
  auto op = [&](u32 ell, int k) -> const HeckeOperator& {
    auto key = std::make_pair(ell, k);
    auto it = ops.find(key);
    if (it == ops.end()) {
      log_msg(opt, "operator T(" + std::to_string(ell) + "," + std::to_string(k) + ")");
      it = ops.emplace(key, hecke_operator(ell, k, N, p, opt.cache)).first;
    }
    return it->second;
  };
  std::vector<std::pair<u32, int>> order = {{q, 1}, {q, 2}};
  for (u32 l : primes)
    if (l != q) {
      order.push_back({l, 1});
      order.push_back({l, 2});
    }

  const PrimeField F(p);
  const auto A = hecke_matrix(H, op(q, 1));
  const auto chi = linalg::charpoly(F, A);

  std::vector<EigenSystem> out;
  for (int deg = 1; deg <= opt.max_degree; ++deg) {
    const ExtField E(p, deg);
    std::vector<Elem> coeffs;
    for (u32 x : chi) coeffs.push_back(E.from_base(x));
    const auto roots = distinct_roots(E, coeffs);
    std::vector<Elem> done;  // one root per Frobenius orbit
    std::vector<EigenSystem> found;
    for (const Elem& lam : roots) {
      bool seen = false;
      for (const Elem& d : done) {
        Elem y = d;
        for (int t = 0; t < deg && !seen; ++t, y = E.frobenius(y)) seen = y == lam;
      }
      if (seen) continue;
      done.push_back(lam);
      if (opt.target && !opt.target(E, E.mul(lam, twist(E, q, 1, c)))) continue;
      EMat X = linalg::left_kernel(E, minus_scalar(E, lift(E, A), lam), H.dim());
      linalg::rref(E, X);
      std::vector<Piece> work = {Piece{X, {{{q, 1}, lam}}}};
      for (size_t oi = 1; oi < order.size(); ++oi) {
        std::vector<Piece> next;
        for (auto& P : work) {
          if (P.X.size() <= 1) {
            next.push_back(std::move(P));
            continue;
          }
          const auto piv = linalg::rref(E, P.X);
          EMat C = restrict_operator(H, E, P.X, piv, op(order[oi].first, order[oi].second));
          auto cp = linalg::charpoly(E, C);
          for (const Elem& mu : distinct_roots(E, cp)) {
            EMat K = linalg::left_kernel(E, minus_scalar(E, C, mu), C.size());
            Piece sub{linalg::matmul(E, K, P.X), P.values};
            linalg::rref(E, sub.X);
            sub.values[order[oi]] = mu;
            next.push_back(std::move(sub));
          }
        }
        work = std::move(next);
      }
      for (auto& P : work) {
        EigenSystem es;
        es.p = p;
        es.degree = deg;
        es.modulus = E.modulus();
        es.weight = H.weight();
        es.N = N;
        es.eps = H.character();
        es.multiplicity = P.X.size();
        es.fallback = P.X.size() > 1;
        es.vector = P.X[0];
        double best = -1;
        for (size_t l = 0; l < H.dim(); ++l) {
          if (E.is_zero(es.vector[l])) continue;
          const double cost = H.module().coeff_cost(H.distinguished(l));
          if (best < 0 || cost < best) {
            best = cost;
            es.coordinate = H.distinguished(l);
          }
        }
        int field_deg = 1;
        for (const auto& key : order) {
          const auto [lk, kk] = key;
          auto it = P.values.find(key);
          Elem v = it != P.values.end() ? it->second : eigenvalue_at(H, E, es.vector, op(lk, kk), es.coordinate);
          v = E.mul(v, twist(E, lk, kk, c));
          es.a[lk][kk - 1] = v;
          field_deg = std::lcm(field_deg, exact_degree(E, v));
        }
        if (field_deg != deg) continue;  // found over a smaller field
        found.push_back(std::move(es));
      }
    }
    // Close under Frobenius and drop duplicates.
    for (auto& es : found) {
      auto known = [&](const EigenSystem& s) {
        return std::any_of(out.begin(), out.end(), [&](const EigenSystem& o) { return o.degree == s.degree && o.a == s.a; });
      };
      if (known(es)) continue;
      es.index = out.size();
      out.push_back(es);
      EigenSystem cur = es;
      for (int t = 1; t < deg; ++t) {
        for (auto& [l, vals] : cur.a)
          for (auto& v : vals) v = E.frobenius(v);
        for (auto& v : cur.vector) v = E.frobenius(v);
        cur.conjugate = t;
        if (known(cur)) continue;
        cur.index = out.size();
        out.push_back(cur);
      }
    }
  }
  return out;
}

}  // namespace sl3
