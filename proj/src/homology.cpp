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

#include "homology.hpp"

#include <cblas.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <deque>
#include <exception>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <mutex>
#include <sstream>
#include <thread>

#include "error.hpp"
#include "linalg.hpp"

namespace sl3 {

namespace {

constexpr double kExactLimit = 9007199254740992.0;  // 2^53

// x <- x mod p for integer-valued doubles of magnitude below 2^53.
inline double mod_d(double v, double p, double invp) {
  v -= std::floor(v * invp) * p;
  if (v < 0) v += p;
  else if (v >= p) v -= p;
  return v;
}

void reduce_all(double* x, size_t n, double p) {
  const double invp = 1.0 / p;
  for (size_t i = 0; i < n; ++i) x[i] = mod_d(x[i], p, invp);
}

bool blas_exact(u32 p, size_t k) {
  const double q = static_cast<double>(p - 1);
  return static_cast<double>(k) * q * q + 2.0 * p < kExactLimit / 4;
}

}  // namespace

// ---------------------------------------------------------------------------
// Monomial group

const std::vector<MonomialElem>& MonomialGroup::elements() {
  static const std::vector<MonomialElem> elems = [] {
    std::vector<MonomialElem> out;
    std::array<int, 3> perm{0, 1, 2};
    do {
      int inv = 0;
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) inv += perm[i] > perm[j];
      const int sgn = inv % 2 ? -1 : 1;
      for (int mask = 0; mask < 8; ++mask) {
        std::array<int, 3> s{};
        int prod = 1;
        for (int i = 0; i < 3; ++i) {
          s[i] = (mask >> i) & 1 ? -1 : 1;
          prod *= s[i];
        }
        if (prod * sgn != 1) continue;
        Mat3 m;
        for (int i = 0; i < 3; ++i) m(i, perm[i]) = s[i];
        out.push_back({m, sgn});
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
  }();
  return elems;
}

int MonomialGroup::sign_of(const Mat3& m) {
  for (const auto& e : elements())
    if (e.m == m) return e.sign;
  fail(ErrorKind::InvalidArgument, "matrix is not a signed permutation of determinant 1");
}

Mat3 mat_h_sq() { return mat_h() * mat_h(); }

// ---------------------------------------------------------------------------
// EchelonAccumulator

EchelonAccumulator::EchelonAccumulator(u32 p, size_t ncols) : EchelonAccumulator(p, ncols, Options{}) {}

EchelonAccumulator::EchelonAccumulator(u32 p, size_t ncols, Options opt)
    : p_(p), ncols_(ncols), opt_(std::move(opt)), is_pivot_(ncols, 0) {
  require(is_prime(p), "modulus must be prime");
  require(opt_.panel_rows > 0, "panel size must be positive");
  if (opt_.resident_rows > 0) {
    require(!opt_.spill_dir.empty(), "spilling needs a directory");
    std::filesystem::create_directories(opt_.spill_dir);
  }
}

EchelonAccumulator::~EchelonAccumulator() {
  std::error_code ec;
  for (const auto& b : blocks_)
    if (!b.file.empty()) std::filesystem::remove(b.file, ec);
  if (spill_count_ > 0) std::filesystem::remove(opt_.spill_dir + "/manifest.txt", ec);
}

size_t EchelonAccumulator::spilled_blocks() const {
  size_t n = 0;
  for (const auto& b : blocks_) n += !b.file.empty();
  return n;
}

std::vector<size_t> EchelonAccumulator::pivots() const {
  std::vector<size_t> out;
  out.reserve(rank_);
  for (const auto& b : blocks_) {
    std::vector<Panel> tmp;
    const std::vector<Panel>* pns = &b.panels;
    if (!b.file.empty()) {
      load(b, tmp);
      pns = &tmp;
    }
    for (const auto& pn : *pns) out.insert(out.end(), pn.piv.begin(), pn.piv.end());
  }
  return out;
}

// x -= x[:, piv] * rows, leaving x unreduced but exact.
void EchelonAccumulator::reduce_against(std::vector<double>& x, size_t nrows, const Panel& pn) const {
  const size_t k = pn.piv.size(), c = ncols_;
  if (k == 0 || nrows == 0) return;
  const double p = p_, invp = 1.0 / p;
  std::vector<double> coef(nrows * k);
  bool any = false;
  for (size_t i = 0; i < nrows; ++i)
    for (size_t t = 0; t < k; ++t) {
      double& v = x[i * c + pn.piv[t]];
      v = mod_d(v, p, invp);
      coef[i * k + t] = v;
      any |= v != 0;
    }
  if (!any) return;
  if (blas_exact(p_, k)) {
    cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, static_cast<int>(nrows), static_cast<int>(c),
                static_cast<int>(k), -1.0, coef.data(), static_cast<int>(k), pn.rows.data(),
                static_cast<int>(c), 1.0, x.data(), static_cast<int>(c));
    return;
  }
  for (size_t i = 0; i < nrows; ++i) {
    double* xi = &x[i * c];
    for (size_t j = 0; j < c; ++j) xi[j] = mod_d(xi[j], p, invp);
    for (size_t t = 0; t < k; ++t) {
      const u64 f = static_cast<u64>(coef[i * k + t]);
      if (f == 0) continue;
      const u64 nf = p_ - f;
      const double* e = &pn.rows[t * c];
      for (size_t j = 0; j < c; ++j) {
        if (e[j] == 0) continue;
        xi[j] = static_cast<double>((static_cast<u64>(xi[j]) + nf * static_cast<u64>(e[j])) % p_);
      }
    }
  }
}

EchelonAccumulator::Panel EchelonAccumulator::eliminate_panel(double* x, size_t nrows) {
  const size_t c = ncols_;
  const PrimeField F(p_);
  std::vector<std::vector<u32>> rows;
  std::vector<u32> piv;
  std::vector<u32> cur(c);
  for (size_t i = 0; i < nrows; ++i) {
    const double* xi = x + i * c;
    bool nz = false;
    for (size_t j = 0; j < c; ++j) {
      cur[j] = static_cast<u32>(xi[j]);
      nz |= cur[j] != 0;
    }
    if (!nz) continue;
    for (size_t r = 0; r < rows.size(); ++r) {
      const u32 f = cur[piv[r]];
      if (f == 0) continue;
      const u64 nf = p_ - f;
      const auto& e = rows[r];
      for (size_t j = 0; j < c; ++j)
        if (e[j]) cur[j] = static_cast<u32>((cur[j] + nf * e[j]) % p_);
    }
    size_t lead = 0;
    while (lead < c && cur[lead] == 0) ++lead;
    if (lead == c) continue;
    const u64 inv = F.inv(cur[lead]);
    for (size_t j = lead; j < c; ++j)
      if (cur[j]) cur[j] = static_cast<u32>(cur[j] * inv % p_);
    for (auto& e : rows) {
      const u32 f = e[lead];
      if (f == 0) continue;
      const u64 nf = p_ - f;
      for (size_t j = 0; j < c; ++j)
        if (cur[j]) e[j] = static_cast<u32>((e[j] + nf * cur[j]) % p_);
    }
    rows.push_back(cur);
    piv.push_back(static_cast<u32>(lead));
  }
  Panel pn;
  pn.piv = std::move(piv);
  pn.rows.resize(pn.piv.size() * c);
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t j = 0; j < c; ++j) pn.rows[r * c + j] = rows[r][j];
  return pn;
}

size_t EchelonAccumulator::add_rows(std::vector<double>& x, size_t n) {
  const size_t c = ncols_;
  require(x.size() >= n * c, "row buffer too short");
  if (n == 0 || c == 0 || rank_ == c) return 0;
  const double p = p_;
  const double step = static_cast<double>(opt_.panel_rows) * (p - 1) * (p - 1);
  reduce_all(x.data(), n * c, p);
  double mag = p;
  std::vector<Panel> tmp;
  for (const auto& b : blocks_) {
    const std::vector<Panel>* pns = &b.panels;
    if (!b.file.empty()) {
      load(b, tmp);
      pns = &tmp;
    }
    for (const auto& pn : *pns) {
      reduce_against(x, n, pn);
      mag += step;
      if (mag + step >= kExactLimit / 4) {
        reduce_all(x.data(), n * c, p);
        mag = p;
      }
    }
  }
  reduce_all(x.data(), n * c, p);

  // Drop rows that are already dependent.
  size_t m = 0;
  for (size_t i = 0; i < n; ++i) {
    const double* xi = &x[i * c];
    bool nz = false;
    for (size_t j = 0; j < c && !nz; ++j) nz = xi[j] != 0;
    if (!nz) continue;
    if (m != i) std::memmove(&x[m * c], xi, c * sizeof(double));
    ++m;
  }

  Block blk;
  size_t added = 0;
  for (size_t s = 0; s < m; s += opt_.panel_rows) {
    const size_t len = std::min(opt_.panel_rows, m - s);
    Panel pn = eliminate_panel(&x[s * c], len);
    if (pn.piv.empty()) continue;
    const size_t rest = m - s - len;
    if (rest > 0) {
      std::vector<double> tail(x.begin() + (s + len) * c, x.begin() + m * c);
      reduce_against(tail, rest, pn);
      reduce_all(tail.data(), tail.size(), p);
      std::copy(tail.begin(), tail.end(), x.begin() + (s + len) * c);
    }
    for (u32 j : pn.piv) is_pivot_[j] = 1;
    added += pn.piv.size();
    blk.nrows += pn.piv.size();
    blk.panels.push_back(std::move(pn));
  }
  if (added > 0) {
    rank_ += added;
    resident_ += blk.nrows;
    blocks_.push_back(std::move(blk));
    maybe_spill();
  }
  return added;
}

bool EchelonAccumulator::add_row(const Vec& row) {
  require(row.size() == ncols_, "row length does not match");
  std::vector<double> x(row.begin(), row.end());
  return add_rows(x, 1) == 1;
}

void EchelonAccumulator::maybe_spill() {
  if (opt_.resident_rows == 0) return;
  static_assert(std::endian::native == std::endian::little, "spill files are little-endian");
  for (auto& b : blocks_) {
    if (resident_ <= opt_.resident_rows) break;
    if (!b.file.empty()) continue;
    std::ostringstream name;
    name << opt_.spill_dir << "/block_" << spill_count_++ << ".bin";
    b.file = name.str();
    std::ofstream out(b.file, std::ios::binary);
    if (!out) fail(ErrorKind::Io, "cannot write spill file " + b.file);
    const u32 np = static_cast<u32>(b.panels.size());
    out.write(reinterpret_cast<const char*>(&np), 4);
    std::vector<u32> buf;
    for (const auto& pn : b.panels) {
      const u32 k = static_cast<u32>(pn.piv.size());
      out.write(reinterpret_cast<const char*>(&k), 4);
      out.write(reinterpret_cast<const char*>(pn.piv.data()), 4 * static_cast<std::streamsize>(k));
      buf.assign(pn.rows.begin(), pn.rows.end());
      out.write(reinterpret_cast<const char*>(buf.data()), 4 * static_cast<std::streamsize>(buf.size()));
    }
    if (!out) fail(ErrorKind::Io, "short write to " + b.file);
    std::ofstream man(opt_.spill_dir + "/manifest.txt", std::ios::app);
    man << b.file << ' ' << b.panels.size() << ' ' << b.nrows << ' ' << ncols_ << ' ' << p_ << '\n';
    resident_ -= b.nrows;
    b.panels.clear();
    b.panels.shrink_to_fit();
  }
}

void EchelonAccumulator::load(const Block& b, std::vector<Panel>& out) const {
  std::ifstream in(b.file, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot read spill file " + b.file);
  u32 np = 0;
  in.read(reinterpret_cast<char*>(&np), 4);
  out.resize(np);
  std::vector<u32> buf;
  for (auto& pn : out) {
    u32 k = 0;
    in.read(reinterpret_cast<char*>(&k), 4);
    pn.piv.resize(k);
    in.read(reinterpret_cast<char*>(pn.piv.data()), 4 * static_cast<std::streamsize>(k));
    buf.resize(static_cast<size_t>(k) * ncols_);
    in.read(reinterpret_cast<char*>(buf.data()), 4 * static_cast<std::streamsize>(buf.size()));
    pn.rows.assign(buf.begin(), buf.end());
  }
  if (!in) fail(ErrorKind::Io, "truncated spill file " + b.file);
}

std::vector<Vec> EchelonAccumulator::kernel(std::vector<size_t>* free_cols) const {
  const size_t c = ncols_;
  std::vector<size_t> fr;
  for (size_t j = 0; j < c; ++j)
    if (!is_pivot_[j]) fr.push_back(j);
  const size_t k = fr.size();
  std::vector<double> S(c * k, 0.0);
  for (size_t l = 0; l < k; ++l) S[fr[l] * k + l] = 1.0;
  const double p = p_;
  const bool fast = blas_exact(p_, c);
  std::vector<Panel> tmp;
  std::vector<double> T;
  for (auto bi = blocks_.rbegin(); bi != blocks_.rend() && k > 0; ++bi) {
    const std::vector<Panel>* pns = &bi->panels;
    if (!bi->file.empty()) {
      load(*bi, tmp);
      pns = &tmp;
    }
    for (auto pi = pns->rbegin(); pi != pns->rend(); ++pi) {
      const size_t r = pi->piv.size();
      T.assign(r * k, 0.0);
      if (fast) {
        cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, static_cast<int>(r), static_cast<int>(k),
                    static_cast<int>(c), 1.0, pi->rows.data(), static_cast<int>(c), S.data(),
                    static_cast<int>(k), 0.0, T.data(), static_cast<int>(k));
        reduce_all(T.data(), T.size(), p);
      } else {
        for (size_t i = 0; i < r; ++i)
          for (size_t j = 0; j < c; ++j) {
            const u64 e = static_cast<u64>(pi->rows[i * c + j]);
            if (e == 0) continue;
            for (size_t l = 0; l < k; ++l)
              T[i * k + l] = static_cast<double>((static_cast<u64>(T[i * k + l]) +
                                                   e * static_cast<u64>(S[j * k + l])) % p_);
          }
      }
      for (size_t i = 0; i < r; ++i)
        for (size_t l = 0; l < k; ++l) S[pi->piv[i] * k + l] = T[i * k + l] == 0 ? 0 : p - T[i * k + l];
    }
  }
  std::vector<Vec> out(k, Vec(c));
  for (size_t j = 0; j < c; ++j)
    for (size_t l = 0; l < k; ++l) out[l][j] = static_cast<u32>(S[j * k + l]);
  if (free_cols) *free_cols = fr;
  return out;
}

// ---------------------------------------------------------------------------
// Streaming kernel with restart

namespace {

std::vector<Vec> compose(const PrimeField& F, const std::vector<Vec>& K, const std::vector<Vec>& B) {
  // Rows of K are combinations of rows of B.
  if (B.empty()) return K;
  const size_t n = B[0].size();
  std::vector<Vec> out(K.size(), Vec(n, 0));
  for (size_t l = 0; l < K.size(); ++l) {
    std::vector<u64> acc(n, 0);
    for (size_t i = 0; i < K[l].size(); ++i) {
      const u64 f = K[l][i];
      if (!f) continue;
      for (size_t j = 0; j < n; ++j) acc[j] = (acc[j] + f * B[i][j]) % F.p();
    }
    for (size_t j = 0; j < n; ++j) out[l][j] = static_cast<u32>(acc[j]);
  }
  return out;
}

void emit(const HomologyOptions& opt, const std::string& msg) {
  if (opt.log) opt.log(msg);
}

}  // namespace

KernelResult streaming_kernel(u32 p, RowSource& src, const HomologyOptions& opt) {
  require(opt.batch_rows > 0, "batch size must be positive");
  const PrimeField F(p);
  const size_t c0 = src.ncols();
  KernelResult res;
  res.stats.columns = c0;
  EchelonAccumulator::Options ao{opt.panel_rows, opt.resident_rows, opt.spill_dir};
  auto acc = std::make_unique<EchelonAccumulator>(p, c0, ao);
  std::vector<Vec> basis;             // current coordinates in terms of the original ones
  std::vector<size_t> origin(c0);     // original column of each current free column
  std::iota(origin.begin(), origin.end(), size_t{0});
  const size_t cutoff =
      std::max(opt.restart_min, static_cast<size_t>(opt.restart_fraction * static_cast<double>(c0)));
  std::vector<double> buf;
  size_t next_report = 0;
  while (acc->kernel_dim() > 0) {
    const size_t n = src.next(buf, opt.batch_rows);
    if (n == 0) break;
    res.stats.rows_seen += n;
    res.stats.rows_stored += acc->add_rows(buf, n);
    if (res.stats.rows_seen >= next_report) {
      std::ostringstream m;
      m << "rows seen " << res.stats.rows_seen << "/" << src.total_rows() << ", stored "
        << res.stats.rows_stored << ", kernel " << acc->kernel_dim();
      emit(opt, m.str());
      next_report = res.stats.rows_seen + 10 * opt.batch_rows;
    }
    if (opt.restart && res.stats.restarts == 0 && acc->ncols() > cutoff && acc->kernel_dim() <= cutoff &&
        res.stats.rows_seen < src.total_rows()) {
      std::vector<size_t> fr;
      auto K = acc->kernel(&fr);
      basis = compose(F, K, basis);
      std::vector<size_t> o2(fr.size());
      for (size_t l = 0; l < fr.size(); ++l) o2[l] = origin[fr[l]];
      origin = std::move(o2);
      src.rebase(basis);
      acc = std::make_unique<EchelonAccumulator>(p, basis.size(), ao);
      res.stats.restarts++;
      res.stats.rows_at_restart = res.stats.rows_seen;
      std::ostringstream m;
      m << "restart after " << res.stats.rows_seen << " rows with " << basis.size() << " columns";
      emit(opt, m.str());
    }
  }
  std::vector<size_t> fr;
  auto K = acc->kernel(&fr);
  res.basis = compose(F, K, basis);
  res.free_cols.resize(fr.size());
  for (size_t l = 0; l < fr.size(); ++l) res.free_cols[l] = origin[fr[l]];
  return res;
}

// ---------------------------------------------------------------------------
// Generic modules

namespace {

void require_p(u32 p) {
  if (p <= 3) fail(ErrorKind::Unsupported, "semi-invariant method needs p > 3");
}

Vec h_sum(const GModule& V, const Vec& v) {
  const PrimeField& F = V.field();
  Vec a = V.act(v, mat_h());
  Vec b = V.act(a, mat_h());
  Vec out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = F.add(v[i], F.add(a[i], b[i]));
  return out;
}

// Rows i of the matrix with columns U_j.
class ColumnSource : public RowSource {
 public:
  ColumnSource(u32 p, std::vector<Vec> cols, size_t d) : F_(p), orig_(std::move(cols)), d_(d) {
    cur_ = orig_;
  }
  size_t ncols() const override { return cur_.size(); }
  size_t total_rows() const override { return d_; }
  size_t next(std::vector<double>& out, size_t max_rows) override {
    const size_t n = std::min(max_rows, d_ - pos_), c = cur_.size();
    out.assign(n * c, 0.0);
    for (size_t r = 0; r < n; ++r)
      for (size_t j = 0; j < c; ++j) out[r * c + j] = cur_[j][pos_ + r];
    pos_ += n;
    return n;
  }
  void rebase(const std::vector<Vec>& basis) override { cur_ = compose(F_, basis, orig_); }

 private:
  PrimeField F_;
  std::vector<Vec> orig_, cur_;
  size_t d_;
  size_t pos_ = 0;
};

}  // namespace

std::vector<Vec> semi_invariants(const GModule& V) {
  require_p(V.p());
  const PrimeField& F = V.field();
  const size_t d = V.dim();
  std::vector<Vec> rows(d, Vec(d, 0));
  for (const auto& g : MonomialGroup::elements()) {
    SparseMat A = V.action_matrix(g.m);
    for (size_t i = 0; i < d; ++i)
      for (u32 k = A.row_begin(i); k < A.row_end(i); ++k) {
        u32& x = rows[i][A.col_at(k)];
        x = g.sign > 0 ? F.add(x, A.val_at(k)) : F.sub(x, A.val_at(k));
      }
  }
  linalg::rref(F, rows);
  return rows;
}

std::vector<Vec> semi_invariants_direct(const GModule& V) {
  require_p(V.p());
  const PrimeField& F = V.field();
  const size_t d = V.dim();
  // Generators: two diagonal elements, a 3-cycle and a transposition-type element.
  const std::vector<Mat3> gens = {Mat3::diag(-1, -1, 1), Mat3::diag(-1, 1, -1),
                                  Mat3::rows({0, 1, 0}, {0, 0, 1}, {1, 0, 0}),
                                  Mat3::rows({0, 1, 0}, {1, 0, 0}, {0, 0, -1})};
  std::vector<Vec> C(d, Vec(d * gens.size(), 0));
  for (size_t t = 0; t < gens.size(); ++t) {
    const int eps = MonomialGroup::sign_of(gens[t]);
    SparseMat A = V.action_matrix(gens[t]);
    for (size_t i = 0; i < d; ++i) {
      for (u32 k = A.row_begin(i); k < A.row_end(i); ++k) C[i][t * d + A.col_at(k)] = A.val_at(k);
      u32& x = C[i][t * d + i];
      x = eps > 0 ? F.sub(x, 1) : F.add(x, 1);
    }
  }
  auto K = linalg::left_kernel(F, C, d * gens.size());
  linalg::rref(F, K);
  return K;
}

std::vector<Vec> h_kernel(const GModule& V, const std::vector<Vec>& basis, const HomologyOptions& opt) {
  require_p(V.p());
  std::vector<Vec> U;
  U.reserve(basis.size());
  for (const auto& b : basis) U.push_back(h_sum(V, b));
  ColumnSource src(V.p(), std::move(U), V.dim());
  return streaming_kernel(V.p(), src, opt).basis;
}

std::vector<Vec> h_kernel_dense(const GModule& V, const std::vector<Vec>& basis) {
  require_p(V.p());
  const size_t d = V.dim(), c = basis.size();
  std::vector<Vec> M(d, Vec(c, 0));
  for (size_t j = 0; j < c; ++j) {
    Vec u = h_sum(V, basis[j]);
    for (size_t i = 0; i < d; ++i) M[i][j] = u[i];
  }
  return linalg::right_kernel(V.field(), M, c);
}

bool satisfies_conditions(const GModule& V, const Vec& v) {
  const PrimeField& F = V.field();
  for (const auto& g : MonomialGroup::elements()) {
    const Mat3& m = g.m;
    const bool diagonal = m(0, 1) == 0 && m(0, 2) == 0 && m(1, 2) == 0 && m(1, 0) == 0;
    const bool involution = (m * m) == Mat3::identity();
    if (m == Mat3::identity() || !(diagonal || (involution && g.sign < 0))) continue;
    Vec w = V.act(v, m);
    for (size_t i = 0; i < v.size(); ++i)
      if (w[i] != (diagonal ? v[i] : F.neg(v[i]))) return false;
  }
  Vec s = h_sum(V, v);
  return std::all_of(s.begin(), s.end(), [](u32 x) { return x == 0; });
}

// ---------------------------------------------------------------------------
// Induced modules

namespace {

using SparseRow = std::vector<std::pair<u32, u32>>;

struct Orbit {
  u32 rep;
  std::vector<u32> blocks;
  std::vector<SparseRow> w;  // RREF basis of the image of P_rep on the inner module
  std::vector<u32> lead;
  size_t first_col = 0;
};

// Semi-invariant basis of an induced module, built orbit by orbit.
class InducedSemiBasis {
 public:
  explicit InducedSemiBasis(const InducedModule& V);

  size_t dim() const { return ncols_; }
  size_t inner_dim() const { return dw_; }
  const std::vector<Orbit>& orbits() const { return orbits_; }
  u32 orbit_of(u32 block) const { return orbit_of_[block]; }
  size_t distinguished(size_t col) const;
  // Block z of the semi-invariant with orbit-local index j, accumulated as f * value into out.
  void add_block_value(const Orbit& O, const Vec& u, u32 z, u32 f, std::vector<u64>& out) const;
  // Inner vector sum_j coef[j] w_j over the orbit.
  Vec orbit_combination(const Orbit& O, const Vec& coef) const;
  void add_row_block_value(const Orbit& O, size_t j, u32 z, std::vector<u32>& out) const;
  Vec combine(const Vec& coef) const;

 private:
  const InducedModule& V_;
  PrimeField F_;
  size_t dw_, ncols_ = 0;
  std::vector<InducedModule::BlockMap> bm_;
  std::vector<SparseMat> W_;
  std::vector<Orbit> orbits_;
  std::vector<u32> orbit_of_;
  std::vector<u32> elem_of_;     // group element sending the orbit rep to each block
  std::vector<u32> scalar_of_;   // eps(m_z) s_z(m_z)
};

InducedSemiBasis::InducedSemiBasis(const InducedModule& V) : V_(V), F_(V.p()), dw_(V.inner().dim()) {
  const auto& M = MonomialGroup::elements();
  const size_t nb = V.blocks();
  std::vector<std::vector<u32>> target(M.size(), std::vector<u32>(nb));
  for (size_t g = 0; g < M.size(); ++g) {
    bm_.push_back(V.block_map(M[g].m));
    W_.push_back(V.inner().action_matrix(M[g].m));
    for (size_t j = 0; j < nb; ++j) target[g][bm_[g].src[j]] = static_cast<u32>(j);
  }
  orbit_of_.assign(nb, UINT32_MAX);
  elem_of_.assign(nb, 0);
  scalar_of_.assign(nb, 0);
  for (u32 x = 0; x < nb; ++x) {
    if (orbit_of_[x] != UINT32_MAX) continue;
    Orbit O;
    O.rep = x;
    const u32 oi = static_cast<u32>(orbits_.size());
    std::vector<size_t> stab;
    for (size_t g = 0; g < M.size(); ++g) {
      const u32 z = target[g][x];
      if (z == x) stab.push_back(g);
      if (orbit_of_[z] == UINT32_MAX) {
        orbit_of_[z] = oi;
        elem_of_[z] = static_cast<u32>(g);
        const u32 s = bm_[g].scalar[z];
        scalar_of_[z] = M[g].sign > 0 ? s : F_.neg(s);
        O.blocks.push_back(z);
      }
    }
    std::sort(O.blocks.begin(), O.blocks.end());
    if (stab.size() == 1) {
      for (u32 t = 0; t < dw_; ++t) {
        O.w.push_back({{t, 1}});
        O.lead.push_back(t);
      }
    } else {
      // P_x = sum over the stabilizer of eps(h) s_x(h) W(h); its image splits along
      // the connected components of its support graph.
      std::vector<std::vector<std::pair<u32, u32>>> prow(dw_);
      std::vector<u64> acc(dw_, 0);
      std::vector<u32> touched;
      for (u32 a = 0; a < dw_; ++a) {
        touched.clear();
        for (size_t g : stab) {
          u32 s = bm_[g].scalar[x];
          if (M[g].sign < 0) s = F_.neg(s);
          for (u32 k = W_[g].row_begin(a); k < W_[g].row_end(a); ++k) {
            const u32 col = W_[g].col_at(k);
            if (acc[col] == 0) touched.push_back(col);
            acc[col] = (acc[col] + static_cast<u64>(s) * W_[g].val_at(k)) % F_.p() + F_.p();
          }
        }
        std::sort(touched.begin(), touched.end());
        for (u32 col : touched) {
          const u32 v = static_cast<u32>(acc[col] % F_.p());
          if (v) prow[a].push_back({col, v});
          acc[col] = 0;
        }
      }
      std::vector<u32> parent(dw_);
      std::iota(parent.begin(), parent.end(), 0u);
      auto find = [&](u32 a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
      };
      for (u32 a = 0; a < dw_; ++a)
        for (auto [col, v] : prow[a]) parent[find(a)] = find(col);
      std::vector<std::vector<u32>> comps(dw_);
      for (u32 a = 0; a < dw_; ++a) comps[find(a)].push_back(a);
      std::vector<std::pair<u32, SparseRow>> found;
      std::vector<int> local(dw_, -1);
      for (const auto& comp : comps) {
        if (comp.empty()) continue;
        for (size_t i = 0; i < comp.size(); ++i) local[comp[i]] = static_cast<int>(i);
        std::vector<Vec> mat;
        for (u32 a : comp) {
          if (prow[a].empty()) continue;
          Vec r(comp.size(), 0);
          for (auto [col, v] : prow[a]) r[local[col]] = v;
          mat.push_back(std::move(r));
        }
        auto piv = linalg::rref(F_, mat);
        for (size_t i = 0; i < mat.size(); ++i) {
          SparseRow sr;
          for (size_t t = 0; t < comp.size(); ++t)
            if (mat[i][t]) sr.push_back({comp[t], mat[i][t]});
          found.push_back({comp[piv[i]], std::move(sr)});
        }
      }
      std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      for (auto& [ld, sr] : found) {
        O.lead.push_back(ld);
        O.w.push_back(std::move(sr));
      }
    }
    O.first_col = ncols_;
    ncols_ += O.w.size();
    orbits_.push_back(std::move(O));
  }
}

size_t InducedSemiBasis::distinguished(size_t col) const {
  auto it = std::upper_bound(orbits_.begin(), orbits_.end(), col,
                             [](size_t c, const Orbit& O) { return c < O.first_col; });
  const Orbit& O = *(it - 1);
  return static_cast<size_t>(O.rep) * dw_ + O.lead[col - O.first_col];
}

Vec InducedSemiBasis::orbit_combination(const Orbit& O, const Vec& coef) const {
  std::vector<u64> acc(dw_, 0);
  for (size_t j = 0; j < O.w.size(); ++j) {
    const u64 f = coef[O.first_col + j];
    if (!f) continue;
    for (auto [t, v] : O.w[j]) acc[t] = (acc[t] + f * v) % F_.p();
  }
  return Vec(acc.begin(), acc.end());
}

// out += f * scalar_z * (u . W(m_z)), u an inner vector.
void InducedSemiBasis::add_block_value(const Orbit&, const Vec& u, u32 z, u32 f, std::vector<u64>& out) const {
  const SparseMat& W = W_[elem_of_[z]];
  const u64 s = static_cast<u64>(f) * scalar_of_[z] % F_.p();
  if (s == 0) return;
  for (u32 a = 0; a < dw_; ++a) {
    if (!u[a]) continue;
    const u64 c = s * u[a] % F_.p();
    for (u32 k = W.row_begin(a); k < W.row_end(a); ++k)
      out[W.col_at(k)] = (out[W.col_at(k)] + c * W.val_at(k)) % F_.p();
  }
}

// out (dense inner vector, unreduced residues) += scalar_z * (w_j . W(m_z)).
void InducedSemiBasis::add_row_block_value(const Orbit& O, size_t j, u32 z, std::vector<u32>& out) const {
  const SparseMat& W = W_[elem_of_[z]];
  const u64 s = scalar_of_[z];
  for (auto [a, v] : O.w[j]) {
    const u64 c = s * v % F_.p();
    for (u32 k = W.row_begin(a); k < W.row_end(a); ++k)
      out[W.col_at(k)] = static_cast<u32>((out[W.col_at(k)] + c * W.val_at(k)) % F_.p());
  }
}

Vec InducedSemiBasis::combine(const Vec& coef) const {
  Vec out(V_.dim(), 0);
  std::vector<u64> blk(dw_);
  for (const auto& O : orbits_) {
    Vec u = orbit_combination(O, coef);
    if (std::all_of(u.begin(), u.end(), [](u32 x) { return x == 0; })) continue;
    for (u32 z : O.blocks) {
      std::fill(blk.begin(), blk.end(), 0);
      add_block_value(O, u, z, 1, blk);
      for (size_t t = 0; t < dw_; ++t) out[z * dw_ + t] = static_cast<u32>(blk[t]);
    }
  }
  return out;
}

// Rows <e_(y,t), b_j (1 + h + h^2)> in block-major order.
class InducedSource : public RowSource {
 public:
  InducedSource(const InducedModule& V, const InducedSemiBasis& S, size_t workers)
      : V_(V), S_(S), F_(V.p()), dw_(V.inner().dim()), nb_(V.blocks()), workers_(std::max<size_t>(workers, 1)) {
    bh_ = V.block_map(mat_h());
    bh2_ = V.block_map(mat_h_sq());
    H_ = V.inner().action_matrix(mat_h());
    H2_ = V.inner().action_matrix(mat_h_sq());
  }
  size_t ncols() const override { return rebased_ ? U_.size() : S_.dim(); }
  size_t total_rows() const override { return nb_ * dw_; }

  size_t next(std::vector<double>& out, size_t max_rows) override {
    const size_t c = ncols();
    out.assign(max_rows * c, 0.0);
    size_t n = 0;
    while (n < max_rows && (row_ < nb_ * dw_)) {
      if (rebased_) {
        const size_t take = std::min(max_rows - n, nb_ * dw_ - row_);
        for (size_t r = 0; r < take; ++r)
          for (size_t l = 0; l < c; ++l) out[(n + r) * c + l] = U_[l][row_ + r];
        n += take;
        row_ += take;
        continue;
      }
      const std::vector<double>& blk = block(row_ / dw_);
      const size_t t0 = row_ % dw_;
      const size_t take = std::min(max_rows - n, dw_ - t0);
      std::copy(blk.begin() + t0 * c, blk.begin() + (t0 + take) * c, out.begin() + n * c);
      n += take;
      row_ += take;
    }
    out.resize(n * c);
    return n;
  }

  void rebase(const std::vector<Vec>& basis) override {
    rebased_ = true;
    ready_.clear();
    U_.clear();
    for (const auto& coef : basis) U_.push_back(h_sum(V_, S_.combine(coef)));
  }

 private:
  // Inner vector (value . A) accumulated: out += s * (value . A).
  void add_times(const std::vector<u32>& val, const SparseMat& A, u32 s, std::vector<u32>& out) const {
    if (s == 0) return;
    for (u32 a = 0; a < dw_; ++a) {
      if (!val[a]) continue;
      const u64 c = static_cast<u64>(s) * val[a] % F_.p();
      for (u32 k = A.row_begin(a); k < A.row_end(a); ++k)
        out[A.col_at(k)] = static_cast<u32>((out[A.col_at(k)] + c * A.val_at(k)) % F_.p());
    }
  }

  // Blocks are independent, so a run of them is built concurrently and
  // handed out in order; the rows seen by the caller do not depend on workers_.
  const std::vector<double>& block(size_t y) {
    if (!ready_.empty() && ready_.front().first == y) return ready_.front().second;
    while (!ready_.empty() && ready_.front().first < y) ready_.pop_front();
    if (!ready_.empty() && ready_.front().first == y) return ready_.front().second;
    ready_.clear();
    const size_t count = std::min(workers_, nb_ - y);
    std::vector<std::vector<double>> built(count);
    if (count == 1) {
      built[0] = build_block(y);
    } else {
      std::vector<std::thread> pool;
      std::exception_ptr err;
      std::mutex mu;
      for (size_t i = 0; i < count; ++i)
        pool.emplace_back([&, i] {
          try {
            built[i] = build_block(y + i);
          } catch (...) {
            std::lock_guard<std::mutex> g(mu);
            if (!err) err = std::current_exception();
          }
        });
      for (auto& t : pool) t.join();
      if (err) std::rethrow_exception(err);
    }
    for (size_t i = 0; i < count; ++i) ready_.emplace_back(y + i, std::move(built[i]));
    return ready_.front().second;
  }

  std::vector<double> build_block(size_t y) const {
    const size_t c = S_.dim();
    std::vector<double> block_rows_(dw_ * c, 0.0);
    const u32 y1 = bh_.src[y], y2 = bh2_.src[y];
    const u32 s1 = bh_.scalar[y], s2 = bh2_.scalar[y];
    std::vector<u32> orbs = {S_.orbit_of(static_cast<u32>(y)), S_.orbit_of(y1), S_.orbit_of(y2)};
    std::sort(orbs.begin(), orbs.end());
    orbs.erase(std::unique(orbs.begin(), orbs.end()), orbs.end());
    std::vector<u32> col(dw_), tmp(dw_);
    for (u32 oi : orbs) {
      const Orbit& O = S_.orbits()[oi];
      for (size_t j = 0; j < O.w.size(); ++j) {
        std::fill(col.begin(), col.end(), 0);
        if (S_.orbit_of(static_cast<u32>(y)) == oi) S_.add_row_block_value(O, j, static_cast<u32>(y), col);
        if (S_.orbit_of(y1) == oi) {
          std::fill(tmp.begin(), tmp.end(), 0);
          S_.add_row_block_value(O, j, y1, tmp);
          add_times(tmp, H_, s1, col);
        }
        if (S_.orbit_of(y2) == oi) {
          std::fill(tmp.begin(), tmp.end(), 0);
          S_.add_row_block_value(O, j, y2, tmp);
          add_times(tmp, H2_, s2, col);
        }
        const size_t cj = O.first_col + j;
        for (size_t t = 0; t < dw_; ++t)
          if (col[t]) block_rows_[t * c + cj] = col[t];
      }
    }
    return block_rows_;
  }

  const InducedModule& V_;
  const InducedSemiBasis& S_;
  PrimeField F_;
  size_t dw_, nb_;
  InducedModule::BlockMap bh_, bh2_;
  SparseMat H_, H2_;
  size_t row_ = 0;
  size_t workers_;
  std::deque<std::pair<size_t, std::vector<double>>> ready_;
  bool rebased_ = false;
  std::vector<Vec> U_;
};

}  // namespace

HomologySpace::HomologySpace(std::shared_ptr<const InducedModule> V, Weight w, std::vector<Vec> basis,
                             std::vector<size_t> dist)
    : V_(std::move(V)), w_(w), basis_(std::move(basis)), dist_(std::move(dist)) {
  require(basis_.size() == dist_.size(), "one distinguished coordinate per basis vector");
}

HomologySpace homology_of(std::shared_ptr<const InducedModule> V, const Weight& w, const HomologyOptions& opt,
                          HomologyReport* report) {
  require_p(V->p());
  InducedSemiBasis S(*V);
  {
    std::ostringstream m;
    m << "module dimension " << V->dim() << ", semi-invariants " << S.dim() << " in " << S.orbits().size()
      << " orbits";
    emit(opt, m.str());
  }
  InducedSource src(*V, S, opt.workers);
  KernelResult kr = streaming_kernel(V->p(), src, opt);
  std::vector<Vec> basis;
  std::vector<size_t> dist;
  for (size_t l = 0; l < kr.basis.size(); ++l) {
    basis.push_back(S.combine(kr.basis[l]));
    dist.push_back(S.distinguished(kr.free_cols[l]));
  }
  if (opt.verify) {
    for (size_t l = 0; l < basis.size(); ++l) {
      for (size_t m = 0; m < basis.size(); ++m)
        if (basis[m][dist[l]] != (l == m ? 1u : 0u))
          fail(ErrorKind::Computation, "distinguished coordinates are not dual to the basis");
      if (!satisfies_conditions(*V, basis[l]))
        fail(ErrorKind::Computation, "homology basis vector fails the defining conditions");
    }
  }
  if (report) {
    report->semi_dim = S.dim();
    report->stats = kr.stats;
  }
  return HomologySpace(std::move(V), w, std::move(basis), std::move(dist));
}

HomologySpace homology_space(u32 p, u32 N, const Weight& w, const Character& eps, const HomologyOptions& opt,
                             HomologyReport* report) {
  require(is_prime(p), "p must be prime");
  require_p(p);
  require(N >= 1 && std::gcd(N, p) == 1, "level must be prime to p");
  if (!w.p_restricted(p)) fail(ErrorKind::InvalidArgument, "weight " + w.label() + " is not p-restricted");
  require(eps.conductor() == 1 || N % eps.conductor() == 0, "character conductor must divide the level");
  auto inner = irreducible_module(w, p);
  auto V = std::make_shared<InducedModule>(inner, N, eps);
  return homology_of(std::move(V), w, opt, report);
}

}  // namespace sl3
