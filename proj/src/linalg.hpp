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

// Dense linear algebra over a field type (PrimeField or ExtField).

#pragma once

#include <utility>
#include <vector>

#include "ff.hpp"

namespace sl3::linalg {

template <class F>
using Row = std::vector<typename F::Elem>;
template <class F>
using Matrix = std::vector<Row<F>>;

// Reduced row echelon form in place; returns pivot columns. Zero rows are removed.
template <class F>
std::vector<size_t> rref(const F& f, Matrix<F>& m) {
  std::vector<size_t> pivots;
  if (m.empty()) return pivots;
  const size_t ncols = m[0].size();
  size_t r = 0;
  for (size_t c = 0; c < ncols && r < m.size(); ++c) {
    size_t sel = r;
    while (sel < m.size() && f.is_zero(m[sel][c])) ++sel;
    if (sel == m.size()) continue;
    std::swap(m[r], m[sel]);
    auto inv = f.inv(m[r][c]);
    for (auto& x : m[r]) x = f.mul(x, inv);
    for (size_t i = 0; i < m.size(); ++i) {
      if (i == r || f.is_zero(m[i][c])) continue;
      auto t = m[i][c];
      for (size_t j = c; j < ncols; ++j) m[i][j] = f.sub(m[i][j], f.mul(t, m[r][j]));
    }
    pivots.push_back(c);
    ++r;
  }
  m.resize(r);
  return pivots;
}

template <class F>
size_t rank(const F& f, Matrix<F> m) {
  return rref(f, m).size();
}

// Basis of {x : A x = 0} for A given by rows (right kernel), in free-variable form.
template <class F>
Matrix<F> right_kernel(const F& f, Matrix<F> a, size_t ncols) {
  Matrix<F> out;
  if (a.empty()) {
    for (size_t j = 0; j < ncols; ++j) {
      Row<F> v(ncols, f.zero());
      v[j] = f.one();
      out.push_back(std::move(v));
    }
    return out;
  }
  auto piv = rref(f, a);
  std::vector<int> is_piv(ncols, -1);
  for (size_t i = 0; i < piv.size(); ++i) is_piv[piv[i]] = static_cast<int>(i);
  for (size_t j = 0; j < ncols; ++j) {
    if (is_piv[j] >= 0) continue;
    Row<F> v(ncols, f.zero());
    v[j] = f.one();
    for (size_t i = 0; i < piv.size(); ++i) v[piv[i]] = f.neg(a[i][j]);
    out.push_back(std::move(v));
  }
  return out;
}

template <class F>
Matrix<F> transpose(const Matrix<F>& a, size_t ncols) {
  Matrix<F> t(ncols, Row<F>(a.size()));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < ncols; ++j) t[j][i] = a[i][j];
  return t;
}

// Basis of {x : x A = 0} for a square or rectangular A with rows(A) = a.size().
template <class F>
Matrix<F> left_kernel(const F& f, const Matrix<F>& a, size_t ncols) {
  return right_kernel(f, transpose<F>(a, ncols), a.size());
}

template <class F>
Matrix<F> matmul(const F& f, const Matrix<F>& a, const Matrix<F>& b) {
  if (a.empty()) return {};
  const size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  Matrix<F> c(n, Row<F>(m, f.zero()));
  for (size_t i = 0; i < n; ++i)
    for (size_t t = 0; t < k; ++t) {
      if (f.is_zero(a[i][t])) continue;
      for (size_t j = 0; j < m; ++j) c[i][j] = f.add(c[i][j], f.mul(a[i][t], b[t][j]));
    }
  return c;
}

template <class F>
Row<F> row_times(const F& f, const Row<F>& x, const Matrix<F>& a) {
  Row<F> r(a.empty() ? 0 : a[0].size(), f.zero());
  for (size_t i = 0; i < a.size(); ++i) {
    if (f.is_zero(x[i])) continue;
    for (size_t j = 0; j < r.size(); ++j) r[j] = f.add(r[j], f.mul(x[i], a[i][j]));
  }
  return r;
}

// Characteristic polynomial det(X I - A), coefficients low to high, via Hessenberg reduction.
template <class F>
std::vector<typename F::Elem> charpoly(const F& f, Matrix<F> h) {
  using E = typename F::Elem;
  const size_t n = h.size();
  for (size_t m = 1; m + 1 < n; ++m) {
    size_t i = m;
    while (i < n && f.is_zero(h[i][m - 1])) ++i;
    if (i == n) continue;
    if (i != m) {
      std::swap(h[i], h[m]);
      for (size_t r = 0; r < n; ++r) std::swap(h[r][i], h[r][m]);
    }
    E inv = f.inv(h[m][m - 1]);
    for (size_t r = m + 1; r < n; ++r) {
      if (f.is_zero(h[r][m - 1])) continue;
      E t = f.mul(h[r][m - 1], inv);
      for (size_t c = 0; c < n; ++c) h[r][c] = f.sub(h[r][c], f.mul(t, h[m][c]));
      for (size_t c = 0; c < n; ++c) h[c][m] = f.add(h[c][m], f.mul(t, h[c][r]));
    }
  }
  // p_k = characteristic polynomial of the leading k x k block.
  std::vector<std::vector<E>> pk(n + 1);
  pk[0] = {f.one()};
  for (size_t k = 1; k <= n; ++k) {
    // p_k = (X - h_kk) p_{k-1} - sum_{i<k} h_ik * prod_{j=i+1..k} h_{j,j-1} * p_{i-1}
    std::vector<E> cur(k + 1, f.zero());
    const auto& prev = pk[k - 1];
    for (size_t d = 0; d < prev.size(); ++d) {
      cur[d + 1] = f.add(cur[d + 1], prev[d]);
      cur[d] = f.sub(cur[d], f.mul(h[k - 1][k - 1], prev[d]));
    }
    E prod = f.one();
    for (size_t i = k - 1; i-- > 0;) {
      prod = f.mul(prod, h[i + 1][i]);
      if (f.is_zero(prod)) break;
      E t = f.mul(h[i][k - 1], prod);
      for (size_t d = 0; d < pk[i].size(); ++d) cur[d] = f.sub(cur[d], f.mul(t, pk[i][d]));
    }
    pk[k] = std::move(cur);
  }
  return pk[n];
}

}  // namespace sl3::linalg
