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

// 3x3 integer matrices and small integer helpers.

#pragma once

#include <array>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "error.hpp"
#include "ff.hpp"

namespace sl3 {

using Vec3 = std::array<i64, 3>;

struct Mat3 {
  std::array<i64, 9> a{};

  i64& operator()(int i, int j) { return a[3 * i + j]; }
  i64 operator()(int i, int j) const { return a[3 * i + j]; }
  bool operator==(const Mat3& o) const { return a == o.a; }
  bool operator!=(const Mat3& o) const { return a != o.a; }
  bool operator<(const Mat3& o) const { return a < o.a; }

  static Mat3 identity() { return diag(1, 1, 1); }
  static Mat3 diag(i64 x, i64 y, i64 z) {
    Mat3 m;
    m(0, 0) = x;
    m(1, 1) = y;
    m(2, 2) = z;
    return m;
  }
  static Mat3 rows(const Vec3& r0, const Vec3& r1, const Vec3& r2) {
    Mat3 m;
    for (int j = 0; j < 3; ++j) {
      m(0, j) = r0[j];
      m(1, j) = r1[j];
      m(2, j) = r2[j];
    }
    return m;
  }
  // Elementary matrix I + t*E_ij.
  static Mat3 elementary(int i, int j, i64 t) {
    Mat3 m = identity();
    m(i, j) += t;
    return m;
  }

  Vec3 row(int i) const { return {a[3 * i], a[3 * i + 1], a[3 * i + 2]}; }
  Vec3 col(int j) const { return {a[j], a[3 + j], a[6 + j]}; }
  void set_col(int j, const Vec3& v) {
    for (int i = 0; i < 3; ++i) a[3 * i + j] = v[i];
  }

  std::string to_string() const;
};

Mat3 operator*(const Mat3& x, const Mat3& y);
Vec3 operator*(const Vec3& row, const Mat3& m);  // row vector times matrix
Vec3 operator*(const Mat3& m, const Vec3& col);  // matrix times column vector
i64 det(const Mat3& m);
// Adjugate: m * adj(m) = det(m) * I.
Mat3 adj(const Mat3& m);
Mat3 transpose(const Mat3& m);
// Inverse of a matrix with determinant +-1.
Mat3 inverse_unimodular(const Mat3& m);
Mat3 mod_entries(const Mat3& m, u32 n);  // entries reduced to [0, n)

i64 gcd64(i64 a, i64 b);
i64 gcd3(const Vec3& v);
// Returns g = gcd(a, b) >= 0 with a*x + b*y = g.
i64 ext_gcd(i64 a, i64 b, i64& x, i64& y);
// Inverse of a mod n for gcd(a, n) = 1 (n >= 1).
i64 inv_mod(i64 a, i64 n);
std::vector<u64> prime_divisors(u64 n);

// The two fixed matrices of the homology conditions.
inline Mat3 mat_h() { return Mat3::rows({0, -1, 0}, {1, -1, 0}, {0, 0, 1}); }
inline Mat3 mat_g1() { return Mat3::rows({1, 0, 0}, {1, 1, 0}, {0, 0, 1}); }

}  // namespace sl3
