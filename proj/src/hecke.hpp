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

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "homology.hpp"

namespace sl3 {

struct HeckeCosets {
  u32 ell = 0;
  int k = 0;
  u32 N = 1;
  std::vector<Mat3> reps;  // det ell^k, first row (*,0,0) mod N
};

// Representatives of Gamma_0(N) D(ell,k) Gamma_0(N) / left action, D(ell,1) = diag(1,1,ell),
// D(ell,2) = diag(1,ell,ell).  Distinctness is verified for ell <= 7.
HeckeCosets hecke_cosets(u32 ell, int k, u32 N, u32 p);
bool same_coset(const Mat3& a, const Mat3& b, u32 N);  // Gamma_0(N) a == Gamma_0(N) b

struct SymbolTerm {
  Mat3 m;  // det 1
  int sign = 1;
};
struct ReduceStats {
  size_t nodes = 0;
  size_t max_depth = 0;
  bool det_decreased = true;
};
// Writes [Q] as a signed sum of unimodular symbols.
std::vector<SymbolTerm> reduce_symbol(const Mat3& Q, ReduceStats* stats = nullptr);

// On-disk store of symbol decompositions, keyed by (ell, k, representatives).
class SymbolCache {
 public:
  explicit SymbolCache(std::string dir) : dir_(std::move(dir)) {}
  const std::string& dir() const { return dir_; }
  std::string path_for(const HeckeCosets& c) const;
  std::optional<std::vector<std::vector<SymbolTerm>>> load(const HeckeCosets& c) const;
  void store(const HeckeCosets& c, const std::vector<std::vector<SymbolTerm>>& dec) const;

 private:
  std::string dir_;
};

struct HeckeOperator {
  u32 ell = 0;
  int k = 0;
  u32 N = 1;
  size_t cosets = 0;
  std::vector<Mat3> terms;  // T v = sum_t sign_t v . terms[t]
  std::vector<int> signs;
};

HeckeOperator hecke_operator(u32 ell, int k, u32 N, u32 p, const SymbolCache* cache = nullptr);

Vec hecke_image(const GModule& V, const HeckeOperator& T, const Vec& v);
// <e_i, T v> for every v in vs, without forming T v.
std::vector<u32> hecke_coefficients(const InducedModule& V, const HeckeOperator& T, size_t i,
                                    const std::vector<Vec>& vs);
// Row r holds the coordinates of T f_r in the basis f.
std::vector<Vec> hecke_matrix(const HomologySpace& H, const HeckeOperator& T);

// Primes ell <= bound not dividing pN, in increasing order.
std::vector<u32> good_primes(u32 bound, u32 p, u32 N);

// Eigenvalue data.
struct EigenSystem {
  u32 p = 0;
  int degree = 1;
  Poly modulus;  // of the coefficient field
  Weight weight;
  u32 N = 1;
  Character eps;
  size_t index = 0;
  size_t multiplicity = 1;     // dimension of the joint eigenspace found
  int conjugate = 0;           // Frobenius power relating it to the first of its orbit
  bool fallback = false;       // a(l,k) taken from a full image comparison
  size_t coordinate = 0;       // module coordinate used for single coefficients
  std::map<u32, std::array<ExtField::Elem, 2>> a;
  std::vector<ExtField::Elem> vector;  // coefficients in the homology basis

  ExtField field() const { return ExtField(p, modulus); }
  std::string value_string(u32 ell, int k) const;
};

struct EigenOptions {
  u32 ell_max = 47;
  int max_degree = 3;
  u32 split_prime = 0;       // 0: smallest good prime
  size_t max_split_primes = 3;
  const SymbolCache* cache = nullptr;
  // When set, only T(split,1) eigenvalues accepted here are expanded.
  std::function<bool(const ExtField&, const ExtField::Elem&)> target;
  std::function<void(const std::string&)> log;
};

std::vector<EigenSystem> eigensystems(const HomologySpace& H, const EigenOptions& opt = {});
// a(ell,k) for one eigenvector using module coordinate i.
ExtField::Elem eigenvalue_at(const HomologySpace& H, const ExtField& E, const std::vector<ExtField::Elem>& x,
                             const HeckeOperator& T, size_t coordinate);
Vec combine_basis(const HomologySpace& H, const Vec& coeffs);

}  // namespace sl3
