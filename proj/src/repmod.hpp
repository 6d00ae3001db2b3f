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

// Right modules over integer matrices acting through reduction mod p:
// symmetric powers, tensor products, the irreducible F(a,b,0) inside
// Sym^a (x) Sym^b, and twists by det and a nebentype character.

#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ff.hpp"
#include "intmat.hpp"

namespace sl3 {

using Vec = std::vector<u32>;

struct Weight {
  int a = 0, b = 0, c = 0;

  bool p_restricted(u32 p) const;
  std::string label() const;    // "F(a,b,c)"
  std::string display() const;  // "F(a-c,b-c,0)⊗det^c", or the plain label when c = 0
  Weight untwisted() const { return {a - c, b - c, 0}; }
  // Accepts "F(a,b,c)", "F(a,b,c)⊗det^s", "F(a,b,c)(x)det^s", "F(a,b,c)*det^s".
  static Weight parse(const std::string& s);
  auto operator<=>(const Weight&) const = default;
};

// Quadratic nebentype characters: a product of Legendre symbols mod odd
// primes q and optionally the character mod 4.
class Character {
 public:
  Character() = default;
  // "trivial", "eps<q>", "eps4", or products "eps3*eps13".
  static Character parse(const std::string& s);
  static Character legendre(u32 q);

  bool is_trivial() const { return factors_.empty(); }
  u32 conductor() const;
  const std::vector<u32>& factors() const { return factors_; }
  // Value +-1 at an integer prime to the conductor.
  int value(i64 x) const;
  u32 value_mod(i64 x, const PrimeField& F) const { return F.from_int(value(x)); }
  std::string name() const;
  bool operator==(const Character& o) const { return factors_ == o.factors_; }

 private:
  std::vector<u32> factors_;  // sorted; 4 stands for the character mod 4
};

// Row-compressed matrix; row i is the image of basis vector i.
class SparseMat {
 public:
  SparseMat() = default;
  SparseMat(size_t rows, size_t cols) : rows_(rows), cols_(cols), start_(1, 0) {}
  static SparseMat from_dense(const std::vector<Vec>& rows, size_t cols);

  void push_entry(u32 col, u32 val) {
    idx_.push_back(col);
    val_.push_back(val);
  }
  void end_row() { start_.push_back(static_cast<u32>(idx_.size())); }

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  size_t nnz() const { return idx_.size(); }
  u32 row_begin(size_t i) const { return start_[i]; }
  u32 row_end(size_t i) const { return start_[i + 1]; }
  u32 col_at(u32 k) const { return idx_[k]; }
  u32 val_at(u32 k) const { return val_[k]; }
  u32 get(size_t i, size_t j) const;
  // Row vector times matrix.
  Vec apply(const PrimeField& F, const Vec& v) const;
  std::vector<Vec> to_dense() const;

 private:
  size_t rows_ = 0, cols_ = 0;
  std::vector<u32> start_, idx_, val_;
};

class GModule {
 public:
  explicit GModule(u32 p) : F_(p) {}
  virtual ~GModule() = default;

  const PrimeField& field() const { return F_; }
  u32 p() const { return F_.p(); }
  virtual size_t dim() const = 0;
  virtual std::string basis_label(size_t i) const = 0;
  virtual SparseMat action_matrix(const Mat3& g) const = 0;
  // c with c[a] = <e_i, e_a . g>, so that coeff_of(v, g, i) = sum_a v[a] c[a].
  virtual Vec coeff_functional(const Mat3& g, size_t i) const;
  virtual Vec act(const Vec& v, const Mat3& g) const;
  virtual u32 coeff_of(const Vec& v, const Mat3& g, size_t i) const;
  // Relative work of coeff_functional(g, i).
  virtual double coeff_cost(size_t) const { return 1.0; }

 protected:
  PrimeField F_;
};

class SymModule : public GModule {
 public:
  SymModule(int degree, u32 p);

  int degree() const { return g_; }
  size_t dim() const override { return mons_.size(); }
  std::string basis_label(size_t i) const override;
  SparseMat action_matrix(const Mat3& g) const override;
  Vec coeff_functional(const Mat3& g, size_t i) const override;
  u32 coeff_of(const Vec& v, const Mat3& g, size_t i) const override;
  u32 coeff_of(const Vec& v, const Mat3& g, size_t i, u64* work) const;
  double coeff_cost(size_t i) const override;

  const std::array<int, 3>& monomial(size_t i) const { return mons_[i]; }
  size_t index_of(int i, int j, int k) const;
  // Dense images of all basis monomials under g mod p.
  std::vector<Vec> dense_action(const Mat3& g) const;
  // Coefficient of monomial `target` in (monomial `source`) . g, with g reduced mod p.
  u32 single_coeff(const Mat3& gbar, size_t source, size_t target, u64* work = nullptr) const;

 private:
  int g_;
  std::vector<std::array<int, 3>> mons_;
  std::vector<std::vector<u32>> binom_;  // Pascal table mod p up to degree g
};

inline size_t sym_dim(int g) { return static_cast<size_t>(g + 1) * (g + 2) / 2; }

// Sym^a (x) Sym^b with index alpha * dim(Sym^b) + beta.
class TensorModule : public GModule {
 public:
  TensorModule(int a, int b, u32 p);

  const SymModule& left() const { return A_; }
  const SymModule& right() const { return B_; }
  size_t dim() const override { return A_.dim() * B_.dim(); }
  std::string basis_label(size_t i) const override;
  SparseMat action_matrix(const Mat3& g) const override;
  Vec coeff_functional(const Mat3& g, size_t i) const override;
  Vec act(const Vec& v, const Mat3& g) const override;
  double coeff_cost(size_t i) const override {
    return A_.coeff_cost(i / B_.dim()) * B_.coeff_cost(i % B_.dim());
  }
  // Torus weight of basis vector i.
  std::array<int, 3> weight_of(size_t i) const;

 private:
  SymModule A_, B_;
};

struct SparseVec {
  std::vector<u32> idx;  // increasing
  std::vector<u32> val;
};

// Submodule of a tensor module with a leading-index basis: <w_i, v_j> = delta_ij.
class SubModule : public GModule {
 public:
  SubModule(std::shared_ptr<const TensorModule> ambient, std::vector<SparseVec> basis);

  const TensorModule& ambient() const { return *amb_; }
  size_t dim() const override { return basis_.size(); }
  std::string basis_label(size_t i) const override;
  SparseMat action_matrix(const Mat3& g) const override;
  Vec coeff_functional(const Mat3& g, size_t i) const override;
  double coeff_cost(size_t i) const override { return amb_->coeff_cost(lead_[i]); }
  const SparseVec& basis_vector(size_t i) const { return basis_[i]; }
  u32 lead(size_t i) const { return lead_[i]; }
  Vec to_ambient(const Vec& coords) const;
  // Coordinates of an ambient vector known to lie in the submodule.
  Vec from_ambient(const Vec& amb) const;

 private:
  std::shared_ptr<const TensorModule> amb_;
  std::vector<SparseVec> basis_;
  std::vector<u32> lead_;
  std::vector<int> lead_pos_;  // ambient index -> basis index or -1
};

class TwistedModule : public GModule {
 public:
  TwistedModule(std::shared_ptr<const GModule> base, int det_power, Character eps, u32 level);

  size_t dim() const override { return base_->dim(); }
  std::string basis_label(size_t i) const override { return base_->basis_label(i); }
  SparseMat action_matrix(const Mat3& g) const override;
  u32 scalar(const Mat3& g) const;

 private:
  std::shared_ptr<const GModule> base_;
  int s_;
  Character eps_;
  u32 level_;
};

// sum_i (-1)^i C(b,i) x^{a-i} y^i (x) x^i y^{b-i}, as a dense vector of T.
Vec hw_vector(const TensorModule& T, int a, int b);
// Closure of seed under GL_3(F_p), echelonized with leftmost leads. When
// split_by_weight is set the seed must be a torus weight vector generating a
// module that is a sum of its integer weight spaces (true for hw_vector).
std::shared_ptr<SubModule> span_submodule(std::shared_ptr<const TensorModule> T, const Vec& seed,
                                          bool split_by_weight = true);
// F(a,b,0) realized as Sym^a when b = 0, otherwise inside Sym^a (x) Sym^b.
std::shared_ptr<const GModule> irreducible_module(const Weight& w, u32 p);

}  // namespace sl3
