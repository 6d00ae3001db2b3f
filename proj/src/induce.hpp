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

// Induction from Gamma_0(N) to SL_3(Z): cosets are indexed by P^2(Z/N) and
// representatives are chosen congruent to the identity mod p.

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "repmod.hpp"

namespace sl3 {

using ProjPoint = std::array<u32, 3>;

// Enumeration of P^2(Z/N) with constant-time lookup of arbitrary unimodular rows.
class P2Table {
 public:
  explicit P2Table(u32 N);

  u32 N() const { return N_; }
  size_t size() const { return points_.size(); }
  const ProjPoint& point(size_t i) const { return points_[i]; }
  const std::vector<ProjPoint>& points() const { return points_; }
  // Index of the class of a row; throws if the row is not unimodular mod N.
  size_t index_of(const Vec3& row) const;
  ProjPoint normalize(const Vec3& row) const { return points_[index_of(row)]; }

 private:
  u32 N_;
  std::vector<ProjPoint> points_;
  std::vector<int> table_;  // size N^3, -1 for non-unimodular rows
};

// Number of points N^2 prod_{q | N} (1 + 1/q + 1/q^2).
u64 p2_count(u32 N);
std::vector<ProjPoint> proj_points(u32 N, u32 p);
std::string point_to_string(const ProjPoint& pt, u32 N);  // "[u:v:w] mod N"

// Class of m SL_3(Z)-part: normalize(e_1 adj(m)) mod N. Requires det(m) > 0 prime to pN.
ProjPoint coset_of(const Mat3& m, u32 N, u32 p);
// r in SL_3(Z) with r = I mod p and e_1 r^{-1} = point mod N.
Mat3 lift_rep(const ProjPoint& point, u32 N, u32 p);

class InducedModule : public GModule {
 public:
  InducedModule(std::shared_ptr<const GModule> inner, u32 N, Character eps);

  const GModule& inner() const { return *inner_; }
  const std::shared_ptr<const GModule>& inner_ptr() const { return inner_; }
  const P2Table& cosets() const { return P_; }
  const Character& character() const { return eps_; }
  u32 level() const { return P_.N(); }
  size_t blocks() const { return P_.size(); }
  const Mat3& rep(size_t i) const { return reps_[i]; }

  size_t dim() const override { return P_.size() * inner_->dim(); }
  std::string basis_label(size_t i) const override;
  SparseMat action_matrix(const Mat3& g) const override;
  Vec coeff_functional(const Mat3& g, size_t i) const override;
  double coeff_cost(size_t i) const override { return inner_->coeff_cost(i % inner_->dim()); }
  Vec act(const Vec& v, const Mat3& g) const override;

  // Block structure of g: target block j receives scalar[j] * (block src[j]) . g.
  struct BlockMap {
    std::vector<u32> src;
    std::vector<u32> scalar;
  };
  BlockMap block_map(const Mat3& g) const;
  // Source block and scalar for a single target block.
  std::pair<u32, u32> block_entry(const Mat3& g, size_t j) const;

 private:
  std::shared_ptr<const GModule> inner_;
  P2Table P_;
  Character eps_;
  std::vector<Mat3> reps_;
  std::vector<Vec3> rows_;         // first row of r_i^{-1} mod N
  std::vector<Mat3> reps_mod_;     // r_i mod N

  void check_semigroup(const Mat3& g) const;
  std::pair<u32, u32> entry(const Mat3& gN, const Mat3& aN, size_t j) const;
};

}  // namespace sl3
