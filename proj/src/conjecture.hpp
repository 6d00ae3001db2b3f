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

// Weight, level and nebentype predictions from local data of a mod p
// Galois representation.

#pragma once

#include <set>
#include <string>
#include <vector>

#include "repmod.hpp"

namespace sl3 {

using Tuple = std::vector<i64>;

// 0 <= b_i - b_{i+1} <= p-1 and 0 <= b_n < p-1.
bool is_p_restricted(const Tuple& b, u32 p);
// Every p-restricted tuple congruent to t mod p-1, sorted.
std::vector<Tuple> restrict_prime(const Tuple& t, u32 p);
std::vector<Weight> restrict_prime(const Weight& w, u32 p);

// Tuples (a_1..a_d) with m = sum a_i p^{i-1} mod p^d - 1, 0 <= a_i - a_d <= p-1
// and 0 <= a_d < p-1.  At most one exists.
std::vector<Tuple> base_p_expansions(i64 m, int d, u32 p);

// Diagonal characters of inertia: psi_{d,1}^m, ..., psi_{d,d}^m in `positions` (1-based).
struct NiveauBlock {
  int d = 1;
  i64 m = 0;
  std::vector<int> positions;
  bool wild = false;
};

struct InertiaSpec {
  u32 p = 0;
  std::vector<NiveauBlock> blocks;
  int n() const;
};

// Partition of {1..n} into standard blocks, written like "1|23" or "13|2".
struct LeviShape {
  std::vector<std::vector<int>> blocks;

  static LeviShape diagonal(int n);
  static LeviShape full(int n);
  static LeviShape parse(const std::string& s);
  std::string name() const;
  int n() const;
};

std::set<Tuple> derived_tuples(const InertiaSpec& spec, const LeviShape& levi);

struct ParityResult {
  bool ok = false;
  std::string reason;
};
// signs[k] is the complex conjugation eigenvalue placed at position k+1.
ParityResult strict_parity(const std::vector<int>& signs, const LeviShape& levi);

struct WeightPrediction {
  Tuple derived;
  Weight raw;                     // (t1-2, t2-1, t3) before normalization
  std::vector<Weight> candidates; // restrict_prime(raw)
  std::string levi;

  bool ambiguous() const { return candidates.size() > 1; }
  // "F(a,b,c)" or "F(a,b,c)′" on the smallest candidate.
  std::string label() const;
  std::string display() const;
};

// Rejects with ErrorKind::InvalidArgument when strict parity fails.
std::vector<WeightPrediction> predicted_weights(const InertiaSpec& spec, const std::vector<LeviShape>& levis,
                                                const std::vector<int>& signs);

// Does a written label ("F(4,2,1)", "F(3,2,0)⊗det^4", "F(1,0,0)′") name this prediction?
bool matches_label(const WeightPrediction& w, const std::string& label, u32 p);

std::vector<Weight> twist_weights(const std::vector<Weight>& ws, int s, u32 p);
std::set<Tuple> twist_tuples(const std::set<Tuple>& ts, i64 s);
Weight extra_weight(const Weight& w, u32 p);
Tuple dual_tuple(const Tuple& t);
// F(a,b,c)* = F(-c,-b,-a)'.
std::vector<Weight> dual_weight(const Weight& w, u32 p);

struct RamifiedPrime {
  u32 q = 0;
  int inertia_order = 1;
  int fixed_dim = 3;
  int wild_exponent = 0;
};
struct RamificationData {
  std::vector<RamifiedPrime> primes;
  Character det_eps;  // prime-to-p part of det rho
};
// Fixed space of an involution with the given trace on a 3-dimensional space.
int fixed_dim_of_involution(int trace);
// Effect of twisting by the quadratic character at q: an involution generating
// inertia at q then acts with the opposite sign.
RamificationData twist_quadratic(const RamificationData& r, u32 q);

struct LevelNebentype {
  u64 N = 1;
  Character eps;
};
LevelNebentype level_nebentype(const RamificationData& r);

}  // namespace sl3
