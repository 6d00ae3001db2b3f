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

// Frobenius predictions for three-dimensional mod p Galois representations
// and their comparison with Hecke eigensystems.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "conjecture.hpp"
#include "hecke.hpp"

namespace sl3 {

// Integer polynomials; coefficient i multiplies x^i.
using ZPoly = std::vector<i64>;
ZPoly parse_zpoly(const std::string& s);
std::string zpoly_to_string(const ZPoly& f);
Poly reduce_zpoly(const ZPoly& f, const PrimeField& F);

struct DegreeFactor {
  int degree = 0;
  Poly product;  // product of all irreducible factors of this degree
};
// Distinct-degree factorization of a monic squarefree polynomial over F_p.
std::vector<DegreeFactor> distinct_degree_factorization(const PrimeField& F, const Poly& f);
// Degrees of the irreducible factors of monic f mod ell, decreasing.
// ErrorKind::InvalidArgument ("ramified") when f is not squarefree mod ell.
std::vector<int> factor_degrees(const ZPoly& f, u32 ell);

// Legendre symbol (ell | q) by Euler's criterion, q an odd prime.
int quad_char(u32 q, u32 ell);

// ---------------------------------------------------------------------------
// Character tables.  Values are integer combinations of powers of a root t
// of the table's monic integer polynomial.

using CycVal = std::vector<i64>;

struct GroupClass {
  std::string name;
  u64 size = 0;
  int order = 1;
  std::vector<int> cycle_type;  // decreasing, on the defining permutation action
  size_t square = 0, cube = 0, inverse = 0;
};

struct GroupCharacter {
  std::string name;
  std::vector<CycVal> values;
};

struct GroupData {
  std::string name;
  int degree = 0;
  u64 order = 0;
  ZPoly irrational;  // monic; {0, 1} when the table is rational
  std::vector<GroupClass> classes;
  std::vector<GroupCharacter> characters;

  size_t class_index(const std::string& name) const;
  size_t character_index(const std::string& name) const;
  // Classes whose permutation action has this cycle type.
  std::vector<size_t> class_candidates(const std::vector<int>& cycle_type) const;
  // Class sizes, power maps and exact row orthogonality.
  void validate() const;
};

int group_tables_version();
std::vector<std::string> group_names();
const GroupData& group_data(const std::string& name);

// ---------------------------------------------------------------------------
// Representation descriptions.

// LocalOnly: no global description, only the local data for predictions.
enum class Construction { SumOfCharacters, TwoDimPlusCharacter, Irreducible3, Induced, LocalOnly };

struct PowerCharacter {  // omega^k * eps
  int omega = 0;
  Character eps;
};

// Order-9 ray class character data for a representation induced from a cubic field.
struct InducedFixture {
  int zeta_order = 9;
  // Exponents of zeta over the rational prime ell: one entry when pi(Frob) has
  // order 2, three when ell splits completely, none when pi(Frob) has order 3.
  std::map<u32, std::vector<int>> chi;
};

struct GaloisRepSpec {
  std::string name;
  u32 p = 0;
  Construction construction = Construction::TwoDimPlusCharacter;
  ZPoly polynomial;
  std::string group;
  std::string character;       // name in the group table
  std::vector<u32> root;       // pins the root of the table polynomial; empty: all roots
  int omega = 0;               // rho = sigma (+) omega^k
  Character twist;             // global quadratic twist of rho
  std::vector<PowerCharacter> summands;  // for SumOfCharacters
  PowerCharacter det;          // det rho, used for c_3 checks
  std::map<u32, std::string> frobenius_classes;  // fixture class choices
  InducedFixture induced;
  std::vector<u32> bad_primes;  // besides p and the discriminant primes

  // Prediction side.
  InertiaSpec inertia;
  std::vector<LeviShape> levis;
  std::vector<int> conjugation;
  RamificationData ramification;
};

struct FrobeniusCandidate {
  std::array<ExtField::Elem, 3> c{};  // det(1 - rho(Frob) X) = 1 - c1 X + c2 X^2 - c3 X^3
  std::string cls;
};

struct FrobeniusEntry {
  u32 ell = 0;
  int order = 0;  // order of Frob in the Galois group of the splitting field
  std::vector<int> cycle_type;
  std::vector<FrobeniusCandidate> candidates;
};

// One consistent global choice (root of the table polynomial, root of unity).
struct FrobeniusData {
  std::string branch;
  u32 p = 0;
  Poly modulus;
  std::map<u32, FrobeniusEntry> entries;

  ExtField field() const { return ExtField(p, modulus); }
};

// Field holding all predicted values of the spec.
ExtField prediction_field(const GaloisRepSpec& spec);
int branch_count(const GaloisRepSpec& spec);
std::string branch_name(const GaloisRepSpec& spec, int branch);
bool is_good_prime(const GaloisRepSpec& spec, u32 ell);
FrobeniusEntry charpoly_pred(const GaloisRepSpec& spec, u32 ell, int branch = 0);
// Frobenius data at every good prime ell <= ell_max for each branch.
std::vector<FrobeniusData> frobenius_data(const GaloisRepSpec& spec, u32 ell_max);
// omega^k(ell) eps(ell) in the prediction field.
ExtField::Elem det_value(const GaloisRepSpec& spec, u32 ell);

// ---------------------------------------------------------------------------
// Matching a(ell,1) = c1 and ell a(ell,2) = c2.

struct MatchRow {
  u32 ell = 0;
  bool pass = false;
  std::string a1, a2;           // eigenvalues
  std::string c1, c2;           // matched (or first) candidate
  std::string cls;
  size_t candidates = 0;
};

struct MatchReport {
  bool pass = false;
  std::string branch;
  std::vector<MatchRow> rows;
  u32 first_failure = 0;
  size_t eigensystem = 0;
};

MatchReport match(const EigenSystem& sys, const std::vector<FrobeniusData>& branches);

// Specs in the JSON layout used by the command line tool.
GaloisRepSpec parse_rep_spec(const std::string& json_text);

}  // namespace sl3
