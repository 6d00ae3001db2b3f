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

#include <cstdio>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "induce.hpp"
#include "repmod.hpp"

namespace sl3 {

struct MonomialElem {
  Mat3 m;
  int sign;  // sign of the underlying permutation
};

class MonomialGroup {
 public:
  // The 24 signed permutation matrices of determinant 1, identity first.
  static const std::vector<MonomialElem>& elements();
  static int sign_of(const Mat3& m);  // throws if m is not in the group
};

// Row echelon form over F_p built incrementally.  Stored rows are kept in
// panels: every panel row is zero on all pivots of earlier panels, and each
// panel is fully reduced on its own pivots.  Panels are immutable once
// written, which lets finished blocks move to disk.
class EchelonAccumulator {
 public:
  struct Options {
    size_t panel_rows = 64;
    size_t resident_rows = 0;  // 0: never spill
    std::string spill_dir;
  };

  EchelonAccumulator(u32 p, size_t ncols);
  EchelonAccumulator(u32 p, size_t ncols, Options opt);
  ~EchelonAccumulator();
  EchelonAccumulator(const EchelonAccumulator&) = delete;
  EchelonAccumulator& operator=(const EchelonAccumulator&) = delete;

  u32 p() const { return p_; }
  size_t ncols() const { return ncols_; }
  size_t rank() const { return rank_; }
  size_t kernel_dim() const { return ncols_ - rank_; }
  size_t spilled_blocks() const;

  // Reduces nrows rows (row-major, residues stored as doubles) in place and
  // stores the independent ones.  Returns the number of new pivots.
  size_t add_rows(std::vector<double>& rows, size_t nrows);
  bool add_row(const Vec& row);

  // Pivot column of every stored row, in insertion order.
  std::vector<size_t> pivots() const;
  // Kernel basis: vector l is 1 at free column l, 0 at the other free columns.
  std::vector<Vec> kernel(std::vector<size_t>* free_cols = nullptr) const;

 private:
  struct Panel {
    std::vector<u32> piv;
    std::vector<double> rows;  // piv.size() x ncols_, empty while on disk
  };
  struct Block {
    std::vector<Panel> panels;
    std::string file;  // nonempty when spilled
    size_t nrows = 0;
  };

  void reduce_against(std::vector<double>& x, size_t nrows, const Panel& pn) const;
  Panel eliminate_panel(double* x, size_t nrows);
  void load(const Block& b, std::vector<Panel>& out) const;
  void maybe_spill();

  u32 p_;
  size_t ncols_;
  Options opt_;
  size_t rank_ = 0;
  std::vector<Block> blocks_;
  std::vector<char> is_pivot_;
  size_t resident_ = 0;
  size_t spill_count_ = 0;
};

struct HomologyOptions {
  bool restart = true;
  double restart_fraction = 0.02;
  size_t restart_min = 16;
  size_t batch_rows = 1000;
  size_t panel_rows = 64;
  size_t resident_rows = 0;
  size_t workers = 1;  // threads building row blocks; results do not depend on it
  std::string spill_dir;
  bool verify = true;
  std::function<void(const std::string&)> log;
};

struct StreamStats {
  size_t columns = 0;
  size_t rows_seen = 0;
  size_t rows_stored = 0;
  size_t restarts = 0;
  size_t rows_at_restart = 0;
};

// Supplies the rows of a matrix whose right kernel is wanted.  After
// rebase(K) the source must emit rows in the coordinates y with x = sum_l y_l K[l].
class RowSource {
 public:
  virtual ~RowSource() = default;
  virtual size_t ncols() const = 0;
  virtual size_t total_rows() const = 0;
  // Writes up to max_rows rows of width ncols() (current coordinates) to out.
  virtual size_t next(std::vector<double>& out, size_t max_rows) = 0;
  virtual void rebase(const std::vector<Vec>& basis) = 0;
};

struct KernelResult {
  std::vector<Vec> basis;         // in the original coordinates
  std::vector<size_t> free_cols;  // basis[l][free_cols[m]] = delta_lm
  StreamStats stats;
};

KernelResult streaming_kernel(u32 p, RowSource& src, const HomologyOptions& opt);

// Image of P = sum eps(g) g, as an RREF basis.  Dense; for modest dimensions.
std::vector<Vec> semi_invariants(const GModule& V);
// Solutions of conditions 1-2 directly (kernel of v.g - eps(g) v over generators).
std::vector<Vec> semi_invariants_direct(const GModule& V);
// Coefficient vectors x with sum_j x_j b_j in the kernel of 1 + h + h^2.
std::vector<Vec> h_kernel(const GModule& V, const std::vector<Vec>& basis,
                          const HomologyOptions& opt = {});
std::vector<Vec> h_kernel_dense(const GModule& V, const std::vector<Vec>& basis);

Mat3 mat_h_sq();
bool satisfies_conditions(const GModule& V, const Vec& v);

class HomologySpace {
 public:
  HomologySpace() = default;
  HomologySpace(std::shared_ptr<const InducedModule> V, Weight w, std::vector<Vec> basis,
                std::vector<size_t> dist);

  const InducedModule& module() const { return *V_; }
  const std::shared_ptr<const InducedModule>& module_ptr() const { return V_; }
  const Weight& weight() const { return w_; }
  u32 p() const { return V_->p(); }
  u32 level() const { return V_->level(); }
  const Character& character() const { return V_->character(); }
  size_t dim() const { return basis_.size(); }
  const std::vector<Vec>& basis() const { return basis_; }
  const Vec& vector(size_t l) const { return basis_[l]; }
  size_t distinguished(size_t l) const { return dist_[l]; }
  const std::vector<size_t>& distinguished() const { return dist_; }
  int det_twist() const { return w_.c; }

 private:
  std::shared_ptr<const InducedModule> V_;
  Weight w_;
  std::vector<Vec> basis_;
  std::vector<size_t> dist_;
};

struct HomologyReport {
  size_t semi_dim = 0;
  StreamStats stats;
};

HomologySpace homology_space(u32 p, u32 N, const Weight& w, const Character& eps,
                             const HomologyOptions& opt = {}, HomologyReport* report = nullptr);
HomologySpace homology_of(std::shared_ptr<const InducedModule> V, const Weight& w,
                          const HomologyOptions& opt = {}, HomologyReport* report = nullptr);

}  // namespace sl3
