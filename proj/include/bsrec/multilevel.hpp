// Copyright 2026 the bsrec authors
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

#include <functional>
#include <utility>
#include <vector>

#include "bsrec/expansion.hpp"
#include "bsrec/quasi.hpp"

namespace bsrec {

// Level-(k-1) coefficients re-expressed in the level-k basis through the
// two-scale mask, tensorized over all axes:
//   a'_{k,s} = sum_{2m+j-r=s, per axis} prod_i 2^{-2r+1} binom(2r, j_i) a_{k-1,m}.
LevelCoefficients refine_coeffs(const QuasiInterpolantSpec& spec,
                                const LevelCoefficients& prev);

// Detail coefficients c_{k,s} = a_{k,s} - a'_{k,s}, the level-k expansion of
// Q_k(f) - Q_{k-1}(f). At k = 0 there is no coarser level and c = a.
LevelCoefficients c_coeffs(const LevelCoefficients& a_prev,
                           const LevelCoefficients& a_curr,
                           const QuasiInterpolantSpec& spec);

// Base coefficients at k_bar plus detail levels k_bar+1..K. Evaluating the
// concatenation reproduces Q_K(f) exactly (telescoping).
struct Decomposition {
  int base_level = 0;
  LevelCoefficients base;
  std::vector<LevelCoefficients> details;  // levels base_level+1 .. K

  int top_level() const { return base_level + static_cast<int>(details.size()); }
};

Decomposition decompose(FunctionOracle& oracle, const QuasiInterpolantSpec& spec,
                        int k_bar, int K, int d);

SparseExpansion to_expansion(const Decomposition& dec);

// Plain (quasi-)norm of the coefficient array: (sum |c|^p)^{1/p}, max for
// p = inf. Valid for 0 < p <= inf.
double coeff_norm(const LevelCoefficients& lc, double p);

// Scaled sequence norm 2^{-d k / p} (sum_s |c_s|^p)^{1/p} (max when p = inf),
// equivalent to the L_p norm of sum_s c_s M_{k,s} with level-independent
// constants.
double level_norm(const LevelCoefficients& lc, double p);

// ---- Per-coefficient sample footprints -------------------------------------
//
// c_{k,s} is a linear functional of point values on two nested grids: the
// level-k part from a_{k,s} and the level-(k-1) part from the refinement of
// the coarser coefficients. Both factor per axis.

// Weights of a'_{level,s} on the level-(level-1) grid values (univariate).
LineStencil aprime_stencil_1d(const QuasiInterpolantSpec& spec, int level, Index s);

struct CoeffStencil {
  int level = 0;
  std::vector<LineStencil> a_ax;  // per-axis weights on the level-k grid
  std::vector<LineStencil> p_ax;  // per-axis weights on the level-(k-1) grid

  bool has_prev() const { return !p_ax.empty(); }
};

CoeffStencil c_stencil(const QuasiInterpolantSpec& spec, int level, const MultiIndex& s);

// node_value(grid_level, index) supplies f at index * 2^-grid_level.
double eval_c_stencil(const CoeffStencil& st,
                      const std::function<double(int, const MultiIndex&)>& node_value);

// Distinct grid nodes the stencil reads, as (grid_level, index) pairs with
// zero-weight entries skipped. Coarse-grid nodes are rescaled to level-k
// indices (index doubled), so a node shared by both grids appears once.
std::vector<std::pair<int, MultiIndex>> c_stencil_nodes(const CoeffStencil& st);

// Exact upper bound, over all levels and positions, of the number of distinct
// sample points one c_{k,s} touches. Computed by enumerating boundary and
// parity cases at a probe level.
long c_stencil_bound(const QuasiInterpolantSpec& spec, int d);

}  // namespace bsrec
