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

#include <string>
#include <string_view>

#include "bsrec/bspline.hpp"
#include "bsrec/expansion.hpp"
#include "bsrec/lattice.hpp"
#include "bsrec/oracle.hpp"

namespace bsrec {

// Coefficient rule of a quasi-interpolant: the functional
//   L(f, s) = sum_{|j| <= mu} lambda(j) f(s - j)
// paired with translates of the order-2r cardinal B-spline. A valid mask is
// even and makes sum_s L(p, s) M(x - s) reproduce every polynomial of degree
// <= 2r - 1 per variable.
struct QuasiInterpolantSpec {
  int r = 1;
  int mu = 0;
  Eigen::ArrayXd lambda;  // entries j = -mu..mu, stored at index mu + j

  double lam(int j) const { return lambda[mu + j]; }
  double mask_norm() const { return lambda.abs().sum(); }

  // Nodal rule: L(f, s) = f(s). Reproduces degree <= 1.
  static QuasiInterpolantSpec piecewise_linear();
  // Order-4 rule: L(f, s) = (-f(s-1) + 8 f(s) - f(s+1)) / 6.
  static QuasiInterpolantSpec cubic();
  static QuasiInterpolantSpec builtin(std::string_view name);

  // Checks range of r, evenness of the mask, and polynomial reproduction of
  // all degrees <= 2r - 1 to 1e-8; throws ConfigError otherwise.
  static QuasiInterpolantSpec validated(int r, int mu, Eigen::ArrayXd lambda);
};

// Samples of the target on the level-m dyadic grid of the cube, row-major
// over {0..2^m}^d.
struct GridSamples {
  int level = 0;
  int d = 1;
  Eigen::ArrayXd v;

  Lattice box() const { return Lattice::cube(0, Index(1) << level, d); }
};

// Coefficients indexed by the translate set J^d(k) of a fixed level.
struct LevelCoefficients {
  int level = 0;
  int r = 1;
  Lattice box;        // jset(r, level, d)
  Eigen::ArrayXd v;   // row-major over box

  int d() const { return box.dim(); }
};

// Dyadic grid node s * 2^-level as a point.
Point grid_point(const MultiIndex& s, int level);

// Reads the full level-m grid through the oracle (row-major, deterministic
// order). Exactly (2^m + 1)^d distinct ledger entries.
GridSamples read_grid(FunctionOracle& oracle, int level, int d);

// Boundary extension of grid samples: outside [0, 2^m] the values continue
// as the degree-(2r-1) polynomial through the 2r nearest end nodes, applied
// per axis. at(t) accepts integer indices outside the cube.
class ExtendedGrid {
 public:
  ExtendedGrid(GridSamples g, int r);
  double at(const MultiIndex& t) const;
  const GridSamples& samples() const { return g_; }

 private:
  double at_rec(MultiIndex& t, int axis) const;
  GridSamples g_;
  int r_;
};

// Coefficients a_{m,s} for all s in J^d(m), computed axis by axis (last axis
// first). Each coefficient depends on at most (2 mu + 2r)^d sample values.
LevelCoefficients a_from_samples(const QuasiInterpolantSpec& spec, const GridSamples& g);
LevelCoefficients a_coeffs(FunctionOracle& oracle, const QuasiInterpolantSpec& spec,
                           int level, int d);

// The level-m quasi-interpolant Q_m(f) as a dense level-m expansion.
SparseExpansion apply_Q(FunctionOracle& oracle, const QuasiInterpolantSpec& spec,
                        int level, int d);

// Univariate weight profile of a coefficient functional on grid values:
// contiguous weights starting at grid index `lo`.
struct LineStencil {
  Index lo = 0;
  Eigen::VectorXd w;

  Index hi() const { return lo + static_cast<Index>(w.size()) - 1; }
};

// Weights of a_{level,s} on the level-m grid values (boundary extension
// already folded in, so every touched index is inside [0, 2^m]).
LineStencil a_stencil_1d(const QuasiInterpolantSpec& spec, int level, Index s);

// Smallest grid level the mask can run on: 2^m + 1 >= 2r nodes.
int min_grid_level(int r);

}  // namespace bsrec
