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

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "bsrec/errors.hpp"
#include "bsrec/lattice.hpp"

namespace bsrec {

// Largest supported half-order. binom(2r, j) and the de Boor workspace stay
// tiny and exact up to here; nobody needs a degree-15 cardinal spline anyway.
inline constexpr int kMaxHalfOrder = 8;

// Half-order of a centered cardinal B-spline: order 2r, degree 2r-1,
// support [-r, r], knots at the integers.
struct BSplineOrder {
  int r;
  explicit BSplineOrder(int r_) : r(r_) {
    if (r < 1 || r > kMaxHalfOrder)
      throw ConfigError("b-spline half-order r must be in [1, " +
                        std::to_string(kMaxHalfOrder) + "], got " + std::to_string(r));
  }
};

// One tensor-product translate at dyadic level k: x -> prod_i M(2^k x_i - s_i).
struct DyadicIndex {
  int level = 0;
  MultiIndex s;
};

// Two-scale mask: M(x) = sum_j m_j M(2x - j + r), m_j = 2^{-2r+1} binom(2r, j).
// Kept as exact integers over a power-of-two denominator.
struct RefinementMask {
  std::vector<std::int64_t> num;  // binom(2r, j), j = 0..2r
  std::int64_t den = 1;           // 2^{2r-1}

  int taps() const { return static_cast<int>(num.size()); }
  double weight(int j) const { return static_cast<double>(num[j]) / static_cast<double>(den); }
  Eigen::ArrayXd weights() const;
};

namespace detail {
// Order-2 building block: the unit hat on [-1, 1].
template <class Real>
inline Real hat(Real t) {
  if (t < Real(0)) t = -t;
  return t < Real(1) ? Real(1) - t : Real(0);
}
}  // namespace detail

// Centered cardinal B-spline of order 2r evaluated by the de Boor recursion
// on integer knots. Even in x; exactly zero for |x| >= r; C^{2r-2}.
template <class Real>
Real eval_cardinal(int r, Real x) {
  if (x < Real(0)) x = -x;
  if (x >= Real(r)) return Real(0);
  const int n = 2 * r - 1;  // degree
  if (n == 1) return Real(1) - x;
  // v[i] holds splines of increasing order built from shifted hats.
  std::array<Real, 2 * kMaxHalfOrder> v{};
  Real z = x + Real(1 - r);
  for (int i = 0; i < n; ++i) {
    v[i] = detail::hat(z);
    z += Real(1);
  }
  const Real smx = Real(r) - x;
  for (int j = 2; j <= n; ++j) {
    Real a = Real(j + 1) - smx;
    Real b = smx;
    for (int k = 0; k <= n - j; ++k) {
      v[k] = (a * v[k + 1] + b * v[k]) / Real(j);
      a += Real(1);
      b -= Real(1);
    }
  }
  return v[0];
}

// M_{k,s}(x) = prod_i M(2^{level} x_i - s_i). Total in x; zero off-support.
double eval_translate(int r, const DyadicIndex& idx, const Point& x);

RefinementMask refinement_mask(int r);

// Index set J(k) per axis: integers s with -r < s < 2^k + r.
inline Index jset_lo(int r) { return -static_cast<Index>(r) + 1; }
inline Index jset_hi(int r, int level) { return (Index(1) << level) + r - 1; }
Lattice jset(int r, int level, int d);

// Per-axis range of translates whose support contains x: s in (2^k x - r, 2^k x + r).
// Returned clamped to J(k).
void support_range(int r, int level, double x, Index& s_lo, Index& s_hi);

}  // namespace bsrec
