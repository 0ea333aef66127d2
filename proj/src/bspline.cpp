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

#include "bsrec/bspline.hpp"

namespace bsrec {

Eigen::ArrayXd RefinementMask::weights() const {
  Eigen::ArrayXd w(taps());
  for (int j = 0; j < taps(); ++j) w[j] = weight(j);
  return w;
}

double eval_translate(int r, const DyadicIndex& idx, const Point& x) {
  double prod = 1.0;
  for (int i = 0; i < x.size(); ++i) {
    // 2^k x_i is exact; the subtraction is the only rounding step.
    const double t = std::ldexp(x[i], idx.level) - static_cast<double>(idx.s[i]);
    prod *= eval_cardinal(r, t);
    if (prod == 0.0) return 0.0;
  }
  return prod;
}

RefinementMask refinement_mask(int r) {
  BSplineOrder check(r);
  RefinementMask m;
  m.num.resize(2 * r + 1);
  m.num[0] = 1;
  // Pascal row 2r, exact in int64 for r <= 8.
  for (int j = 1; j <= 2 * r; ++j)
    m.num[j] = m.num[j - 1] * (2 * r - j + 1) / j;
  m.den = std::int64_t(1) << (2 * r - 1);
  return m;
}

Lattice jset(int r, int level, int d) {
  return Lattice::cube(jset_lo(r), jset_hi(r, level), d);
}

void support_range(int r, int level, double x, Index& s_lo, Index& s_hi) {
  const double t = std::ldexp(x, level);
  // open interval (t - r, t + r)
  s_lo = static_cast<Index>(std::floor(t - r)) + 1;
  s_hi = static_cast<Index>(std::ceil(t + r)) - 1;
  if (s_lo < jset_lo(r)) s_lo = jset_lo(r);
  if (s_hi > jset_hi(r, level)) s_hi = jset_hi(r, level);
}

}  // namespace bsrec
