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

#include <vector>

#include "bsrec/lattice.hpp"

namespace bsrec::detail {

inline std::vector<Index> row_major_strides(const Lattice& b) {
  std::vector<Index> st(b.dim());
  Index s = 1;
  for (int a = b.dim() - 1; a >= 0; --a) {
    st[a] = s;
    s *= b.extent(a);
  }
  return st;
}

// Applies a univariate kernel to every line along `axis` of a row-major
// array, resizing that axis from bin's range to [out_lo, out_hi]. The kernel
// maps a gathered input line to an output line of the new extent.
template <class Kernel>
void transform_axis(const Lattice& bin, const Eigen::ArrayXd& in, int axis,
                    Index out_lo, Index out_hi, Kernel&& kernel,
                    Lattice& bout, Eigen::ArrayXd& out) {
  const int d = bin.dim();
  MultiIndex lo(d), hi(d);
  for (int a = 0; a < d; ++a) {
    lo[a] = (a == axis) ? out_lo : bin.lo(a);
    hi[a] = (a == axis) ? out_hi : bin.hi(a);
  }
  bout = Lattice(lo, hi);
  out.resize(bout.size());

  const auto stin = row_major_strides(bin);
  const auto stout = row_major_strides(bout);
  const Index len_in = bin.extent(axis);
  const Index len_out = bout.extent(axis);

  // Iterate the complement of `axis`.
  MultiIndex olo(d), ohi(d);
  for (int a = 0; a < d; ++a) {
    olo[a] = (a == axis) ? 0 : bin.lo(a);
    ohi[a] = (a == axis) ? 0 : bin.hi(a);
  }
  const Lattice outer(olo, ohi);

  Eigen::VectorXd line_in(len_in), line_out(len_out);
  outer.for_each([&](const MultiIndex& o, Index) {
    Index base_in = 0, base_out = 0;
    for (int a = 0; a < d; ++a) {
      if (a == axis) continue;
      base_in += (o[a] - bin.lo(a)) * stin[a];
      base_out += (o[a] - bout.lo(a)) * stout[a];
    }
    using StrideT = Eigen::InnerStride<Eigen::Dynamic>;
    Eigen::Map<const Eigen::VectorXd, 0, StrideT> src(in.data() + base_in, len_in,
                                                      StrideT(stin[axis]));
    line_in = src;
    kernel(line_in, line_out);
    Eigen::Map<Eigen::VectorXd, 0, StrideT> dst(out.data() + base_out, len_out,
                                                StrideT(stout[axis]));
    dst = line_out;
  });
}

}  // namespace bsrec::detail
