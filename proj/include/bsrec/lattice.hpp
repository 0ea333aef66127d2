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

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "bsrec/errors.hpp"

namespace bsrec {

// Dimensions stay small (tensor-product grids explode otherwise).
inline constexpr int kMaxDim = 6;

using Index = std::int64_t;
using MultiIndex = std::vector<Index>;

// A point of the unit cube. Fixed capacity: copies never allocate.
using Point = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;

inline void hash_combine(std::size_t& h, std::size_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
}

struct MultiIndexHash {
  std::size_t operator()(const MultiIndex& s) const {
    std::size_t h = s.size();
    for (Index i : s) hash_combine(h, static_cast<std::size_t>(i));
    return h;
  }
};

// Bit-exact key for dyadic points (coordinates j * 2^-k are exact doubles).
struct PointKey {
  std::uint64_t bits[kMaxDim] = {};
  int n = 0;

  bool operator==(const PointKey& o) const {
    if (n != o.n) return false;
    for (int i = 0; i < n; ++i)
      if (bits[i] != o.bits[i]) return false;
    return true;
  }
};

inline PointKey make_point_key(const Point& x) {
  PointKey k;
  k.n = static_cast<int>(x.size());
  for (int i = 0; i < k.n; ++i) {
    double c = x[i] == 0.0 ? 0.0 : x[i];  // collapse -0
    k.bits[i] = std::bit_cast<std::uint64_t>(c);
  }
  return k;
}

struct PointKeyHash {
  std::size_t operator()(const PointKey& k) const {
    std::size_t h = static_cast<std::size_t>(k.n);
    for (int i = 0; i < k.n; ++i) hash_combine(h, static_cast<std::size_t>(k.bits[i]));
    return h;
  }
};

// Inclusive integer box {lo_0..hi_0} x ... x {lo_{d-1}..hi_{d-1}},
// linearized row-major (last axis fastest).
class Lattice {
 public:
  Lattice() = default;
  Lattice(MultiIndex lo, MultiIndex hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (lo_.size() != hi_.size()) throw ConfigError("lattice: lo/hi dimension mismatch");
    for (std::size_t a = 0; a < lo_.size(); ++a)
      if (hi_[a] < lo_[a]) throw ConfigError("lattice: empty axis range");
  }

  static Lattice cube(Index lo, Index hi, int dim) {
    return Lattice(MultiIndex(dim, lo), MultiIndex(dim, hi));
  }

  int dim() const { return static_cast<int>(lo_.size()); }
  Index lo(int a) const { return lo_[a]; }
  Index hi(int a) const { return hi_[a]; }
  Index extent(int a) const { return hi_[a] - lo_[a] + 1; }

  Index size() const {
    Index n = 1;
    for (int a = 0; a < dim(); ++a) n *= extent(a);
    return n;
  }

  bool contains(const MultiIndex& s) const {
    for (int a = 0; a < dim(); ++a)
      if (s[a] < lo_[a] || s[a] > hi_[a]) return false;
    return true;
  }

  Index linear(const MultiIndex& s) const {
    Index f = 0;
    for (int a = 0; a < dim(); ++a) f = f * extent(a) + (s[a] - lo_[a]);
    return f;
  }

  MultiIndex unlinear(Index flat) const {
    MultiIndex s(dim());
    for (int a = dim() - 1; a >= 0; --a) {
      s[a] = lo_[a] + flat % extent(a);
      flat /= extent(a);
    }
    return s;
  }

  // Row-major visit; f(const MultiIndex&, Index flat).
  template <class F>
  void for_each(F&& f) const {
    MultiIndex s(lo_);
    const Index total = size();
    for (Index flat = 0; flat < total; ++flat) {
      f(const_cast<const MultiIndex&>(s), flat);
      for (int a = dim() - 1; a >= 0; --a) {
        if (++s[a] <= hi_[a]) break;
        s[a] = lo_[a];
      }
    }
  }

  bool operator==(const Lattice& o) const { return lo_ == o.lo_ && hi_ == o.hi_; }

 private:
  MultiIndex lo_, hi_;
};

}  // namespace bsrec
