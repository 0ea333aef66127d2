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

#include "bsrec/multilevel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_set>

#include "tensor_detail.hpp"

namespace bsrec {

namespace {

// One axis of the two-scale relation: out[s] = sum_j m_j in[(s + r - j) / 2]
// over even s + r - j with the half-index inside J(level - 1).
class RefineKernel {
 public:
  RefineKernel(const RefinementMask& mask, int r, int level_out)
      : mask_(mask), r_(r), in_lo_(jset_lo(r)), in_hi_(jset_hi(r, level_out - 1)) {}

  void operator()(const Eigen::VectorXd& v, Eigen::VectorXd& out) const {
    const double inv_den = 1.0 / static_cast<double>(mask_.den);
    const Index out_lo = jset_lo(r_);
    for (Index i = 0; i < out.size(); ++i) {
      const Index s = out_lo + i;
      double acc = 0.0;
      for (int j = 0; j < mask_.taps(); ++j) {
        const Index t = s + r_ - j;
        if (t & 1) continue;
        const Index m = t / 2;
        if (m < in_lo_ || m > in_hi_) continue;
        acc += static_cast<double>(mask_.num[j]) * v[m - in_lo_];
      }
      out[i] = acc * inv_den;
    }
  }

 private:
  const RefinementMask& mask_;
  int r_;
  Index in_lo_, in_hi_;
};

void check_level_coeffs(const LevelCoefficients& lc, const QuasiInterpolantSpec& spec,
                        const char* what) {
  if (lc.r != spec.r)
    throw ConfigError(std::string(what) + ": half-order mismatch with the mask");
  if (lc.box != jset(lc.r, lc.level, lc.d()))
    throw ConfigError(std::string(what) + ": coefficient box is not the translate set of its level");
  if (lc.v.size() != lc.box.size())
    throw ConfigError(std::string(what) + ": coefficient count does not match the box");
}

}  // namespace

LevelCoefficients refine_coeffs(const QuasiInterpolantSpec& spec,
                                const LevelCoefficients& prev) {
  check_level_coeffs(prev, spec, "refine");
  const int d = prev.d();
  const int k = prev.level + 1;
  const RefinementMask mask = refinement_mask(spec.r);
  const RefineKernel kernel(mask, spec.r, k);

  Lattice box = prev.box;
  Eigen::ArrayXd cur = prev.v;
  for (int axis = 0; axis < d; ++axis) {
    Lattice nbox;
    Eigen::ArrayXd next;
    detail::transform_axis(box, cur, axis, jset_lo(spec.r), jset_hi(spec.r, k),
                           kernel, nbox, next);
    box = nbox;
    cur.swap(next);
  }
  LevelCoefficients out;
  out.level = k;
  out.r = spec.r;
  out.box = box;
  out.v = std::move(cur);
  return out;
}

LevelCoefficients c_coeffs(const LevelCoefficients& a_prev,
                           const LevelCoefficients& a_curr,
                           const QuasiInterpolantSpec& spec) {
  check_level_coeffs(a_prev, spec, "detail");
  check_level_coeffs(a_curr, spec, "detail");
  if (a_curr.level != a_prev.level + 1)
    throw ConfigError("detail: levels must be consecutive, got " +
                      std::to_string(a_prev.level) + " and " + std::to_string(a_curr.level));
  if (a_prev.d() != a_curr.d()) throw ConfigError("detail: dimension mismatch");
  LevelCoefficients c = a_curr;
  c.v -= refine_coeffs(spec, a_prev).v;
  return c;
}

Decomposition decompose(FunctionOracle& oracle, const QuasiInterpolantSpec& spec,
                        int k_bar, int K, int d) {
  if (k_bar < min_grid_level(spec.r))
    throw ConfigError("decompose: base level below the coarsest grid the mask supports (" +
                      std::to_string(min_grid_level(spec.r)) + ")");
  if (K < k_bar) throw ConfigError("decompose: top level below base level");
  Decomposition dec;
  dec.base_level = k_bar;
  LevelCoefficients a_prev = a_coeffs(oracle, spec, k_bar, d);
  dec.base = a_prev;
  dec.details.reserve(static_cast<std::size_t>(K - k_bar));
  for (int k = k_bar + 1; k <= K; ++k) {
    LevelCoefficients a_k = a_coeffs(oracle, spec, k, d);
    dec.details.push_back(c_coeffs(a_prev, a_k, spec));
    a_prev = std::move(a_k);
  }
  return dec;
}

SparseExpansion to_expansion(const Decomposition& dec) {
  SparseExpansion e;
  e.d = dec.base.d();
  e.r = dec.base.r;
  Index total = dec.base.v.size();
  for (const auto& c : dec.details) total += c.v.size();
  e.terms.reserve(total);
  auto emit = [&e](const LevelCoefficients& lc) {
    lc.box.for_each([&](const MultiIndex& s, Index flat) {
      e.terms.push_back({lc.level, s, lc.v[flat]});
    });
  };
  emit(dec.base);
  for (const auto& c : dec.details) emit(c);
  return e;
}

double coeff_norm(const LevelCoefficients& lc, double p) {
  if (std::isinf(p)) return lc.v.size() == 0 ? 0.0 : lc.v.abs().maxCoeff();
  if (!(p > 0.0)) throw ConfigError("norm: p must be positive or inf");
  return std::pow(lc.v.abs().pow(p).sum(), 1.0 / p);
}

double level_norm(const LevelCoefficients& lc, double p) {
  if (std::isinf(p)) return coeff_norm(lc, p);
  return std::exp2(-static_cast<double>(lc.d()) * lc.level / p) * coeff_norm(lc, p);
}

LineStencil aprime_stencil_1d(const QuasiInterpolantSpec& spec, int level, Index s) {
  if (level - 1 < min_grid_level(spec.r))
    throw ConfigError("stencil: level - 1 below the coarsest grid the mask supports");
  if (s < jset_lo(spec.r) || s > jset_hi(spec.r, level))
    throw ConfigError("stencil: translate index outside J of its level");
  const RefinementMask mask = refinement_mask(spec.r);
  const Index in_lo = jset_lo(spec.r);
  const Index in_hi = jset_hi(spec.r, level - 1);
  std::map<Index, double> acc;
  for (int j = 0; j < mask.taps(); ++j) {
    const Index t = s + spec.r - j;
    if (t & 1) continue;
    const Index m = t / 2;
    if (m < in_lo || m > in_hi) continue;
    const double wj = mask.weight(j);
    const LineStencil sub = a_stencil_1d(spec, level - 1, m);
    for (Index i = 0; i < sub.w.size(); ++i)
      if (sub.w[i] != 0.0) acc[sub.lo + i] += wj * sub.w[i];
  }
  if (acc.empty()) throw ConfigError("stencil: empty refinement support");
  LineStencil st;
  st.lo = acc.begin()->first;
  const Index len = acc.rbegin()->first - st.lo + 1;
  st.w = Eigen::VectorXd::Zero(len);
  for (const auto& [t, w] : acc) st.w[t - st.lo] = w;
  return st;
}

CoeffStencil c_stencil(const QuasiInterpolantSpec& spec, int level, const MultiIndex& s) {
  const int d = static_cast<int>(s.size());
  if (d < 1 || d > kMaxDim) throw ConfigError("stencil: dimension out of range");
  if (level - 1 < min_grid_level(spec.r))
    throw ConfigError("stencil: detail level needs both its grid and the coarser one");
  CoeffStencil st;
  st.level = level;
  st.a_ax.reserve(d);
  st.p_ax.reserve(d);
  for (int a = 0; a < d; ++a) {
    st.a_ax.push_back(a_stencil_1d(spec, level, s[a]));
    st.p_ax.push_back(aprime_stencil_1d(spec, level, s[a]));
  }
  return st;
}

namespace {

double tensor_contract(const std::vector<LineStencil>& ax, int glevel,
                       const std::function<double(int, const MultiIndex&)>& node_value,
                       MultiIndex& idx, std::size_t axis) {
  if (axis == ax.size()) return node_value(glevel, idx);
  const LineStencil& st = ax[axis];
  double acc = 0.0;
  for (Index i = 0; i < st.w.size(); ++i) {
    const double w = st.w[i];
    if (w == 0.0) continue;
    idx[axis] = st.lo + i;
    acc += w * tensor_contract(ax, glevel, node_value, idx, axis + 1);
  }
  return acc;
}

void collect_nodes(const std::vector<LineStencil>& ax, Index scale, int out_level,
                   std::unordered_set<MultiIndex, MultiIndexHash>& seen,
                   std::vector<std::pair<int, MultiIndex>>& out,
                   MultiIndex& idx, std::size_t axis) {
  if (axis == ax.size()) {
    if (seen.insert(idx).second) out.emplace_back(out_level, idx);
    return;
  }
  const LineStencil& st = ax[axis];
  for (Index i = 0; i < st.w.size(); ++i) {
    if (st.w[i] == 0.0) continue;
    idx[axis] = (st.lo + i) * scale;
    collect_nodes(ax, scale, out_level, seen, out, idx, axis + 1);
  }
}

}  // namespace

double eval_c_stencil(const CoeffStencil& st,
                      const std::function<double(int, const MultiIndex&)>& node_value) {
  MultiIndex idx(st.a_ax.size());
  double v = tensor_contract(st.a_ax, st.level, node_value, idx, 0);
  if (st.has_prev()) {
    MultiIndex idx2(st.p_ax.size());
    v -= tensor_contract(st.p_ax, st.level - 1, node_value, idx2, 0);
  }
  return v;
}

std::vector<std::pair<int, MultiIndex>> c_stencil_nodes(const CoeffStencil& st) {
  std::unordered_set<MultiIndex, MultiIndexHash> seen;
  std::vector<std::pair<int, MultiIndex>> out;
  MultiIndex idx(st.a_ax.size());
  collect_nodes(st.a_ax, 1, st.level, seen, out, idx, 0);
  if (st.has_prev()) collect_nodes(st.p_ax, 2, st.level, seen, out, idx, 0);
  return out;
}

long c_stencil_bound(const QuasiInterpolantSpec& spec, int d) {
  if (d < 1 || d > kMaxDim) throw ConfigError("stencil: dimension out of range");
  // Per position, the node count of a d-variate detail stencil is
  //   prod |A_a| + prod |P_a| - prod |A_a n P_a|
  // where A is the level-k part and P the rescaled level-(k-1) part of one
  // axis. Stencil shapes depend only on boundary distance and parity, so all
  // shapes that can ever occur are already present once the grid is wide
  // enough for the two boundary zones and an interior of both parities.
  const Index zone = 4 * (2 * spec.r + spec.mu + 2);
  int probe = min_grid_level(spec.r) + 1;
  while ((Index(1) << (probe - 1)) < 2 * zone) ++probe;

  long best = 0;
  for (int level = min_grid_level(spec.r) + 1; level <= probe; ++level) {
    std::set<std::array<long, 3>> triples;
    for (Index s = jset_lo(spec.r); s <= jset_hi(spec.r, level); ++s) {
      const LineStencil a = a_stencil_1d(spec, level, s);
      const LineStencil p = aprime_stencil_1d(spec, level, s);
      std::set<Index> A, P;
      for (Index i = 0; i < a.w.size(); ++i)
        if (a.w[i] != 0.0) A.insert(a.lo + i);
      for (Index i = 0; i < p.w.size(); ++i)
        if (p.w[i] != 0.0) P.insert(2 * (p.lo + i));
      long both = 0;
      for (Index t : A)
        if (P.count(t)) ++both;
      triples.insert({static_cast<long>(A.size()), static_cast<long>(P.size()), both});
    }
    // Largest d-fold combination over the shapes seen at this level.
    std::vector<std::array<long, 3>> ts(triples.begin(), triples.end());
    std::vector<std::size_t> pick(d, 0);
    while (true) {
      long xa = 1, ya = 1, za = 1;
      for (int a = 0; a < d; ++a) {
        xa *= ts[pick[a]][0];
        ya *= ts[pick[a]][1];
        za *= ts[pick[a]][2];
      }
      best = std::max(best, xa + ya - za);
      int a = d - 1;
      for (; a >= 0; --a) {
        if (++pick[a] < ts.size()) break;
        pick[a] = 0;
      }
      if (a < 0) break;
    }
  }
  return best;
}

}  // namespace bsrec
