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

#include "bsrec/quasi.hpp"

#include <cmath>
#include <map>

#include "tensor_detail.hpp"

namespace bsrec {

namespace {

// Lagrange basis weight of node `node` (among `nodes`) evaluated at t.
double lagrange_weight(const std::vector<Index>& nodes, std::size_t i, double t) {
  double w = 1.0;
  for (std::size_t l = 0; l < nodes.size(); ++l) {
    if (l == i) continue;
    w *= (t - static_cast<double>(nodes[l])) /
         (static_cast<double>(nodes[i]) - static_cast<double>(nodes[l]));
  }
  return w;
}

std::vector<Index> left_nodes(int r) {
  std::vector<Index> n(2 * r);
  for (int i = 0; i < 2 * r; ++i) n[i] = i;
  return n;
}

std::vector<Index> right_nodes(int r, Index N) {
  std::vector<Index> n(2 * r);
  for (int i = 0; i < 2 * r; ++i) n[i] = N - 2 * r + 1 + i;
  return n;
}

// Coefficient rule along one line of samples: out[s] = sum_j lam(j) v(s - j),
// exterior indices v(t) supplied by the polynomial end extension.
class ACoefKernel {
 public:
  ACoefKernel(const QuasiInterpolantSpec& spec, int level)
      : spec_(spec), N_((Index(1) << level)) {
    if (N_ + 1 < 2 * spec.r)
      throw ConfigError("coefficient rule: grid too coarse, need 2^m + 1 >= 2r nodes (m >= " +
                        std::to_string(min_grid_level(spec.r)) + " for r = " +
                        std::to_string(spec.r) + ")");
    const int r = spec_.r;
    // Exterior reach: s - j with s in J, |j| <= mu.
    const Index reach = (r - 1) + spec_.mu;
    left_w_.resize(reach);
    right_w_.resize(reach);
    const auto ln = left_nodes(r);
    const auto rn = right_nodes(r, N_);
    for (Index e = 0; e < reach; ++e) {
      Eigen::VectorXd wl(2 * r), wr(2 * r);
      for (int i = 0; i < 2 * r; ++i) {
        wl[i] = lagrange_weight(ln, i, static_cast<double>(-1 - e));
        wr[i] = lagrange_weight(rn, i, static_cast<double>(N_ + 1 + e));
      }
      left_w_[e] = wl;
      right_w_[e] = wr;
    }
  }

  void operator()(const Eigen::VectorXd& v, Eigen::VectorXd& out) const {
    const int r = spec_.r;
    const Index lo = jset_lo(r);
    for (Index s = lo; s <= N_ + r - 1; ++s) {
      double acc = 0.0;
      for (int j = -spec_.mu; j <= spec_.mu; ++j)
        acc += spec_.lam(j) * value(v, s - j);
      out[s - lo] = acc;
    }
  }

  double value(const Eigen::VectorXd& v, Index t) const {
    if (t >= 0 && t <= N_) return v[t];
    if (t < 0) return left_w_[-1 - t].dot(v.head(2 * spec_.r));
    return right_w_[t - N_ - 1].dot(v.tail(2 * spec_.r));
  }

 private:
  const QuasiInterpolantSpec& spec_;
  Index N_;
  std::vector<Eigen::VectorXd> left_w_, right_w_;
};

void check_mask_shape(int r, int mu, const Eigen::ArrayXd& lambda) {
  BSplineOrder ord(r);
  if (mu < 0) throw ConfigError("mask: mu must be >= 0");
  if (lambda.size() != 2 * mu + 1)
    throw ConfigError("mask: expected " + std::to_string(2 * mu + 1) + " weights for mu = " +
                      std::to_string(mu) + ", got " + std::to_string(lambda.size()));
  for (int j = 1; j <= mu; ++j)
    if (lambda[mu + j] != lambda[mu - j])
      throw ConfigError("mask: weights must be even, lambda(" + std::to_string(j) +
                        ") != lambda(-" + std::to_string(j) + ")");
}

// Reproduction of x^e on the line (no boundary): Q(p, x) = sum_s L(p, s) M(x - s).
void check_reproduction(const QuasiInterpolantSpec& spec) {
  constexpr double kTol = 1e-8;
  const double xs[] = {0.0, 0.31, 0.5, 1.0, -1.27, 2.63};
  for (int e = 0; e <= 2 * spec.r - 1; ++e) {
    for (double x : xs) {
      Index s_lo = static_cast<Index>(std::floor(x - spec.r)) + 1;
      Index s_hi = static_cast<Index>(std::ceil(x + spec.r)) - 1;
      double acc = 0.0, scale = 1.0;
      for (Index s = s_lo; s <= s_hi; ++s) {
        double L = 0.0;
        for (int j = -spec.mu; j <= spec.mu; ++j)
          L += spec.lam(j) * std::pow(static_cast<double>(s - j), e);
        const double m = eval_cardinal(spec.r, x - static_cast<double>(s));
        acc += L * m;
        scale = std::max(scale, std::abs(L));
      }
      if (std::abs(acc - std::pow(x, e)) > kTol * scale)
        throw ConfigError("mask: fails to reproduce degree-" + std::to_string(e) +
                          " polynomials (order 2r = " + std::to_string(2 * spec.r) +
                          " requires reproduction up to degree " +
                          std::to_string(2 * spec.r - 1) + ")");
    }
  }
}

}  // namespace

QuasiInterpolantSpec QuasiInterpolantSpec::piecewise_linear() {
  QuasiInterpolantSpec s;
  s.r = 1;
  s.mu = 0;
  s.lambda = Eigen::ArrayXd::Ones(1);
  return s;
}

QuasiInterpolantSpec QuasiInterpolantSpec::cubic() {
  QuasiInterpolantSpec s;
  s.r = 2;
  s.mu = 1;
  s.lambda = Eigen::ArrayXd(3);
  s.lambda << -1.0 / 6.0, 8.0 / 6.0, -1.0 / 6.0;
  return s;
}

QuasiInterpolantSpec QuasiInterpolantSpec::builtin(std::string_view name) {
  if (name == "piecewise_linear") return piecewise_linear();
  if (name == "cubic") return cubic();
  throw ConfigError("unknown builtin quasi-interpolant '" + std::string(name) +
                    "' (have: piecewise_linear, cubic)");
}

QuasiInterpolantSpec QuasiInterpolantSpec::validated(int r, int mu, Eigen::ArrayXd lambda) {
  check_mask_shape(r, mu, lambda);
  QuasiInterpolantSpec s;
  s.r = r;
  s.mu = mu;
  s.lambda = std::move(lambda);
  check_reproduction(s);
  return s;
}

Point grid_point(const MultiIndex& s, int level) {
  Point x(s.size());
  for (std::size_t a = 0; a < s.size(); ++a)
    x[static_cast<Index>(a)] = std::ldexp(static_cast<double>(s[a]), -level);
  return x;
}

GridSamples read_grid(FunctionOracle& oracle, int level, int d) {
  if (d < 1 || d > kMaxDim) throw ConfigError("read_grid: dimension out of range");
  if (d != oracle.d())
    throw ConfigError("read_grid: requested dimension " + std::to_string(d) +
                      " != oracle dimension " + std::to_string(oracle.d()));
  if (level < 0 || level > 52) throw ConfigError("read_grid: level out of range");
  GridSamples g;
  g.level = level;
  g.d = d;
  const Lattice box = g.box();
  g.v.resize(box.size());
  box.for_each([&](const MultiIndex& s, Index flat) {
    g.v[flat] = oracle(grid_point(s, level));
  });
  return g;
}

ExtendedGrid::ExtendedGrid(GridSamples g, int r) : g_(std::move(g)), r_(r) {
  BSplineOrder check(r);
  if (g_.box().extent(0) < 2 * r)
    throw ConfigError("extension: grid too coarse, need 2^m + 1 >= 2r nodes");
}

double ExtendedGrid::at(const MultiIndex& t) const {
  MultiIndex tmp(t);
  return at_rec(tmp, 0);
}

double ExtendedGrid::at_rec(MultiIndex& t, int axis) const {
  const Index N = Index(1) << g_.level;
  if (axis == g_.d) return g_.v[g_.box().linear(t)];
  const Index ta = t[axis];
  if (ta >= 0 && ta <= N) return at_rec(t, axis + 1);
  // Exterior in this axis: Lagrange combination of the 2r end nodes.
  const auto nodes = ta < 0 ? left_nodes(r_) : right_nodes(r_, N);
  double acc = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double w = lagrange_weight(nodes, i, static_cast<double>(ta));
    t[axis] = nodes[i];
    acc += w * at_rec(t, axis + 1);
  }
  t[axis] = ta;
  return acc;
}

LevelCoefficients a_from_samples(const QuasiInterpolantSpec& spec, const GridSamples& g) {
  const int d = g.d;
  Lattice box = g.box();
  Eigen::ArrayXd cur = g.v;
  const ACoefKernel kernel(spec, g.level);
  // Last axis first: the innermost coefficient functional acts on x_d.
  for (int axis = d - 1; axis >= 0; --axis) {
    Lattice nbox;
    Eigen::ArrayXd next;
    detail::transform_axis(box, cur, axis, jset_lo(spec.r), jset_hi(spec.r, g.level),
                           kernel, nbox, next);
    box = nbox;
    cur.swap(next);
  }
  LevelCoefficients out;
  out.level = g.level;
  out.r = spec.r;
  out.box = box;
  out.v = std::move(cur);
  return out;
}

LevelCoefficients a_coeffs(FunctionOracle& oracle, const QuasiInterpolantSpec& spec,
                           int level, int d) {
  if (level < min_grid_level(spec.r))
    throw ConfigError("coefficient rule: grid too coarse, need 2^m + 1 >= 2r nodes (m >= " +
                      std::to_string(min_grid_level(spec.r)) + " for r = " +
                      std::to_string(spec.r) + ")");
  return a_from_samples(spec, read_grid(oracle, level, d));
}

SparseExpansion apply_Q(FunctionOracle& oracle, const QuasiInterpolantSpec& spec,
                        int level, int d) {
  const LevelCoefficients a = a_coeffs(oracle, spec, level, d);
  SparseExpansion e;
  e.d = d;
  e.r = spec.r;
  e.terms.reserve(a.v.size());
  a.box.for_each([&](const MultiIndex& s, Index flat) {
    e.terms.push_back({level, s, a.v[flat]});
  });
  return e;
}

LineStencil a_stencil_1d(const QuasiInterpolantSpec& spec, int level, Index s) {
  const Index N = Index(1) << level;
  if (N + 1 < 2 * spec.r)
    throw ConfigError("coefficient rule: grid too coarse, need 2^m + 1 >= 2r nodes");
  std::map<Index, double> acc;
  const auto ln = left_nodes(spec.r);
  const auto rn = right_nodes(spec.r, N);
  for (int j = -spec.mu; j <= spec.mu; ++j) {
    const double lj = spec.lam(j);
    const Index t = s - j;
    if (t >= 0 && t <= N) {
      acc[t] += lj;
    } else {
      const auto& nodes = t < 0 ? ln : rn;
      for (std::size_t i = 0; i < nodes.size(); ++i)
        acc[nodes[i]] += lj * lagrange_weight(nodes, i, static_cast<double>(t));
    }
  }
  LineStencil st;
  st.lo = acc.begin()->first;
  const Index len = acc.rbegin()->first - st.lo + 1;
  st.w = Eigen::VectorXd::Zero(len);
  for (const auto& [t, w] : acc) st.w[t - st.lo] = w;
  return st;
}

int min_grid_level(int r) {
  int m = 0;
  while ((Index(1) << m) + 1 < 2 * r) ++m;
  return m;
}

}  // namespace bsrec
