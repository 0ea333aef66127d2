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

#include "bsrec/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <unordered_set>

namespace bsrec {

namespace {

// (base)^d, saturating at cap + 1 so comparisons against cap stay exact.
Index pow_capped(Index base, int d, Index cap) {
  Index v = 1;
  for (int i = 0; i < d; ++i) {
    if (v > cap / base) return cap + 1;
    v *= base;
  }
  return v;
}

// Largest level whose grid and term count both fit in n; -1 if none.
int densest_level(int r, int d, long n) {
  int k = -1;
  for (int t = min_grid_level(r); t <= 60; ++t) {
    if (pow_capped((Index(1) << t) + 1, d, n) > n) break;
    if (pow_capped((Index(1) << t) + 2 * r - 1, d, n) > n) break;
    k = t;
  }
  return k;
}

double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

double shrink(double v, double t) {
  const double mag = std::abs(v) - t;
  return mag > 0.0 ? sgn(v) * mag : 0.0;
}

// Indices of the `count` largest magnitudes, ranked descending, ties to the
// smaller index.
std::vector<Index> top_indices(const Eigen::ArrayXd& x, Index count) {
  const Index m = x.size();
  count = std::min(count, m);
  std::vector<Index> idx(m);
  std::iota(idx.begin(), idx.end(), Index(0));
  auto cmp = [&x](Index a, Index b) {
    const double va = std::abs(x[a]), vb = std::abs(x[b]);
    if (va != vb) return va > vb;
    return a < b;
  };
  if (count < m) std::nth_element(idx.begin(), idx.begin() + count, idx.end(), cmp);
  std::sort(idx.begin(), idx.begin() + count, cmp);
  idx.resize(count);
  return idx;
}

double lq_of(const Eigen::ArrayXd& v, double q) {
  if (v.size() == 0) return 0.0;
  if (std::isinf(q)) return v.abs().maxCoeff();
  return std::pow(v.abs().pow(q).sum(), 1.0 / q);
}

}  // namespace

double BesovParams::delta() const {
  const double ip = std::isinf(p) ? 0.0 : 1.0 / p;
  const double iq = std::isinf(q) ? 0.0 : 1.0 / q;
  return std::max(0.0, d * (ip - iq));
}

void BesovParams::validate() const {
  if (d < 1 || d > kMaxDim)
    throw ConfigError("smoothness params: dimension must be in [1, " +
                      std::to_string(kMaxDim) + "]");
  auto expo = [](double e, const char* name) {
    if (std::isnan(e) || !(e > 0.0))
      throw ConfigError(std::string("smoothness params: ") + name + " must be in (0, inf]");
  };
  expo(p, "p");
  expo(q, "q");
  expo(theta, "theta");
  if (std::isnan(alpha) || std::isinf(alpha) || !(alpha > 0.0))
    throw ConfigError("smoothness params: alpha must be positive and finite");
  const double dp = std::isinf(p) ? 0.0 : static_cast<double>(d) / p;
  const bool strict = alpha > dp;
  const bool boundary =
      alpha == dp && theta <= std::min(1.0, p) && !std::isinf(p) && !std::isinf(q);
  if (!strict && !boundary)
    throw ConfigError(
        "smoothness params: point samples need alpha > d/p, or alpha = d/p with "
        "theta <= min(1, p) and finite p, q");
}

AdaptiveSchedule make_schedule(long n, const BesovParams& bp,
                               const QuasiInterpolantSpec& spec) {
  bp.validate();
  if (n < 1) throw ConfigError("schedule: budget must be positive");
  const int d = bp.d;
  const int r = spec.r;

  AdaptiveSchedule s;
  s.n = n;
  s.delta = bp.delta();

  if (!(bp.p < bp.q)) {
    // Selection buys nothing when the error norm is no stronger than the
    // class norm; a single dense level is rate-optimal.
    const int k = densest_level(r, d, n);
    if (k < 0)
      throw BudgetError("schedule: budget " + std::to_string(n) +
                        " below the coarsest usable grid, need (2^m + 1)^d <= n at m = " +
                        std::to_string(min_grid_level(r)));
    s.linear = true;
    s.k_bar = s.k_star = k;
    return s;
  }

  if (!(bp.alpha < 2.0 * r))
    throw ConfigError("schedule: alpha must lie below the spline order 2r = " +
                      std::to_string(2 * r) + " (the operator saturates there)");
  if (!(bp.alpha > s.delta))
    throw ConfigError("schedule: needs alpha > d(1/p - 1/q) = " + std::to_string(s.delta));
  s.epsilon = std::min(0.5 * (bp.alpha - s.delta) / s.delta, 1.0);

  // Base level: half the budget on the base grid, with headroom so the base
  // term count leaves room for detail terms.
  int k_bar = -1;
  for (int t = min_grid_level(r); t <= 60; ++t) {
    if (2 * pow_capped((Index(1) << t) + 1, d, n) > n) break;
    if (4 * pow_capped((Index(1) << t) + 2 * r - 1, d, n) > 3 * n) break;
    k_bar = t;
  }
  if (k_bar < 0)
    throw BudgetError("schedule: budget " + std::to_string(n) +
                      " too small for a base grid, need 2 (2^m + 1)^d <= n at m = " +
                      std::to_string(min_grid_level(r)));
  s.k_bar = k_bar;

  const long kHugeCap = std::numeric_limits<Index>::max() / 8;
  const long S = std::max<long>(c_stencil_bound(spec, d),
                                pow_capped(2 * spec.mu + 2 * r, d, kHugeCap));
  s.stencil_bound = S;

  const Index base_grid = pow_capped((Index(1) << k_bar) + 1, d, n);
  const Index base_terms = pow_capped((Index(1) << k_bar) + 2 * r - 1, d, n);

  // Largest lambda = 2^-t whose geometric budgets respect, level by level,
  // the translate-set size, and in total both hard caps.
  for (int t = 0; t <= 62; ++t) {
    const double lambda = std::ldexp(1.0, -t);
    const double ln = lambda * static_cast<double>(n);
    if (ln <= 1.0) break;
    const int k_star = static_cast<int>(std::floor(std::log2(ln) / s.epsilon)) + k_bar + 1;
    std::vector<long> budgets;
    budgets.reserve(k_star - k_bar);
    long sum = 0;
    bool ok = true;
    for (int k = k_bar + 1; k <= k_star; ++k) {
      const long nk = static_cast<long>(std::floor(ln * std::exp2(-s.epsilon * (k - k_bar))));
      const Index mk =
          pow_capped((Index(1) << std::min(k, 60)) + 2 * r - 1, d, kHugeCap);
      if (nk > mk) {
        ok = false;
        break;
      }
      budgets.push_back(nk);
      sum += nk;
    }
    if (!ok) continue;
    if (base_terms + sum > n) continue;
    if (sum > (n - base_grid) / S) continue;
    s.lambda = lambda;
    s.k_star = k_star;
    s.budgets = std::move(budgets);
    return s;
  }
  throw BudgetError("schedule: no feasible level budgets for n = " + std::to_string(n) +
                    "; every lambda = 2^-t either overruns the budget or is empty");
}

SoftSelection soft_select_full(const Eigen::ArrayXd& x, Index n) {
  const Index m = x.size();
  if (n < 0 || n > m)
    throw ConfigError("soft selection: keep count must be in [0, " + std::to_string(m) +
                      "], got " + std::to_string(n));
  SoftSelection out;
  if (n < m) {
    std::vector<Index> idx(m);
    std::iota(idx.begin(), idx.end(), Index(0));
    auto cmp = [&x](Index a, Index b) {
      const double va = std::abs(x[a]), vb = std::abs(x[b]);
      if (va != vb) return va > vb;
      return a < b;
    };
    std::nth_element(idx.begin(), idx.begin() + n, idx.end(), cmp);
    out.threshold = std::abs(x[idx[n]]);
    out.kept.assign(idx.begin(), idx.begin() + n);
    std::sort(out.kept.begin(), out.kept.end());
  } else {
    out.threshold = 0.0;
    out.kept.resize(m);
    std::iota(out.kept.begin(), out.kept.end(), Index(0));
  }
  out.values = Eigen::ArrayXd::Zero(m);
  for (Index i : out.kept) out.values[i] = shrink(x[i], out.threshold);
  return out;
}

Eigen::ArrayXd soft_select(const Eigen::ArrayXd& x, Index n) {
  return soft_select_full(x, n).values;
}

RecoveryResult recover_linear(FunctionOracle& oracle, const QuasiInterpolantSpec& spec,
                              long n) {
  const int d = oracle.d();
  if (n < 1) throw ConfigError("recovery: budget must be positive");
  const int k = densest_level(spec.r, d, n);
  if (k < 0)
    throw BudgetError("recovery: budget " + std::to_string(n) +
                      " below the coarsest usable grid, need (2^m + 1)^d <= n at m = " +
                      std::to_string(min_grid_level(spec.r)));
  const long before = oracle.samples();
  const std::size_t mark = oracle.ledger().size();
  RecoveryResult res;
  res.expansion = apply_Q(oracle, spec, k, d);
  res.samples_used = oracle.samples() - before;
  res.sample_points.assign(oracle.ledger().begin() + mark, oracle.ledger().end());
  res.schedule.n = n;
  res.schedule.k_bar = res.schedule.k_star = k;
  res.schedule.linear = true;
  return res;
}

namespace {

// Detail arrays are scanned densely only while the grids stay this small;
// deeper levels are scanned in windows around the surviving indices.
constexpr Index kDenseScanCap = Index(1) << 21;

struct KeptLevel {
  int level = 0;
  double threshold = 0.0;
  std::vector<std::pair<MultiIndex, double>> kept;  // raw scan values, |c| > threshold
};

}  // namespace

RecoveryResult recover_adaptive(FunctionOracle& oracle, const QuasiInterpolantSpec& spec,
                                const BesovParams& bp, long n) {
  if (bp.d != oracle.d())
    throw ConfigError("recovery: params dimension " + std::to_string(bp.d) +
                      " != oracle dimension " + std::to_string(oracle.d()));
  AdaptiveSchedule sched = make_schedule(n, bp, spec);
  if (sched.linear) {
    RecoveryResult res = recover_linear(oracle, spec, n);
    res.schedule = sched;
    return res;
  }

  const int d = bp.d;
  const int r = spec.r;
  const int k_bar = sched.k_bar;

  int k_top = k_bar;
  for (int k = k_bar + 1; k <= sched.k_star; ++k)
    if (sched.budget(k) > 0) k_top = k;

  // ---- Scan: free inspection of the target, nothing enters the ledger ----
  const auto& f = oracle.target();
  auto probe_node = [&](int glevel, const MultiIndex& idx) {
    return f(grid_point(idx, glevel));
  };
  auto probe_grid = [&](int level) {
    GridSamples g;
    g.level = level;
    g.d = d;
    const Lattice box = g.box();
    g.v.resize(box.size());
    box.for_each([&](const MultiIndex& s, Index flat) { g.v[flat] = f(grid_point(s, level)); });
    return g;
  };

  int dense_top = k_bar;
  for (int k = k_bar + 1; k <= k_top; ++k) {
    if (pow_capped((Index(1) << k) + 1, d, kDenseScanCap) > kDenseScanCap) break;
    dense_top = k;
  }

  std::vector<KeptLevel> chosen;
  std::vector<LevelDiagnostics> diags;
  LevelCoefficients a_prev = a_from_samples(spec, probe_grid(k_bar));
  std::vector<MultiIndex> active;
  const Index w = 2 * r + spec.mu + 2;  // window halfwidth around each survivor's children

  for (int k = k_bar + 1; k <= k_top; ++k) {
    const long n_k = sched.budget(k);
    if (n_k <= 0) break;
    const long T = 2 * std::max({n_k, sched.budget(k + 1), long(64)});

    KeptLevel kl;
    kl.level = k;
    LevelDiagnostics dg;
    dg.level = k;
    dg.n_k = n_k;

    if (k <= dense_top) {
      LevelCoefficients a_k = a_from_samples(spec, probe_grid(k));
      LevelCoefficients c = c_coeffs(a_prev, a_k, spec);
      const Index m = c.v.size();
      const auto ranked = top_indices(c.v, std::min<Index>(std::max<Index>(T, n_k + 1), m));
      kl.threshold = m > n_k ? std::abs(c.v[ranked[n_k]]) : 0.0;
      for (Index i = 0; i < std::min<Index>(n_k, m); ++i) {
        const Index flat = ranked[i];
        if (std::abs(c.v[flat]) > kl.threshold)
          kl.kept.emplace_back(c.box.unlinear(flat), c.v[flat]);
      }
      active.clear();
      for (Index i = 0; i < std::min<Index>(T, m); ++i)
        active.push_back(c.box.unlinear(ranked[i]));
      dg.scanned = m;
      dg.threshold = kl.threshold;
      dg.lp_norm = coeff_norm(c, bp.p);
      dg.residual_q = lq_of(c.v.abs().min(kl.threshold), bp.q);
      a_prev = std::move(a_k);
    } else {
      if (active.empty()) {
        // No dense detail level existed; the base coefficients localize the
        // rough set just as well.
        for (Index i : top_indices(a_prev.v, std::min<Index>(T, a_prev.v.size())))
          active.push_back(a_prev.box.unlinear(i));
      }
      const Lattice jbox = jset(r, k, d);
      std::unordered_set<MultiIndex, MultiIndexHash> cand_set;
      MultiIndex t(d);
      for (const MultiIndex& s : active) {
        MultiIndex e(d, -w);
        while (true) {
          bool inside = true;
          for (int a = 0; a < d; ++a) {
            t[a] = 2 * s[a] + e[a];
            if (t[a] < jbox.lo(a) || t[a] > jbox.hi(a)) {
              inside = false;
              break;
            }
          }
          if (inside) cand_set.insert(t);
          int a = d - 1;
          for (; a >= 0; --a) {
            if (++e[a] <= w) break;
            e[a] = -w;
          }
          if (a < 0) break;
        }
      }
      std::vector<std::pair<MultiIndex, double>> scanned;
      scanned.reserve(cand_set.size());
      for (const auto& s : cand_set) {
        const CoeffStencil st = c_stencil(spec, k, s);
        scanned.emplace_back(s, eval_c_stencil(st, probe_node));
      }
      std::sort(scanned.begin(), scanned.end(), [](const auto& a, const auto& b) {
        const double va = std::abs(a.second), vb = std::abs(b.second);
        if (va != vb) return va > vb;
        return a.first < b.first;
      });
      const long m = static_cast<long>(scanned.size());
      kl.threshold = m > n_k ? std::abs(scanned[n_k].second) : 0.0;
      for (long i = 0; i < std::min(n_k, m); ++i)
        if (std::abs(scanned[i].second) > kl.threshold) kl.kept.push_back(scanned[i]);
      active.clear();
      for (long i = 0; i < std::min(T, m); ++i) active.push_back(scanned[i].first);
      Eigen::ArrayXd vals(m);
      for (long i = 0; i < m; ++i) vals[i] = scanned[i].second;
      dg.scanned = m;
      dg.threshold = kl.threshold;
      dg.lp_norm = std::isinf(bp.p) ? (m ? vals.abs().maxCoeff() : 0.0)
                                    : std::pow(vals.abs().pow(bp.p).sum(), 1.0 / bp.p);
      dg.residual_q = lq_of(vals.abs().min(kl.threshold), bp.q);
    }
    std::sort(kl.kept.begin(), kl.kept.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    diags.push_back(dg);
    chosen.push_back(std::move(kl));
  }

  // ---- Definitive pass: every published value from ledgered reads ----
  const long before = oracle.samples();
  const std::size_t mark = oracle.ledger().size();

  const LevelCoefficients base = a_from_samples(spec, read_grid(oracle, k_bar, d));
  RecoveryResult res;
  res.expansion.d = d;
  res.expansion.r = r;
  base.box.for_each([&](const MultiIndex& s, Index flat) {
    res.expansion.terms.push_back({k_bar, s, base.v[flat]});
  });

  auto ledgered_node = [&](int glevel, const MultiIndex& idx) {
    return oracle(grid_point(idx, glevel));
  };
  for (std::size_t li = 0; li < chosen.size(); ++li) {
    const KeptLevel& kl = chosen[li];
    long emitted = 0;
    for (const auto& [s, c_scan] : kl.kept) {
      const CoeffStencil st = c_stencil(spec, kl.level, s);
      const double c_val = eval_c_stencil(st, ledgered_node);
      const double v = shrink(c_val, kl.threshold);
      if (v != 0.0) {
        res.expansion.terms.push_back({kl.level, s, v});
        ++emitted;
      }
    }
    diags[li].kept = emitted;
  }
  res.expansion.sort_canonical();
  res.samples_used = oracle.samples() - before;
  res.sample_points.assign(oracle.ledger().begin() + mark, oracle.ledger().end());
  res.schedule = std::move(sched);
  res.levels = std::move(diags);
  return res;
}

std::vector<std::pair<MultiIndex, double>> kernel_weights(const QuasiInterpolantSpec& spec,
                                                          int level, const MultiIndex& j) {
  const int d = static_cast<int>(j.size());
  if (d < 1 || d > kMaxDim) throw ConfigError("kernel weights: dimension out of range");
  if (level < min_grid_level(spec.r))
    throw ConfigError("kernel weights: level below the coarsest grid the mask supports");
  const Index N = Index(1) << level;
  for (int a = 0; a < d; ++a)
    if (j[a] < 0 || j[a] > N)
      throw ConfigError("kernel weights: grid index outside {0..2^level}");

  const Index lo = jset_lo(spec.r);
  const Index hi = jset_hi(spec.r, level);
  std::vector<std::vector<std::pair<Index, double>>> ax(d);
  for (int a = 0; a < d; ++a) {
    std::set<Index> cand;
    for (Index s = std::max(lo, j[a] - spec.mu); s <= std::min(hi, j[a] + spec.mu); ++s)
      cand.insert(s);
    // Coefficients whose stencil folds through an end of the grid can touch
    // far-away nodes; both folding zones are candidates.
    for (Index s = lo; s <= std::min(hi, Index(spec.mu) - 1); ++s) cand.insert(s);
    for (Index s = std::max(lo, N - spec.mu + 1); s <= hi; ++s) cand.insert(s);
    for (Index s : cand) {
      const LineStencil st = a_stencil_1d(spec, level, s);
      if (j[a] < st.lo || j[a] > st.hi()) continue;
      const double wgt = st.w[j[a] - st.lo];
      if (wgt != 0.0) ax[a].emplace_back(s, wgt);
    }
  }

  std::vector<std::pair<MultiIndex, double>> out;
  MultiIndex s(d);
  std::vector<std::size_t> pick(d, 0);
  for (int a = 0; a < d; ++a)
    if (ax[a].empty()) return out;
  while (true) {
    double wgt = 1.0;
    for (int a = 0; a < d; ++a) {
      s[a] = ax[a][pick[a]].first;
      wgt *= ax[a][pick[a]].second;
    }
    if (wgt != 0.0) out.emplace_back(s, wgt);
    int a = d - 1;
    for (; a >= 0; --a) {
      if (++pick[a] < ax[a].size()) break;
      pick[a] = 0;
    }
    if (a < 0) break;
  }
  return out;
}

}  // namespace bsrec
