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

#include <utility>
#include <vector>

#include "bsrec/multilevel.hpp"
#include "bsrec/oracle.hpp"
#include "bsrec/quasi.hpp"

namespace bsrec {

// Smoothness-class parameters steering the budget schedule. p, q, theta may
// be infinity.
struct BesovParams {
  double alpha = 1.0;  // smoothness order
  double p = 2.0;      // integrability of the class
  double theta = 2.0;  // fine index
  double q = 2.0;      // norm in which the error is measured
  int d = 1;

  // d(1/p - 1/q), clamped at 0; positive exactly when p < q.
  double delta() const;

  // Exponent ranges plus the embedding condition that makes point samples
  // meaningful: alpha > d/p, or alpha = d/p with theta <= min(1, p) and
  // p, q finite. Throws ConfigError.
  void validate() const;
};

// Per-level keep counts n(k) for k in (k_bar, k_star], derived from the
// geometric-decay rule n(k) = floor(lambda * n * 2^{-epsilon (k - k_bar)}).
// Hard guarantees by construction:
//   terms:   (2^k_bar + 2r - 1)^d + sum n(k) <= n
//   samples: (2^k_bar + 1)^d + stencil_bound * sum n(k) <= n
struct AdaptiveSchedule {
  long n = 0;
  int k_bar = 0;
  int k_star = 0;
  double epsilon = 0.0;
  double lambda = 0.0;
  double delta = 0.0;
  bool linear = false;        // p >= q: a single dense level, no selection
  long stencil_bound = 0;     // max distinct samples one detail coefficient reads
  std::vector<long> budgets;  // n(k), k = k_bar + 1 .. k_star

  long budget(int k) const {
    const int i = k - k_bar - 1;
    if (i < 0 || i >= static_cast<int>(budgets.size())) return 0;
    return budgets[i];
  }
  long sum_budgets() const {
    long s = 0;
    for (long b : budgets) s += b;
    return s;
  }
};

AdaptiveSchedule make_schedule(long n, const BesovParams& bp,
                               const QuasiInterpolantSpec& spec);

// Keep the n largest-magnitude entries, each shrunk toward zero by the
// (n+1)-th largest magnitude (0 when nothing is dropped). Continuous in x.
// Ties in magnitude are broken by smaller index.
struct SoftSelection {
  Eigen::ArrayXd values;     // same length as the input
  std::vector<Index> kept;   // positions of the n largest, ascending
  double threshold = 0.0;    // the (n+1)-th largest magnitude
};

SoftSelection soft_select_full(const Eigen::ArrayXd& x, Index n);
Eigen::ArrayXd soft_select(const Eigen::ArrayXd& x, Index n);

// What one selection level did, for reports and for checking the residual
// bound ||c - selected||_q <= n(k)^{1/q - 1/p} ||c||_p on the scanned set.
struct LevelDiagnostics {
  int level = 0;
  long n_k = 0;           // scheduled keep count
  long kept = 0;          // terms actually emitted (nonzero after shrinkage)
  long scanned = 0;       // detail coefficients examined at this level
  double threshold = 0.0;
  double lp_norm = 0.0;   // plain l_p norm of the scanned coefficients
  double residual_q = 0.0;  // l_q norm of (scanned - selected)
};

struct RecoveryResult {
  SparseExpansion expansion;
  long samples_used = 0;            // distinct points this run added to the ledger
  std::vector<Point> sample_points;
  AdaptiveSchedule schedule;
  std::vector<LevelDiagnostics> levels;
};

// Dense quasi-interpolant at the finest level whose grid and term count both
// fit in n. Samples exactly (2^k + 1)^d points.
RecoveryResult recover_linear(FunctionOracle& oracle, const QuasiInterpolantSpec& spec,
                              long n);

// Two passes. First the target is scanned (free inspection, nothing enters
// the ledger) to pick per-level keep sets and thresholds: dense detail
// arrays while the grids stay small, then a window around the surviving
// indices as levels deepen. Second, every published value is recomputed
// from ledgered reads: the base grid plus the stencil points of each kept
// coefficient. The ledger growth therefore respects the schedule's sample
// guarantee, whatever the scan did.
RecoveryResult recover_adaptive(FunctionOracle& oracle, const QuasiInterpolantSpec& spec,
                                const BesovParams& bp, long n);

// Weights gamma such that Q_level(f) = sum_j f(j 2^-level) psi_j with
// psi_j = sum_s gamma_j(s) M_{level,s}. At most (2 mu + 2r)^d entries.
std::vector<std::pair<MultiIndex, double>> kernel_weights(const QuasiInterpolantSpec& spec,
                                                          int level, const MultiIndex& j);

}  // namespace bsrec
