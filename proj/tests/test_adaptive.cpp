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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <vector>

#include "bsrec/adaptive.hpp"
#include "bsrec/besov.hpp"
#include "bsrec/errors.hpp"
#include "bsrec/expansion.hpp"
#include "bsrec/multilevel.hpp"
#include "bsrec/oracle.hpp"
#include "bsrec/quasi.hpp"

using namespace bsrec;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

Eigen::ArrayXd vec(std::initializer_list<double> xs) {
  Eigen::ArrayXd v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

double lp_norm(const Eigen::ArrayXd& x, double p) {
  if (std::isinf(p)) return x.abs().maxCoeff();
  return std::pow(x.abs().pow(p).sum(), 1.0 / p);
}

}  // namespace

TEST_CASE("soft selection: frozen small vectors") {
  const SoftSelection s = soft_select_full(vec({3.0, -2.0, 1.0}), 1);
  CHECK(s.threshold == 2.0);
  REQUIRE(s.kept.size() == 1);
  CHECK(s.kept[0] == 0);
  CHECK(s.values[0] == 1.0);
  CHECK(s.values[1] == 0.0);
  CHECK(s.values[2] == 0.0);

  // A tie at the cut: the earlier index wins the slot, and the shared
  // magnitude becomes the threshold, so the survivor shrinks to zero.
  const SoftSelection t = soft_select_full(vec({2.0, -2.0, 1.0}), 1);
  CHECK(t.threshold == 2.0);
  REQUIRE(t.kept.size() == 1);
  CHECK(t.kept[0] == 0);
  CHECK(t.values.abs().maxCoeff() == 0.0);

  // Keeping everything shrinks nothing.
  const SoftSelection all = soft_select_full(vec({3.0, -2.0, 1.0}), 3);
  CHECK(all.threshold == 0.0);
  CHECK(all.values[0] == 3.0);
  CHECK(all.values[1] == -2.0);
  CHECK(all.values[2] == 1.0);

  // Keeping nothing zeroes everything.
  const SoftSelection none = soft_select_full(vec({3.0, -2.0, 1.0}), 0);
  CHECK(none.kept.empty());
  CHECK(none.values.abs().maxCoeff() == 0.0);

  // Negative signs survive shrinkage.
  const SoftSelection neg = soft_select_full(vec({-3.0, 1.0}), 1);
  CHECK(neg.values[0] == -2.0);

  CHECK(soft_select(vec({3.0, -2.0, 1.0}), 1)[0] == 1.0);
}

TEST_CASE("soft selection: residual bound with constant one") {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const Index m = 2 + static_cast<Index>(rng() % 40);
    Eigen::ArrayXd x(m);
    for (Index i = 0; i < m; ++i) x[i] = g(rng);
    for (double p : {1.0, 2.0}) {
      for (double q : {2.0, kInf}) {
        if (p >= q) continue;
        const Index n = 1 + static_cast<Index>(rng() % m);
        const Eigen::ArrayXd res = x - soft_select(x, n);
        const double bound =
            std::pow(static_cast<double>(n), (std::isinf(q) ? 0.0 : 1.0 / q) - 1.0 / p) *
            lp_norm(x, p);
        CHECK(lp_norm(res, q) <= bound * (1.0 + 1e-12));
      }
    }
  }
}

TEST_CASE("soft selection: pointwise continuity in the input") {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const Index m = 2 + static_cast<Index>(rng() % 12);
    Eigen::ArrayXd x(m);
    for (Index i = 0; i < m; ++i) x[i] = g(rng);
    // Manufacture ties half the time so the kept set flips under perturbation.
    if (trial % 2 == 0 && m >= 4) {
      x[1] = x[0];
      x[3] = -x[2];
    }
    const double h = std::pow(10.0, -1.0 - static_cast<double>(rng() % 5));
    Eigen::ArrayXd eta(m);
    for (Index i = 0; i < m; ++i) eta[i] = h * u(rng);
    const Index n = static_cast<Index>(rng() % (m + 1));
    const Eigen::ArrayXd a = soft_select(x, n);
    const Eigen::ArrayXd b = soft_select(x + eta, n);
    const double hinf = eta.abs().maxCoeff();
    CHECK((a - b).abs().maxCoeff() <= 2.0 * hinf * (1.0 + 1e-9) + 1e-15);
  }
}

TEST_CASE("soft selection scales exactly under powers of two") {
  std::mt19937_64 rng(43);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::ArrayXd x(257);
  for (Index i = 0; i < x.size(); ++i) x[i] = g(rng);
  const SoftSelection a = soft_select_full(x, 31);
  const SoftSelection b = soft_select_full(Eigen::ArrayXd(4.0 * x), 31);
  CHECK(b.threshold == 4.0 * a.threshold);
  REQUIRE(b.kept == a.kept);
  for (Index i = 0; i < x.size(); ++i) CHECK(b.values[i] == 4.0 * a.values[i]);
}

TEST_CASE("class parameters: validation and the trade-off exponent") {
  BesovParams bp;
  bp.alpha = 1.6;
  bp.p = 1.0;
  bp.theta = kInf;
  bp.q = kInf;
  bp.d = 1;
  CHECK_NOTHROW(bp.validate());
  CHECK(bp.delta() == doctest::Approx(1.0));

  BesovParams b2{2.6, 2.0, kInf, kInf, 2};
  CHECK(b2.delta() == doctest::Approx(1.0));
  BesovParams b3{1.0, 1.0, 2.0, 2.0, 2};
  CHECK(b3.delta() == doctest::Approx(1.0));
  BesovParams b4{1.0, 2.0, 2.0, 1.0, 1};
  CHECK(b4.delta() == 0.0);  // error norm weaker than the class norm

  BesovParams bad = bp;
  bad.alpha = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = bp;
  bad.p = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = bp;
  bad.q = -1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = bp;
  bad.theta = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = bp;
  bad.d = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("schedule: structure and budget arithmetic") {
  const QuasiInterpolantSpec cu = QuasiInterpolantSpec::cubic();
  BesovParams bp{1.6, 1.0, kInf, kInf, 1};
  for (long n : {64L, 300L, 2048L, 100000L}) {
    const AdaptiveSchedule s = make_schedule(n, bp, cu);
    CAPTURE(n);
    CHECK_FALSE(s.linear);
    CHECK(s.n == n);
    CHECK(s.delta == doctest::Approx(1.0));
    CHECK(s.epsilon > 0.0);
    CHECK(s.epsilon <= 1.0);
    CHECK(s.k_star > s.k_bar);
    CHECK(s.k_bar >= min_grid_level(cu.r));

    // Budgets fall off monotonically level by level.
    long prev = std::numeric_limits<long>::max();
    long sum = 0;
    for (std::size_t i = 0; i < s.budgets.size(); ++i) {
      CHECK(s.budgets[i] >= 0);
      CHECK(s.budgets[i] <= prev);
      prev = s.budgets[i];
      sum += s.budgets[i];
    }
    CHECK(sum == s.sum_budgets());
    CHECK(s.budget(s.k_bar) == 0);       // base level holds no selection budget
    CHECK(s.budget(s.k_star + 1) == 0);  // past the last scheduled level

    // Term count: base nodes plus one term per kept coefficient.
    const long base_terms = (Index(1) << s.k_bar) + 2 * cu.r - 1;
    CHECK(base_terms + sum <= n);
    // Sample count: base grid plus at most stencil_bound reads per kept term.
    const long base_grid = (Index(1) << s.k_bar) + 1;
    CHECK(base_grid + s.stencil_bound * sum <= n);
    CHECK(s.stencil_bound >= c_stencil_bound(cu, 1));
  }
}

TEST_CASE("schedule: the dense marker for a no-gain norm pair") {
  const QuasiInterpolantSpec cu = QuasiInterpolantSpec::cubic();
  BesovParams bp{4.0, kInf, kInf, kInf, 1};  // p >= q, selection buys nothing
  const AdaptiveSchedule s = make_schedule(100, bp, cu);
  CHECK(s.linear);
  CHECK(s.k_bar == s.k_star);
  CHECK(s.k_star == 6);  // densest grid with (2^k + 1) <= 100
  CHECK(s.sum_budgets() == 0);

  // The marker level must also fit its term count (2^k + 2r - 1)^d.
  BesovParams bp2{4.0, 2.0, 2.0, 2.0, 2};
  const AdaptiveSchedule s2 = make_schedule(290, bp2, cu);
  CHECK(s2.linear);
  CHECK(s2.k_star == 3);  // (2^4 + 3)^2 = 361 > 290, so level 4 is out
  const AdaptiveSchedule s3 = make_schedule(361, bp2, cu);
  CHECK(s3.k_star == 4);
}

TEST_CASE("schedule: rejects out-of-scope parameters, starves on tiny budgets") {
  const QuasiInterpolantSpec cu = QuasiInterpolantSpec::cubic();
  BesovParams bp{1.6, 1.0, kInf, kInf, 1};

  CHECK_THROWS_AS(make_schedule(0, bp, cu), ConfigError);
  CHECK_THROWS_AS(make_schedule(3, bp, cu), BudgetError);  // below the coarsest grid

  BesovParams sat = bp;
  sat.alpha = 4.0;  // at the saturation order for r = 2
  CHECK_THROWS_AS(make_schedule(1000, sat, cu), ConfigError);

  BesovParams flat = bp;
  flat.alpha = 0.9;  // not above d(1/p - 1/q) = 1
  CHECK_THROWS_AS(make_schedule(1000, flat, cu), ConfigError);

  // The same saturation alpha is fine when the norm pair wants no selection.
  BesovParams lin{4.0, kInf, kInf, kInf, 1};
  CHECK_NOTHROW(make_schedule(1000, lin, cu));
}

TEST_CASE("sampling kernels: identity mask reads one node") {
  const QuasiInterpolantSpec pl = QuasiInterpolantSpec::piecewise_linear();
  const auto w = kernel_weights(pl, 3, {5});
  REQUIRE(w.size() == 1);
  CHECK(w[0].first == MultiIndex{5});
  CHECK(w[0].second == 1.0);
}

TEST_CASE("sampling kernels: reassemble the dense coefficient pass") {
  const QuasiInterpolantSpec cu = QuasiInterpolantSpec::cubic();
  for (int d = 1; d <= 2; ++d) {
    const int k = d == 1 ? 4 : 3;
    auto f = [&](const Point& x) {
      double acc = 1.0;
      for (int a = 0; a < d; ++a) acc *= std::sin(2.0 * x[a] + 0.4) + 1.3;
      return acc;
    };
    FunctionOracle o(f, d);
    const LevelCoefficients dense = a_coeffs(o, cu, k, d);

    std::map<MultiIndex, double> assembled;
    const Lattice grid = Lattice::cube(0, Index(1) << k, d);
    grid.for_each([&](const MultiIndex& j, Index) {
      const double fj = f(grid_point(j, k));
      for (const auto& [s, w] : kernel_weights(cu, k, j)) assembled[s] += fj * w;
    });

    dense.box.for_each([&](const MultiIndex& s, Index flat) {
      const auto it = assembled.find(s);
      const double got = it == assembled.end() ? 0.0 : it->second;
      CHECK(got == doctest::Approx(dense.v[flat]).epsilon(1e-11));
    });
  }
}

TEST_CASE("sampling kernels: interior translation invariance and reach") {
  const QuasiInterpolantSpec cu = QuasiInterpolantSpec::cubic();
  const int k = 5;
  const auto w8 = kernel_weights(cu, k, {8});
  const auto w9 = kernel_weights(cu, k, {9});
  REQUIRE(w8.size() == w9.size());
  CHECK(w8.size() <= 6);  // (2 mu + 2 r) in one dimension
  std::map<Index, double> m8, m9;
  for (const auto& [s, w] : w8) m8[s[0] - 8] = w;
  for (const auto& [s, w] : w9) m9[s[0] - 9] = w;
  CHECK(m8 == m9);

  const auto w2 = kernel_weights(cu, 3, {3, 4});
  CHECK(w2.size() <= 36);
}

TEST_CASE("dense recovery: frozen level choice and near-optimal error") {
  FunctionOracle o = from_closed_form("sin", 1);
  const RecoveryResult res = recover_linear(o, QuasiInterpolantSpec::cubic(), 100);
  CHECK(res.schedule.linear);
  CHECK(res.schedule.k_star == 6);
  CHECK(res.samples_used == 65);
  CHECK(res.samples_used == o.samples());
  CHECK(res.sample_points.size() == 65);
  CHECK(res.expansion.terms.size() == 67);

  const ExpansionEvaluator ev(res.expansion);
  double worst = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    Point x(1);
    x[0] = i / 1000.0;
    worst = std::max(worst, std::abs(ev(x) - o.target()(x)));
  }
  CHECK(worst <= 1e-4);
}

TEST_CASE("adaptive recovery: ledger honesty and level structure") {
  const QuasiInterpolantSpec cu = QuasiInterpolantSpec::cubic();
  BesovParams bp{1.6, 1.0, kInf, kInf, 1};
  for (long n : {150L, 500L, 2000L}) {
    FunctionOracle o = from_closed_form("cusp(beta=0.6)", 1);
    const RecoveryResult res = recover_adaptive(o, cu, bp, n);
    CAPTURE(n);
    CHECK(res.samples_used == o.samples());
    CHECK(res.samples_used <= n);
    CHECK(static_cast<long>(res.expansion.terms.size()) <= n);
    CHECK(res.sample_points.size() == static_cast<std::size_t>(res.samples_used));

    for (const auto& t : res.expansion.terms) {
      CHECK(t.level >= res.schedule.k_bar);
      CHECK(t.level <= res.schedule.k_star);
    }
    // Per-level emissions respect the schedule.
    std::map<int, long> emitted;
    for (const auto& t : res.expansion.terms)
      if (t.level > res.schedule.k_bar) ++emitted[t.level];
    for (const auto& [k, cnt] : emitted) CHECK(cnt <= res.schedule.budget(k));

    // Diagnostics cover every level holding a positive selection budget and
    // respect the residual bound on the scanned candidate set.
    std::size_t positive = 0;
    for (long b : res.schedule.budgets)
      if (b > 0) ++positive;
    CHECK(res.levels.size() == positive);
    for (const auto& lv : res.levels) {
      CHECK(lv.kept <= lv.n_k);
      CHECK(lv.kept <= lv.scanned);
      if (lv.n_k > 0) {
        const double bound = std::pow(static_cast<double>(lv.n_k), -1.0 / bp.p) * lv.lp_norm;
        CHECK(lv.residual_q <= bound * (1.0 + 1e-9));
      }
    }
  }
}

TEST_CASE("adaptive recovery: exact scaling in the target") {
  const QuasiInterpolantSpec cu = QuasiInterpolantSpec::cubic();
  BesovParams bp{1.6, 1.0, kInf, kInf, 1};
  auto base = closed_form_target("cusp(beta=0.6)", 1);

  FunctionOracle o1(base, 1);
  const RecoveryResult r1 = recover_adaptive(o1, cu, bp, 400);
  FunctionOracle o4([&base](const Point& x) { return 4.0 * base(x); }, 1);
  const RecoveryResult r4 = recover_adaptive(o4, cu, bp, 400);

  REQUIRE(r1.expansion.terms.size() == r4.expansion.terms.size());
  for (std::size_t i = 0; i < r1.expansion.terms.size(); ++i) {
    CHECK(r1.expansion.terms[i].level == r4.expansion.terms[i].level);
    CHECK(r1.expansion.terms[i].s == r4.expansion.terms[i].s);
    CHECK(4.0 * r1.expansion.terms[i].c == r4.expansion.terms[i].c);
  }
  CHECK(r1.samples_used == r4.samples_used);
}

TEST_CASE("adaptive recovery: capped oracles never overdraw") {
  const QuasiInterpolantSpec cu = QuasiInterpolantSpec::cubic();
  for (long n : {128L, 700L}) {
    FunctionOracle o(closed_form_target("kink", 1), 1, n);
    BesovParams bp{2.0, 1.0, kInf, kInf, 1};
    CHECK_NOTHROW(recover_adaptive(o, cu, bp, n));
    CHECK(o.samples() <= n);
  }
  FunctionOracle o2(closed_form_target("radial_cusp(beta=0.6)", 2), 2, 1200);
  BesovParams bp2{2.6, 1.0, kInf, kInf, 2};
  CHECK_NOTHROW(recover_adaptive(o2, cu, bp2, 1200));
  CHECK(o2.samples() <= 1200);
}
