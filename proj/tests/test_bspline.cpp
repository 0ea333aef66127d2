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

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "bsrec/bspline.hpp"
#include "bsrec/errors.hpp"

using namespace bsrec;

namespace {

// Pascal's triangle, exact for the small orders used here.
std::int64_t binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t v = 1;
  for (int i = 0; i < k; ++i) v = v * (n - i) / (i + 1);
  return v;
}

std::int64_t factorial(int n) {
  std::int64_t v = 1;
  for (int i = 2; i <= n; ++i) v *= i;
  return v;
}

// Independent oracle: the centered cardinal spline of order n = 2r written as
// an alternating sum of truncated powers,
//   M(x) = (1/(n-1)!) sum_k (-1)^k binom(n,k) (x + n/2 - k)_+^{n-1}.
// No recursion shared with the library implementation.
double truncated_power_spline(int r, double x) {
  const int n = 2 * r;
  double acc = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double t = x + 0.5 * n - k;
    if (t <= 0.0) continue;
    double p = 1.0;
    for (int i = 0; i < n - 1; ++i) p *= t;
    acc += (k % 2 == 0 ? 1.0 : -1.0) * static_cast<double>(binom(n, k)) * p;
  }
  return acc / static_cast<double>(factorial(n - 1));
}

}  // namespace

TEST_CASE("cardinal spline: frozen point values") {
  // r = 1, the hat.
  CHECK(eval_cardinal(1, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(eval_cardinal(1, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(eval_cardinal(1, -0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(eval_cardinal(1, 1.0) == 0.0);

  // r = 2, piecewise cubic: (3|x|^3 - 6x^2 + 4)/6 inside, (2-|x|)^3/6 outside.
  CHECK(eval_cardinal(2, 0.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(eval_cardinal(2, 1.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(eval_cardinal(2, -1.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(eval_cardinal(2, 0.5) == doctest::Approx(23.0 / 48.0).epsilon(1e-15));
  CHECK(eval_cardinal(2, 1.5) == doctest::Approx(1.0 / 48.0).epsilon(1e-15));
  CHECK(eval_cardinal(2, 2.0) == 0.0);

  // r = 3: central value of the order-6 spline is 11/20.
  CHECK(eval_cardinal(3, 0.0) == doctest::Approx(11.0 / 20.0).epsilon(1e-14));
}

TEST_CASE("cardinal spline: matches truncated-power form") {
  for (int r = 1; r <= 4; ++r) {
    const double half = r + 0.5;
    double worst = 0.0;
    for (int i = 0; i <= 2000; ++i) {
      const double x = -half + 2.0 * half * i / 2000.0;
      worst = std::max(worst, std::abs(eval_cardinal(r, x) - truncated_power_spline(r, x)));
    }
    CAPTURE(r);
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("cardinal spline: symmetry, support, positivity") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 8.5);
  for (int r = 1; r <= 8; ++r) {
    for (int t = 0; t < 200; ++t) {
      const double x = u(rng);
      CHECK(eval_cardinal(r, x) == eval_cardinal(r, -x));
      if (x >= r) {
        CHECK(eval_cardinal(r, x) == 0.0);
      } else if (x <= r - 1e-3) {
        CHECK(eval_cardinal(r, x) > 0.0);
      }
    }
  }
}

TEST_CASE("cardinal spline: partition of unity") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1.0, 3.0);
  for (int r : {1, 2, 3, 8}) {
    for (int t = 0; t < 300; ++t) {
      const double x = u(rng);
      double sum = 0.0;
      for (Index s = static_cast<Index>(std::floor(x)) - r;
           s <= static_cast<Index>(std::ceil(x)) + r; ++s)
        sum += eval_cardinal(r, x - static_cast<double>(s));
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("refinement mask: exact binomial integers over 2^{2r-1}") {
  for (int r = 1; r <= 8; ++r) {
    const RefinementMask m = refinement_mask(r);
    REQUIRE(m.taps() == 2 * r + 1);
    CHECK(m.den == (std::int64_t(1) << (2 * r - 1)));
    std::int64_t sum = 0;
    for (int j = 0; j <= 2 * r; ++j) {
      CHECK(m.num[j] == binom(2 * r, j));
      sum += m.num[j];
    }
    // Weights sum to 2: both halves of the fine grid reproduce the coarse one.
    CHECK(sum == 2 * m.den);
    const Eigen::ArrayXd w = m.weights();
    REQUIRE(w.size() == m.taps());
    for (int j = 0; j < m.taps(); ++j) CHECK(w[j] == m.weight(j));
  }
}

TEST_CASE("refinement mask: two-scale identity") {
  for (int r : {1, 2, 3}) {
    const RefinementMask m = refinement_mask(r);
    const double half = r + 0.5;
    double worst = 0.0;
    for (int i = 0; i <= 4000; ++i) {
      const double x = -half + 2.0 * half * i / 4000.0;
      double rhs = 0.0;
      for (int j = 0; j <= 2 * r; ++j)
        rhs += m.weight(j) * eval_cardinal(r, 2.0 * x - j + r);
      worst = std::max(worst, std::abs(eval_cardinal(r, x) - rhs));
    }
    CAPTURE(r);
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("translate evaluation: tensor product of shifted dilates") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int r = 1 + static_cast<int>(rng() % 3);
    const int k = static_cast<int>(rng() % 5);

    Point x1(1);
    x1[0] = u(rng);
    DyadicIndex one{k, {static_cast<Index>(rng() % ((Index(1) << k) + 1))}};
    const double want1 = eval_cardinal(r, std::ldexp(x1[0], k) - static_cast<double>(one.s[0]));
    CHECK(eval_translate(r, one, x1) == doctest::Approx(want1).epsilon(1e-15));

    Point x2(2);
    x2[0] = u(rng);
    x2[1] = u(rng);
    DyadicIndex two{k,
                    {static_cast<Index>(rng() % ((Index(1) << k) + 1)),
                     static_cast<Index>(rng() % ((Index(1) << k) + 1))}};
    const double want2 =
        eval_cardinal(r, std::ldexp(x2[0], k) - static_cast<double>(two.s[0])) *
        eval_cardinal(r, std::ldexp(x2[1], k) - static_cast<double>(two.s[1]));
    CHECK(eval_translate(r, two, x2) == doctest::Approx(want2).epsilon(1e-14));
  }
}

TEST_CASE("index sets: bounds, counts, active ranges") {
  CHECK(jset_lo(2) == -1);
  CHECK(jset_hi(2, 3) == 9);
  const Lattice j1 = jset(2, 3, 1);
  CHECK(j1.size() == 11);  // 2^3 + 2*2 - 1
  const Lattice j2 = jset(2, 3, 2);
  CHECK(j2.size() == 121);

  Index lo = 0, hi = 0;
  support_range(2, 3, 0.3, lo, hi);
  CHECK(lo == 1);
  CHECK(hi == 4);
  support_range(2, 3, 0.0, lo, hi);
  CHECK(lo == -1);  // clipped at the index-set edge
  CHECK(hi == 1);
  support_range(2, 3, 1.0, lo, hi);
  CHECK(hi == 9);

  // Translates outside the reported range vanish at x; inside they do not.
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int r = 1 + static_cast<int>(rng() % 3);
    const int k = 1 + static_cast<int>(rng() % 5);
    const double x = u(rng);
    support_range(r, k, x, lo, hi);
    for (Index s = jset_lo(r); s <= jset_hi(r, k); ++s) {
      const double v = eval_cardinal(r, std::ldexp(x, k) - static_cast<double>(s));
      if (s < lo || s > hi) {
        CHECK(v == 0.0);
      }
    }
    // A generic interior x keeps every translate in the range active.
    const double mid = eval_cardinal(r, std::ldexp(x, k) - static_cast<double>((lo + hi) / 2));
    CHECK(mid >= 0.0);
  }
}

TEST_CASE("order validation") {
  CHECK_NOTHROW(BSplineOrder(1));
  CHECK_NOTHROW(BSplineOrder(8));
  CHECK_THROWS_AS(BSplineOrder(0), ConfigError);
  CHECK_THROWS_AS(BSplineOrder(9), ConfigError);
  CHECK_THROWS_AS(BSplineOrder(-3), ConfigError);
}
