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

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bsrec/adaptive.hpp"
#include "bsrec/multilevel.hpp"
#include "bsrec/oracle.hpp"

namespace bsrec {

// How to measure the l-th modulus of smoothness: which step sizes, which
// integrability, how many random directions besides the axis ones.
struct SmoothnessProbe {
  int l = 2;
  std::vector<double> t_grid;  // strictly decreasing, in (0, 1]
  double p = 2.0;
  int h_samples = 6;

  // t = 2^-k for k = k_min..k_max.
  static SmoothnessProbe dyadic(int l, double p, int k_min, int k_max, int h_samples = 6);
};

// (t, estimate of sup_{|h| < t} ||difference of order l||_p) for each t of
// the probe, made monotone in t by a running max. Directions are the 2d
// signed axes plus seeded random unit vectors; the norm is a midpoint-rule
// quadrature over the points whose whole difference stencil stays in the
// cube. Measurement only: nothing enters the oracle ledger.
std::vector<std::pair<double, double>> modulus(FunctionOracle& oracle,
                                               const SmoothnessProbe& probe,
                                               std::uint64_t seed = 0, int resolution = 0);

// A partial-series estimate plus its final term, so a diverging series is
// visible to the caller instead of silently truncated.
struct SeminormEstimate {
  double value = 0.0;
  double last_term = 0.0;
};

// Modulus-based quasi-norm: theta-sum over k = 0..k_max of 2^{alpha k}
// omega_l(f, 2^-k)_p, plus the L_p norm of f itself.
SeminormEstimate besov_seminorm_B1(FunctionOracle& oracle, const BesovParams& bp, int l,
                                   int k_max = 10, std::uint64_t seed = 0,
                                   int resolution = 0);

// Coefficient-based quasi-norm: theta-sum over the decomposition's detail
// levels of 2^{(alpha - d/p) k} ||c_k||_p (plain l_p over the level's
// coefficients). Base coefficients do not enter; a reproduced target scores 0.
SeminormEstimate besov_discrete_B3(const Decomposition& dec, const BesovParams& bp);

// A target with a known closed form and the smoothness parameters it is
// meant to stress. The nominal alpha is a measured quantity (checked by the
// seminorm estimates), not an assumption.
struct CorpusEntry {
  std::string name;
  FunctionOracle::Target target;
  BesovParams nominal;

  FunctionOracle make_oracle(std::optional<long> budget_cap = std::nullopt) const;
};

// Fixed test set: polynomials inside the reproduction degree, analytic
// oscillation, point cusps |x - xi|^beta of several strengths, and a
// piecewise-smooth kink. d in {1, 2}.
std::vector<CorpusEntry> corpus(int d);

}  // namespace bsrec
