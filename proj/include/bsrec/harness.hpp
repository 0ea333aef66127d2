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
#include <vector>

#include "bsrec/adaptive.hpp"
#include "bsrec/besov.hpp"
#include "bsrec/expansion.hpp"
#include "bsrec/oracle.hpp"
#include "bsrec/quasi.hpp"

namespace bsrec {

// One benchmark run: a target, a mask, smoothness parameters, and a ladder
// of sampling budgets. Exactly one of target / grid_file names the function.
struct ExperimentConfig {
  std::string target;             // closed-form name, possibly with arguments
  std::string grid_file;          // alternative: file of samples on a dyadic grid
  std::string spec_name = "cubic";
  std::optional<QuasiInterpolantSpec> custom_spec;  // overrides spec_name if set
  BesovParams bp;
  std::vector<long> ladder;       // strictly increasing budgets
  std::vector<double> q_report;   // extra error exponents beyond bp.q
  int resolution = 0;             // quadrature points per axis; 0 = default
  std::uint64_t seed = 0;
  std::string out_path;           // report basename; empty = no files written
  bool quadrature_check = false;  // re-estimate errors at doubled resolution

  QuasiInterpolantSpec spec() const;
  void validate() const;
};

// Result of one budget. Negative sample counts / errors mean the algorithm
// did not run for this row (skipped or infeasible; see warning).
struct LadderRow {
  long n = 0;
  long samples_linear = -1;
  double err_linear = -1.0;
  long samples_adaptive = -1;
  double err_adaptive = -1.0;
  std::vector<double> extra_linear;    // aligned with config q_report
  std::vector<double> extra_adaptive;
  bool quadrature_flag = false;  // doubled-resolution estimate moved >= 5%
  std::string warning;
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // root mean square in log2 space
  int points = 0;
  int excluded = 0;
};

struct RateReport {
  ExperimentConfig config;
  std::vector<LadderRow> rows;
  // Fit over the tail of the ladder (at least 4 points when available); the
  // full-ladder fit is kept alongside for contrast.
  std::optional<RateFit> fit_linear;
  std::optional<RateFit> fit_adaptive;
  std::optional<RateFit> fit_linear_full;
  std::optional<RateFit> fit_adaptive_full;
  double theory_linear = 0.0;   // -alpha/d + (1/p - 1/q)_+
  double theory_adaptive = 0.0; // -alpha/d
  std::vector<std::string> warnings;
};

// Midpoint-rule estimate of ||f - g||_q over the unit cube (max over the
// grid for q = infinity). resolution points per axis; 0 = default.
double lq_error(const FunctionOracle::Target& f, const SparseExpansion& g, double q,
                int resolution = 0);

// Same, with the error measured only on the nodes of a sample grid. For
// targets known nowhere else.
double lq_error_on_grid(const GridData& data, const SparseExpansion& g, double q);

// Ordinary least squares of log2(error) against log2(n). Pairs with error
// <= 0 (or non-finite) are dropped and counted in `excluded`; fewer than two
// usable pairs is a ConfigError.
RateFit fit_rate(const std::vector<std::pair<double, double>>& pairs);

// Runs the full ladder: per budget a fresh capped oracle, linear recovery,
// and (when p < q) adaptive recovery; errors by quadrature against the raw
// target; sample counts re-read from the ledger rather than trusted from the
// result. Infeasible budgets become warning rows. Does not write files.
RateReport run_ladder(const ExperimentConfig& cfg);

}  // namespace bsrec
