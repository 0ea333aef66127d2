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

#include <iosfwd>
#include <string>

#include "bsrec/adaptive.hpp"
#include "bsrec/expansion.hpp"
#include "bsrec/harness.hpp"
#include "bsrec/oracle.hpp"
#include "bsrec/quasi.hpp"

namespace bsrec {

// Expansion CSV: a `# d=<d> r=<r>` header comment, a column-name line, then
// one row `k, s_1..s_d, coefficient` per term. Round-trips exactly (values
// are written with max_digits10).
void write_expansion_csv(const SparseExpansion& e, std::ostream& os);
SparseExpansion read_expansion_csv(std::istream& is);

// Grid samples, either as the plain text format (`d m` header line, then
// (2^m + 1)^d values in row-major order) or, for files ending in .csv, one
// `x_1..x_d, value` row per node with the level inferred from the dyadic
// coordinates. Every node must appear exactly once.
GridData read_grid_file(const std::string& path);
void write_grid_file(const GridData& data, const std::string& path);

// Mask spec as JSON: {"r": .., "mu": .., "lambda": [..]} with 2 mu + 1
// lambda entries ordered from shift -mu to +mu.
QuasiInterpolantSpec read_spec_json(const std::string& path);
void write_spec_json(const QuasiInterpolantSpec& spec, const std::string& path);

// Bench configuration (JSON). Unknown keys are rejected.
ExperimentConfig read_experiment_config(const std::string& path);

// Recovery sidecar: schedule, budgets, per-level selection diagnostics.
std::string recovery_sidecar_json(const RecoveryResult& res);

// Ladder report: the fixed five-column CSV and the full JSON document.
void write_report_csv(const RateReport& report, std::ostream& os);
std::string report_json(const RateReport& report);

}  // namespace bsrec
