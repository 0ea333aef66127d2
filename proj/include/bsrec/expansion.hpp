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

#include <unordered_map>
#include <vector>

#include "bsrec/bspline.hpp"
#include "bsrec/lattice.hpp"

namespace bsrec {

struct ExpansionTerm {
  int level = 0;
  MultiIndex s;
  double c = 0.0;
};

// Finite B-spline series sum_i c_i M_{k_i, s_i}. Terms are unique in (level, s)
// and kept sorted by (level, s lexicographic) so serialization and evaluation
// are deterministic.
struct SparseExpansion {
  int d = 1;
  int r = 1;
  std::vector<ExpansionTerm> terms;

  void sort_canonical();
  // Sum of coefficients of duplicate (level, s) entries, then canonical order.
  void merge_duplicates();
};

// Evaluation index over an expansion: per level, a hash map of coefficients.
// Evaluating at x touches only translates whose support contains x, so the
// cost is (2r)^d per populated level, independent of the number of terms.
class ExpansionEvaluator {
 public:
  ExpansionEvaluator() = default;
  explicit ExpansionEvaluator(const SparseExpansion& e);

  double operator()(const Point& x) const;

 private:
  struct LevelMap {
    int level = 0;
    std::unordered_map<MultiIndex, double, MultiIndexHash> c;
  };
  int d_ = 1;
  int r_ = 1;
  std::vector<LevelMap> levels_;  // ascending level
};

// Convenience one-shot evaluation; builds the index each call. Build an
// ExpansionEvaluator once when evaluating at many points.
double eval_expansion(const SparseExpansion& e, const Point& x);

}  // namespace bsrec
