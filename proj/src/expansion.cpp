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

#include "bsrec/expansion.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

namespace bsrec {

void SparseExpansion::sort_canonical() {
  std::sort(terms.begin(), terms.end(), [](const ExpansionTerm& a, const ExpansionTerm& b) {
    if (a.level != b.level) return a.level < b.level;
    return a.s < b.s;
  });
}

void SparseExpansion::merge_duplicates() {
  sort_canonical();
  std::vector<ExpansionTerm> out;
  out.reserve(terms.size());
  for (auto& t : terms) {
    if (!out.empty() && out.back().level == t.level && out.back().s == t.s)
      out.back().c += t.c;
    else
      out.push_back(std::move(t));
  }
  terms.swap(out);
}

ExpansionEvaluator::ExpansionEvaluator(const SparseExpansion& e) : d_(e.d), r_(e.r) {
  BSplineOrder check(e.r);
  if (e.d < 1 || e.d > kMaxDim) throw ConfigError("expansion: dimension out of range");
  std::map<int, LevelMap> by_level;
  for (const ExpansionTerm& t : e.terms) {
    if (t.level < 0) throw ConfigError("expansion: negative level");
    if (static_cast<int>(t.s.size()) != e.d)
      throw ConfigError("expansion: term index dimension mismatch");
    auto& lm = by_level[t.level];
    lm.level = t.level;
    lm.c[t.s] += t.c;
  }
  levels_.reserve(by_level.size());
  for (auto& [lvl, lm] : by_level) levels_.push_back(std::move(lm));
}

double ExpansionEvaluator::operator()(const Point& x) const {
  if (x.size() != d_) throw ConfigError("expansion: point dimension mismatch");
  double total = 0.0;
  MultiIndex s(d_);
  std::array<Index, kMaxDim> lo{}, hi{};
  std::array<std::array<double, 2 * kMaxHalfOrder>, kMaxDim> basis{};
  for (const LevelMap& L : levels_) {
    bool empty = false;
    for (int a = 0; a < d_; ++a) {
      support_range(r_, L.level, x[a], lo[a], hi[a]);
      if (hi[a] < lo[a]) {
        empty = true;
        break;
      }
      const double xs = std::ldexp(x[a], L.level);
      for (Index t = lo[a]; t <= hi[a]; ++t)
        basis[a][t - lo[a]] = eval_cardinal(r_, xs - static_cast<double>(t));
    }
    if (empty) continue;
    for (int a = 0; a < d_; ++a) s[a] = lo[a];
    while (true) {
      auto it = L.c.find(s);
      if (it != L.c.end()) {
        double w = it->second;
        for (int a = 0; a < d_; ++a) w *= basis[a][s[a] - lo[a]];
        total += w;
      }
      int a = d_ - 1;
      for (; a >= 0; --a) {
        if (++s[a] <= hi[a]) break;
        s[a] = lo[a];
      }
      if (a < 0) break;
    }
  }
  return total;
}

double eval_expansion(const SparseExpansion& e, const Point& x) {
  return ExpansionEvaluator(e)(x);
}

}  // namespace bsrec
