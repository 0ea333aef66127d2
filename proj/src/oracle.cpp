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

#include "bsrec/oracle.hpp"

#include <cmath>
#include <sstream>

namespace bsrec {

void GridData::validate() const {
  if (d < 1 || d > kMaxDim) throw ConfigError("grid data: dimension out of range");
  if (level < 0 || level > 52) throw ConfigError("grid data: level out of range");
  Index want = 1;
  for (int a = 0; a < d; ++a) want *= nodes_per_axis();
  if (values.size() != want)
    throw ConfigError("grid data: expected " + std::to_string(want) + " values, got " +
                      std::to_string(values.size()));
}

FunctionOracle::FunctionOracle(Target f, int d, std::optional<long> budget_cap)
    : f_(std::move(f)), d_(d), cap_(budget_cap), mu_(std::make_unique<std::mutex>()) {
  if (!f_) throw ConfigError("oracle: empty target function");
  if (d_ < 1 || d_ > kMaxDim) throw ConfigError("oracle: dimension out of range");
  if (cap_ && *cap_ < 0) throw ConfigError("oracle: negative budget cap");
}

double FunctionOracle::operator()(const Point& x) {
  if (x.size() != d_)
    throw ConfigError("oracle: point dimension " + std::to_string(x.size()) +
                      " != oracle dimension " + std::to_string(d_));
  {
    std::lock_guard<std::mutex> lock(*mu_);
    const PointKey key = make_point_key(x);
    if (!seen_.contains(key)) {
      if (cap_ && static_cast<long>(order_.size()) >= *cap_) {
        std::ostringstream os;
        os << "oracle: budget cap " << *cap_ << " exhausted; refusing new point (";
        for (int i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
        os << ")";
        throw BudgetError(os.str());
      }
      seen_.insert(key);
      order_.push_back(x);
    }
  }
  return f_(x);
}

long FunctionOracle::samples() const {
  std::lock_guard<std::mutex> lock(*mu_);
  return static_cast<long>(order_.size());
}

void FunctionOracle::set_budget_cap(std::optional<long> cap) {
  std::lock_guard<std::mutex> lock(*mu_);
  if (cap && *cap < 0) throw ConfigError("oracle: negative budget cap");
  cap_ = cap;
}

void FunctionOracle::reset_ledger() {
  std::lock_guard<std::mutex> lock(*mu_);
  order_.clear();
  seen_.clear();
}

FunctionOracle from_closed_form(const std::string& name, int d) {
  return FunctionOracle(closed_form_target(name, d), d);
}

FunctionOracle from_grid(GridData data) {
  data.validate();
  auto shared = std::make_shared<GridData>(std::move(data));
  auto lookup = [shared](const Point& x) -> double {
    const GridData& g = *shared;
    if (x.size() != g.d)
      throw ConfigError("grid oracle: point dimension " + std::to_string(x.size()) +
                        " != grid dimension " + std::to_string(g.d));
    const double scale = std::ldexp(1.0, g.level);
    Index flat = 0;
    const Index n = g.nodes_per_axis();
    for (int a = 0; a < g.d; ++a) {
      const double y = x[a] * scale;  // exact for dyadic x of level <= g.level
      const double j = std::floor(y);
      if (j != y || j < 0 || j >= static_cast<double>(n)) {
        std::ostringstream os;
        os << "grid oracle: point (";
        for (int i = 0; i < g.d; ++i) os << (i ? ", " : "") << x[i];
        os << ") is not a level-" << g.level << " grid node; refusing to interpolate";
        throw PrecisionError(os.str());
      }
      flat = flat * n + static_cast<Index>(j);
    }
    return g.values[flat];
  };
  const int d = shared->d;
  return FunctionOracle(std::move(lookup), d);
}

}  // namespace bsrec
