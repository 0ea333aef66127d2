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

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "bsrec/errors.hpp"
#include "bsrec/lattice.hpp"

namespace bsrec {

// Values of a function on the dyadic grid {0, 2^-m, ..., 1}^d, row-major.
struct GridData {
  int d = 1;
  int level = 0;                // grid step 2^-level
  Eigen::ArrayXd values;        // (2^level + 1)^d entries

  Index nodes_per_axis() const { return (Index(1) << level) + 1; }
  void validate() const;
};

// Point-evaluation access to a target function with a ledger of distinct
// queried points. Repeated queries of the same point are answered from the
// target but counted once. An optional budget cap fails the query that would
// bring the ledger past the cap.
class FunctionOracle {
 public:
  using Target = std::function<double(const Point&)>;

  FunctionOracle(Target f, int d, std::optional<long> budget_cap = std::nullopt);

  FunctionOracle(FunctionOracle&&) = default;
  FunctionOracle& operator=(FunctionOracle&&) = default;

  int d() const { return d_; }

  // Ledgered read. Throws BudgetError when a new point would exceed the cap.
  double operator()(const Point& x);

  // Raw, un-ledgered access to the target. Used where the algorithm is free
  // to inspect the function before committing to sample points, and for
  // error quadrature after a recovery; never for values a recovery is built
  // from.
  const Target& target() const { return f_; }

  long samples() const;
  const std::vector<Point>& ledger() const { return order_; }

  std::optional<long> budget_cap() const { return cap_; }
  void set_budget_cap(std::optional<long> cap);

  void reset_ledger();

 private:
  Target f_;
  int d_;
  std::optional<long> cap_;
  std::vector<Point> order_;  // insertion order = query order
  std::unordered_set<PointKey, PointKeyHash> seen_;
  std::unique_ptr<std::mutex> mu_;
};

// Oracle for a named closed form ("sin", "cusp(beta=0.6)", any corpus name).
FunctionOracle from_closed_form(const std::string& name, int d);
std::function<double(const Point&)> closed_form_target(const std::string& name, int d);

// Oracle backed by stored grid values. Queries must land exactly on grid
// nodes of level <= data.level; anything else raises PrecisionError naming
// the point. No interpolation ever happens here.
FunctionOracle from_grid(GridData data);

}  // namespace bsrec
