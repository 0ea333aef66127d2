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

#include <stdexcept>

namespace bsrec {

// Invalid parameters, names, masks, or violated preconditions.
// Messages name the constraint that failed.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A sampling budget cannot be met: schedule infeasible for the requested n,
// or an oracle budget cap would be exceeded.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A lookup that would silently lose precision (off-grid point query).
struct PrecisionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace bsrec
