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

#include "bsrec/harness.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <utility>

#include "bsrec/errors.hpp"
#include "bsrec/io.hpp"
#include "bsrec/lattice.hpp"

namespace bsrec {

namespace {

Index default_resolution(int d) { return d == 1 ? 4096 : 128; }

}  // namespace

QuasiInterpolantSpec ExperimentConfig::spec() const {
  if (custom_spec)
    return QuasiInterpolantSpec::validated(custom_spec->r, custom_spec->mu,
                                           custom_spec->lambda);
  return QuasiInterpolantSpec::builtin(spec_name);
}

void ExperimentConfig::validate() const {
  bp.validate();
  if (target.empty() == grid_file.empty())
    throw ConfigError("experiment config: exactly one of target / grid_file must be set");
  if (ladder.empty()) throw ConfigError("experiment config: empty budget ladder");
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    if (ladder[i] < 1) throw ConfigError("experiment config: budgets must be positive");
    if (i > 0 && ladder[i] <= ladder[i - 1])
      throw ConfigError("experiment config: ladder must be strictly increasing");
  }
  for (double q : q_report)
    if (!(q > 0.0)) throw ConfigError("experiment config: report exponents must be positive");
  if (resolution < 0) throw ConfigError("experiment config: negative resolution");
  spec();  // throws on an unknown or malformed mask
}

double lq_error(const FunctionOracle::Target& f, const SparseExpansion& g, double q,
                int resolution) {
  if (!(q > 0.0)) throw ConfigError("lq_error: q must be positive");
  if (resolution < 0) throw ConfigError("lq_error: negative resolution");
  const int d = g.d;
  if (d < 1 || d > kMaxDim) throw ConfigError("lq_error: expansion dimension out of range");
  const Index R = resolution > 0 ? resolution : default_resolution(d);
  const ExpansionEvaluator eval(g);
  const Lattice cells = Lattice::cube(0, R - 1, d);
  const double cell = std::pow(1.0 / static_cast<double>(R), d);
  double acc = 0.0;
  Point x(d);
  cells.for_each([&](const MultiIndex& idx, Index) {
    for (int a = 0; a < d; ++a)
      x[a] = (static_cast<double>(idx[static_cast<std::size_t>(a)]) + 0.5) /
             static_cast<double>(R);
    const double v = std::abs(f(x) - eval(x));
    if (std::isinf(q))
      acc = std::max(acc, v);
    else
      acc += std::pow(v, q) * cell;
  });
  return std::isinf(q) ? acc : std::pow(acc, 1.0 / q);
}

double lq_error_on_grid(const GridData& data, const SparseExpansion& g, double q) {
  data.validate();
  if (!(q > 0.0)) throw ConfigError("lq_error_on_grid: q must be positive");
  if (g.d != data.d)
    throw ConfigError("lq_error_on_grid: expansion dimension != grid dimension");
  const ExpansionEvaluator eval(g);
  const Lattice nodes = Lattice::cube(0, data.nodes_per_axis() - 1, data.d);
  const double w = 1.0 / static_cast<double>(nodes.size());
  double acc = 0.0;
  nodes.for_each([&](const MultiIndex& idx, Index flat) {
    const Point x = grid_point(idx, data.level);
    const double v = std::abs(data.values[flat] - eval(x));
    if (std::isinf(q))
      acc = std::max(acc, v);
    else
      acc += std::pow(v, q) * w;
  });
  return std::isinf(q) ? acc : std::pow(acc, 1.0 / q);
}

RateFit fit_rate(const std::vector<std::pair<double, double>>& pairs) {
  std::vector<std::pair<double, double>> pts;
  int excluded = 0;
  for (const auto& [n, err] : pairs) {
    if (!(n > 0.0) || !std::isfinite(err) || !(err > 0.0)) {
      ++excluded;
      continue;
    }
    pts.emplace_back(std::log2(n), std::log2(err));
  }
  if (pts.size() < 2)
    throw ConfigError("fit_rate: fewer than 2 usable points (excluded " +
                      std::to_string(excluded) + ")");
  double mx = 0.0;
  double my = 0.0;
  for (const auto& [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (!(sxx > 0.0)) throw ConfigError("fit_rate: degenerate abscissa (all budgets equal)");
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (const auto& [x, y] : pts) {
    const double r = y - (fit.intercept + fit.slope * x);
    rss += r * r;
  }
  fit.residual = std::sqrt(rss / static_cast<double>(pts.size()));
  fit.points = static_cast<int>(pts.size());
  fit.excluded = excluded;
  return fit;
}

RateReport run_ladder(const ExperimentConfig& cfg) {
  cfg.validate();
  const QuasiInterpolantSpec spec = cfg.spec();
  const int d = cfg.bp.d;
  const int R = cfg.resolution > 0 ? cfg.resolution
                                   : static_cast<int>(default_resolution(d));

  RateReport rep;
  rep.config = cfg;

  std::shared_ptr<GridData> grid;
  FunctionOracle::Target target_fn;
  if (!cfg.grid_file.empty()) {
    grid = std::make_shared<GridData>(read_grid_file(cfg.grid_file));
    if (grid->d != d)
      throw ConfigError("experiment config: grid file dimension " + std::to_string(grid->d) +
                        " != parameter dimension " + std::to_string(d));
  } else {
    target_fn = closed_form_target(cfg.target, d);
  }
  const auto fresh_oracle = [&](long cap) {
    FunctionOracle o = grid ? from_grid(*grid) : FunctionOracle(target_fn, d);
    o.set_budget_cap(cap);
    return o;
  };
  const auto err_of = [&](const SparseExpansion& e, double q, int res) {
    return grid ? lq_error_on_grid(*grid, e, q) : lq_error(target_fn, e, q, res);
  };

  for (const long n : cfg.ladder) {
    LadderRow row;
    row.n = n;
    const auto note = [&](const std::string& msg) {
      if (!row.warning.empty()) row.warning += "; ";
      row.warning += msg;
      rep.warnings.push_back("n=" + std::to_string(n) + ": " + msg);
    };
    const auto run_one = [&](bool adaptive) {
      const char* tag = adaptive ? "adaptive" : "linear";
      try {
        FunctionOracle o = fresh_oracle(n);
        const RecoveryResult res = adaptive ? recover_adaptive(o, spec, cfg.bp, n)
                                            : recover_linear(o, spec, n);
        const long used = o.samples();
        if (used != res.samples_used)
          note(std::string(tag) + ": ledger count " + std::to_string(used) +
               " disagrees with reported " + std::to_string(res.samples_used));
        if (used > n)
          note(std::string(tag) + ": budget exceeded per ledger, " + std::to_string(used) +
               " > " + std::to_string(n));
        const double err = err_of(res.expansion, cfg.bp.q, R);
        std::vector<double> extra;
        extra.reserve(cfg.q_report.size());
        for (const double q : cfg.q_report) extra.push_back(err_of(res.expansion, q, R));
        if (cfg.quadrature_check && !grid) {
          const double err2 = err_of(res.expansion, cfg.bp.q, 2 * R);
          if (std::max(err, err2) > 1e-8 &&
              std::abs(err2 - err) > 0.05 * std::max(err, err2)) {
            row.quadrature_flag = true;
            note(std::string(tag) + ": error estimate moved >= 5% when the quadrature "
                 "resolution doubled");
          }
        }
        if (adaptive) {
          row.samples_adaptive = used;
          row.err_adaptive = err;
          row.extra_adaptive = std::move(extra);
        } else {
          row.samples_linear = used;
          row.err_linear = err;
          row.extra_linear = std::move(extra);
        }
      } catch (const BudgetError& e) {
        note(std::string(tag) + " infeasible: " + e.what());
      } catch (const ConfigError& e) {
        note(std::string(tag) + " skipped: " + e.what());
      }
    };
    run_one(false);
    if (cfg.bp.p < cfg.bp.q) run_one(true);
    rep.rows.push_back(std::move(row));
  }

  const double invp = std::isinf(cfg.bp.p) ? 0.0 : 1.0 / cfg.bp.p;
  const double invq = std::isinf(cfg.bp.q) ? 0.0 : 1.0 / cfg.bp.q;
  rep.theory_adaptive = -cfg.bp.alpha / static_cast<double>(d);
  rep.theory_linear = rep.theory_adaptive + std::max(0.0, invp - invq);

  const auto fit_both = [&](bool adaptive, std::optional<RateFit>& tail,
                            std::optional<RateFit>& full) {
    const char* tag = adaptive ? "adaptive" : "linear";
    std::vector<std::pair<double, double>> pairs;
    int ran = 0;
    for (const LadderRow& r : rep.rows) {
      const long used = adaptive ? r.samples_adaptive : r.samples_linear;
      const double err = adaptive ? r.err_adaptive : r.err_linear;
      if (used < 0) continue;
      ++ran;
      if (std::isfinite(err) && err > 0.0) pairs.emplace_back(static_cast<double>(r.n), err);
    }
    if (ran > static_cast<int>(pairs.size()))
      rep.warnings.push_back(std::string(tag) + " fit: excluded " +
                             std::to_string(ran - static_cast<int>(pairs.size())) +
                             " rows with zero or non-finite error");
    if (pairs.size() >= 2)
      full = fit_rate(pairs);
    else
      rep.warnings.push_back(std::string(tag) + " fit: fewer than 2 usable ladder points");
    if (pairs.size() >= 4) {
      const std::size_t keep = std::max<std::size_t>(4, (pairs.size() + 1) / 2);
      std::vector<std::pair<double, double>> upper(pairs.end() - static_cast<long>(keep),
                                                   pairs.end());
      tail = fit_rate(upper);
    } else {
      rep.warnings.push_back(std::string(tag) +
                             " fit: fewer than 4 usable points, tail fit omitted");
    }
  };
  fit_both(false, rep.fit_linear, rep.fit_linear_full);
  if (cfg.bp.p < cfg.bp.q) fit_both(true, rep.fit_adaptive, rep.fit_adaptive_full);
  return rep;
}

}  // namespace bsrec
