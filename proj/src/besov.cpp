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

#include "bsrec/besov.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bsrec/errors.hpp"
#include "bsrec/lattice.hpp"

namespace bsrec {

namespace {

double binom_d(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * static_cast<double>(n - k + i) / static_cast<double>(i);
  return b;
}

// theta-aggregation of nonnegative terms; theta = inf means the max.
double theta_aggregate(const std::vector<double>& terms, double theta) {
  if (std::isinf(theta)) {
    double m = 0.0;
    for (double t : terms) m = std::max(m, t);
    return m;
  }
  double acc = 0.0;
  for (double t : terms) acc += std::pow(t, theta);
  return std::pow(acc, 1.0 / theta);
}

Index default_resolution(int d) { return d == 1 ? 4096 : 128; }

// Midpoint-rule L_p norm of f over the unit cube, resolution points per axis.
double quadrature_lp_norm(const FunctionOracle::Target& f, int d, double p, Index resolution) {
  const Lattice cells = Lattice::cube(0, resolution - 1, d);
  const double cell = std::pow(1.0 / static_cast<double>(resolution), d);
  double acc = 0.0;
  Point x(d);
  cells.for_each([&](const MultiIndex& idx, Index) {
    for (int a = 0; a < d; ++a)
      x[a] = (static_cast<double>(idx[static_cast<std::size_t>(a)]) + 0.5) /
             static_cast<double>(resolution);
    const double v = std::abs(f(x));
    if (std::isinf(p))
      acc = std::max(acc, v);
    else
      acc += std::pow(v, p) * cell;
  });
  return std::isinf(p) ? acc : std::pow(acc, 1.0 / p);
}

}  // namespace

SmoothnessProbe SmoothnessProbe::dyadic(int l, double p, int k_min, int k_max, int h_samples) {
  if (k_min > k_max) throw ConfigError("SmoothnessProbe::dyadic: k_min > k_max");
  SmoothnessProbe probe;
  probe.l = l;
  probe.p = p;
  probe.h_samples = h_samples;
  for (int k = k_min; k <= k_max; ++k) probe.t_grid.push_back(std::exp2(-k));
  return probe;
}

std::vector<std::pair<double, double>> modulus(FunctionOracle& oracle,
                                               const SmoothnessProbe& probe,
                                               std::uint64_t seed, int resolution) {
  const int d = oracle.d();
  const int l = probe.l;
  if (l < 1 || l > 12) throw ConfigError("modulus: difference order must be in [1, 12]");
  if (!(probe.p > 0.0)) throw ConfigError("modulus: p must be positive (or infinity)");
  if (probe.t_grid.empty()) throw ConfigError("modulus: empty t grid");
  for (std::size_t i = 0; i < probe.t_grid.size(); ++i) {
    const double t = probe.t_grid[i];
    if (!(t > 0.0) || t > 1.0) throw ConfigError("modulus: step sizes must lie in (0, 1]");
    if (i > 0 && !(t < probe.t_grid[i - 1]))
      throw ConfigError("modulus: t grid must be strictly decreasing");
  }
  if (probe.h_samples < 0) throw ConfigError("modulus: negative h_samples");
  const Index R = resolution > 0 ? resolution : default_resolution(d);

  const auto& f = oracle.target();
  std::vector<double> coef(static_cast<std::size_t>(l) + 1);
  for (int j = 0; j <= l; ++j)
    coef[static_cast<std::size_t>(j)] = ((l - j) % 2 ? -1.0 : 1.0) * binom_d(l, j);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const Lattice cells = Lattice::cube(0, R - 1, d);
  const double cell = std::pow(1.0 / static_cast<double>(R), d);

  // ||difference of order l along h||_p over the points whose stencil stays
  // inside the cube. Points are cell midpoints, so no endpoint is sampled.
  const auto diff_norm = [&](const Point& h) {
    double acc = 0.0;
    Point x(d);
    Point y(d);
    cells.for_each([&](const MultiIndex& idx, Index) {
      for (int a = 0; a < d; ++a)
        x[a] = (static_cast<double>(idx[static_cast<std::size_t>(a)]) + 0.5) /
               static_cast<double>(R);
      for (int a = 0; a < d; ++a) {
        const double e = x[a] + static_cast<double>(l) * h[a];
        if (e < 0.0 || e > 1.0) return;
      }
      double delta = 0.0;
      for (int j = 0; j <= l; ++j) {
        y = x + static_cast<double>(j) * h;
        delta += coef[static_cast<std::size_t>(j)] * f(y);
      }
      const double v = std::abs(delta);
      if (std::isinf(probe.p))
        acc = std::max(acc, v);
      else
        acc += std::pow(v, probe.p) * cell;
    });
    return std::isinf(probe.p) ? acc : std::pow(acc, 1.0 / probe.p);
  };

  std::vector<std::pair<double, double>> out;
  out.reserve(probe.t_grid.size());
  for (const double t : probe.t_grid) {
    // Strictly below t, probed at the top and at half scale since the
    // directional norm need not be monotone in |h|.
    const double top = t * (1.0 - 1e-9);
    std::vector<Point> dirs;
    for (int a = 0; a < d; ++a) {
      Point e = Point::Zero(d);
      e[a] = 1.0;
      dirs.push_back(e);
      dirs.push_back(-e);
    }
    for (int s = 0; s < probe.h_samples; ++s) {
      Point u(d);
      double norm = 0.0;
      do {
        for (int a = 0; a < d; ++a) u[a] = gauss(rng);
        norm = u.norm();
      } while (norm < 1e-12);
      dirs.push_back(u / norm);
    }
    double best = 0.0;
    for (const Point& u : dirs)
      for (const double scale : {1.0, 0.5}) best = std::max(best, diff_norm(u * (top * scale)));
    out.emplace_back(t, best);
  }
  // The modulus is nondecreasing in t; the raw estimates need not be because
  // the admissible domain shrinks as t grows.
  for (std::size_t i = out.size(); i-- > 1;)
    out[i - 1].second = std::max(out[i - 1].second, out[i].second);
  return out;
}

SeminormEstimate besov_seminorm_B1(FunctionOracle& oracle, const BesovParams& bp, int l,
                                   int k_max, std::uint64_t seed, int resolution) {
  bp.validate();
  if (oracle.d() != bp.d)
    throw ConfigError("besov_seminorm_B1: oracle dimension " + std::to_string(oracle.d()) +
                      " != parameter dimension " + std::to_string(bp.d));
  if (!(static_cast<double>(l) > bp.alpha))
    throw ConfigError("besov_seminorm_B1: need difference order l > alpha, got l = " +
                      std::to_string(l) + ", alpha = " + std::to_string(bp.alpha));
  if (k_max < 0) throw ConfigError("besov_seminorm_B1: negative k_max");

  const SmoothnessProbe probe = SmoothnessProbe::dyadic(l, bp.p, 0, k_max);
  const auto mods = modulus(oracle, probe, seed, resolution);
  std::vector<double> terms(mods.size());
  for (std::size_t k = 0; k < mods.size(); ++k)
    terms[k] = std::exp2(bp.alpha * static_cast<double>(k)) * mods[k].second;

  const Index R = resolution > 0 ? resolution : default_resolution(bp.d);
  const double fnorm = quadrature_lp_norm(oracle.target(), bp.d, bp.p, R);
  return {theta_aggregate(terms, bp.theta) + fnorm, terms.back()};
}

SeminormEstimate besov_discrete_B3(const Decomposition& dec, const BesovParams& bp) {
  bp.validate();
  if (dec.base.d() != bp.d)
    throw ConfigError("besov_discrete_B3: decomposition dimension " +
                      std::to_string(dec.base.d()) + " != parameter dimension " +
                      std::to_string(bp.d));
  // The base coefficients represent the function itself, not a smoothness
  // increment: only detail levels enter the series, so reproduced targets
  // (all details zero) score exactly zero.
  const double drop = std::isinf(bp.p) ? 0.0 : static_cast<double>(bp.d) / bp.p;
  std::vector<double> terms;
  for (const LevelCoefficients& c : dec.details)
    terms.push_back(std::exp2((bp.alpha - drop) * static_cast<double>(c.level)) *
                    coeff_norm(c, bp.p));
  if (terms.empty()) return {0.0, 0.0};
  return {theta_aggregate(terms, bp.theta), terms.back()};
}

namespace {

struct ParsedName {
  std::string base;
  std::map<std::string, double> args;
};

// "name" or "name(key=value, key=value)"; values parse as doubles.
ParsedName parse_target_name(const std::string& name) {
  const auto strip = [](std::string s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
  };
  ParsedName pn;
  const std::string whole = strip(name);
  const auto paren = whole.find('(');
  if (paren == std::string::npos) {
    pn.base = whole;
  } else {
    if (whole.empty() || whole.back() != ')')
      throw ConfigError("target name '" + name + "': unbalanced parentheses");
    pn.base = strip(whole.substr(0, paren));
    const std::string inner = whole.substr(paren + 1, whole.size() - paren - 2);
    std::stringstream ss(inner);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos)
        throw ConfigError("target name '" + name + "': expected key=value, got '" + item + "'");
      const std::string key = strip(item.substr(0, eq));
      const std::string val = strip(item.substr(eq + 1));
      if (key.empty()) throw ConfigError("target name '" + name + "': empty key");
      std::size_t used = 0;
      double x = 0.0;
      try {
        x = std::stod(val, &used);
      } catch (const std::exception&) {
        throw ConfigError("target name '" + name + "': bad value '" + val + "'");
      }
      if (used != val.size())
        throw ConfigError("target name '" + name + "': bad value '" + val + "'");
      if (!pn.args.emplace(key, x).second)
        throw ConfigError("target name '" + name + "': duplicate key '" + key + "'");
    }
  }
  if (pn.base.empty()) throw ConfigError("target name '" + name + "': empty name");
  return pn;
}

double take_arg(ParsedName& pn, const std::string& key, double dflt) {
  const auto it = pn.args.find(key);
  if (it == pn.args.end()) return dflt;
  const double v = it->second;
  pn.args.erase(it);
  return v;
}

void reject_leftover(const ParsedName& pn, const std::string& name) {
  if (pn.args.empty()) return;
  throw ConfigError("target name '" + name + "': unknown key '" + pn.args.begin()->first + "'");
}

double cusp_beta(ParsedName& pn, const std::string& name) {
  const double beta = take_arg(pn, "beta", 0.6);
  if (!(beta > 0.0) || !(beta < 2.0))
    throw ConfigError("target name '" + name + "': beta must lie in (0, 2)");
  return beta;
}

constexpr double kPi = 3.14159265358979323846;
constexpr double kE = 2.71828182845904523536;
const double kCuspCenter = 1.0 / kPi;
const double kRadialCenterX = 1.0 / kPi;
const double kRadialCenterY = 1.0 / kE;
const double kKinkCenter = std::sqrt(2.0) - 1.0;

}  // namespace

FunctionOracle::Target closed_form_target(const std::string& name, int d) {
  ParsedName pn = parse_target_name(name);
  FunctionOracle::Target out;
  if (d == 1) {
    if (pn.base == "poly_linear") {
      out = [](const Point& x) { return 0.3 + 1.7 * x[0]; };
    } else if (pn.base == "poly_cubic") {
      out = [](const Point& x) {
        const double t = x[0];
        return ((t - 0.5) * t + 0.25) * t + 0.1;
      };
    } else if (pn.base == "sin") {
      out = [](const Point& x) { return std::sin(2.0 * kPi * x[0]); };
    } else if (pn.base == "cusp") {
      const double beta = cusp_beta(pn, name);
      out = [beta](const Point& x) { return std::pow(std::abs(x[0] - kCuspCenter), beta); };
    } else if (pn.base == "kink") {
      out = [](const Point& x) { return std::abs(x[0] - kKinkCenter); };
    }
  } else if (d == 2) {
    if (pn.base == "poly_bilinear") {
      out = [](const Point& x) { return (0.3 + 1.7 * x[0]) * (0.2 + 0.6 * x[1]); };
    } else if (pn.base == "poly_bicubic") {
      out = [](const Point& x) {
        const double s = x[0];
        const double t = x[1];
        return (((s - 0.5) * s + 0.25) * s + 0.1) * (((t + 0.2) * t - 0.3) * t + 0.2);
      };
    } else if (pn.base == "sines") {
      out = [](const Point& x) {
        return std::sin(2.0 * kPi * x[0]) * std::sin(2.0 * kPi * x[1]);
      };
    } else if (pn.base == "radial_cusp") {
      const double beta = cusp_beta(pn, name);
      out = [beta](const Point& x) {
        const double dx = x[0] - kRadialCenterX;
        const double dy = x[1] - kRadialCenterY;
        return std::pow(std::sqrt(dx * dx + dy * dy), beta);
      };
    } else if (pn.base == "ridge_kink") {
      out = [](const Point& x) { return std::abs(0.6 * x[0] + 0.8 * x[1] - 0.55); };
    }
  } else {
    throw ConfigError("closed_form_target: only d in {1, 2} have named targets");
  }
  if (!out)
    throw ConfigError("closed_form_target: unknown target '" + pn.base + "' for d = " +
                      std::to_string(d));
  reject_leftover(pn, name);
  return out;
}

FunctionOracle CorpusEntry::make_oracle(std::optional<long> budget_cap) const {
  return FunctionOracle(target, nominal.d, budget_cap);
}

std::vector<CorpusEntry> corpus(int d) {
  const double inf = std::numeric_limits<double>::infinity();
  const auto entry = [d](const std::string& name, double alpha, double p, double theta,
                         double q) {
    CorpusEntry e;
    e.name = name;
    e.target = closed_form_target(name, d);
    e.nominal = BesovParams{alpha, p, theta, q, d};
    return e;
  };
  std::vector<CorpusEntry> out;
  if (d == 1) {
    out.push_back(entry("poly_linear", 4.0, inf, inf, inf));
    out.push_back(entry("poly_cubic", 4.0, inf, inf, inf));
    out.push_back(entry("sin", 4.0, inf, inf, inf));
    out.push_back(entry("cusp(beta=0.4)", 1.4, 1.0, inf, inf));
    out.push_back(entry("cusp(beta=0.6)", 1.6, 1.0, inf, inf));
    out.push_back(entry("cusp(beta=0.8)", 1.8, 1.0, inf, inf));
    out.push_back(entry("kink", 2.0, 1.0, inf, inf));
  } else if (d == 2) {
    out.push_back(entry("poly_bilinear", 4.0, inf, inf, inf));
    out.push_back(entry("poly_bicubic", 4.0, inf, inf, inf));
    out.push_back(entry("sines", 4.0, inf, inf, inf));
    out.push_back(entry("radial_cusp(beta=0.4)", 2.4, 1.0, inf, inf));
    out.push_back(entry("radial_cusp(beta=0.6)", 2.6, 1.0, inf, inf));
    out.push_back(entry("ridge_kink", 1.5, 2.0, inf, inf));
  } else {
    throw ConfigError("corpus: only d in {1, 2} are provided");
  }
  return out;
}

}  // namespace bsrec
