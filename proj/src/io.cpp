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

#include "bsrec/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "bsrec/errors.hpp"
#include "bsrec/lattice.hpp"

namespace bsrec {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return std::string();
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(strip(item));
  return out;
}

long parse_long(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(s, &used);
  } catch (const std::exception&) {
    throw ConfigError(what + ": expected an integer, got '" + s + "'");
  }
  if (used != s.size()) throw ConfigError(what + ": expected an integer, got '" + s + "'");
  return v;
}

double parse_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError(what + ": expected a number, got '" + s + "'");
  }
  if (used != s.size()) throw ConfigError(what + ": expected a number, got '" + s + "'");
  return v;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open '" + path + "' for reading");
  return is;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open '" + path + "' for writing");
  return os;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

json parse_json_file(const std::string& path) {
  std::ifstream is = open_input(path);
  try {
    return json::parse(is);
  } catch (const json::parse_error& e) {
    throw ConfigError("'" + path + "': " + e.what());
  }
}

// Infinity is legal for the smoothness parameters but not for JSON numbers;
// it travels as the string "inf".
json extended_number(double v) {
  if (std::isinf(v)) return json(v > 0 ? "inf" : "-inf");
  return json(v);
}

double parse_extended_number(const json& v, const std::string& what) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf" || s == "Inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw ConfigError(what + ": expected a number or \"inf\"");
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& what) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) {
        ok = true;
        break;
      }
    if (!ok) throw ConfigError(what + ": unknown key '" + key + "'");
  }
}

// Smallest m with x 2^m integral; the dyadic level of a coordinate.
int dyadic_level_of(double x, const std::string& what) {
  if (!(x >= 0.0) || !(x <= 1.0)) throw ConfigError(what + ": coordinate outside [0, 1]");
  for (int m = 0; m <= 52; ++m) {
    const double v = std::ldexp(x, m);
    if (v == std::floor(v)) return m;
  }
  throw ConfigError(what + ": coordinate " + fmt(x) + " is not a dyadic rational");
}

GridData read_grid_csv(std::istream& is, const std::string& path) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  int d = -1;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = strip(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.find_first_not_of("0123456789+-.eE, \t") != std::string::npos) continue;  // header
    const auto fields = split_csv(t);
    if (d < 0) {
      d = static_cast<int>(fields.size()) - 1;
      if (d < 1 || d > kMaxDim)
        throw ConfigError("'" + path + "': rows need 1..6 coordinates plus a value");
    }
    if (static_cast<int>(fields.size()) != d + 1)
      throw ConfigError("'" + path + "' line " + std::to_string(lineno) +
                        ": expected " + std::to_string(d + 1) + " fields");
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) row.push_back(parse_double(f, "'" + path + "'"));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigError("'" + path + "': no data rows");

  int level = 0;
  for (const auto& row : rows)
    for (int a = 0; a < d; ++a)
      level = std::max(level, dyadic_level_of(row[static_cast<std::size_t>(a)], "'" + path + "'"));

  GridData data;
  data.d = d;
  data.level = level;
  const Index n = (Index(1) << level) + 1;
  const Lattice nodes = Lattice::cube(0, n - 1, d);
  if (static_cast<Index>(rows.size()) != nodes.size())
    throw ConfigError("'" + path + "': got " + std::to_string(rows.size()) +
                      " rows for a level-" + std::to_string(level) + " grid that has " +
                      std::to_string(nodes.size()) + " nodes");
  data.values = Eigen::ArrayXd::Zero(nodes.size());
  std::vector<bool> seen(static_cast<std::size_t>(nodes.size()), false);
  MultiIndex idx(static_cast<std::size_t>(d));
  for (const auto& row : rows) {
    for (int a = 0; a < d; ++a)
      idx[static_cast<std::size_t>(a)] =
          static_cast<Index>(std::llround(std::ldexp(row[static_cast<std::size_t>(a)], level)));
    const Index flat = nodes.linear(idx);
    if (seen[static_cast<std::size_t>(flat)])
      throw ConfigError("'" + path + "': node listed twice");
    seen[static_cast<std::size_t>(flat)] = true;
    data.values[flat] = row[static_cast<std::size_t>(d)];
  }
  data.validate();
  return data;
}

}  // namespace

void write_expansion_csv(const SparseExpansion& e, std::ostream& os) {
  os << "# d=" << e.d << " r=" << e.r << "\n";
  os << "k";
  for (int a = 1; a <= e.d; ++a) os << ",s" << a;
  os << ",c\n";
  for (const ExpansionTerm& t : e.terms) {
    os << t.level;
    for (int a = 0; a < e.d; ++a) os << "," << t.s[static_cast<std::size_t>(a)];
    os << "," << fmt(t.c) << "\n";
  }
}

SparseExpansion read_expansion_csv(std::istream& is) {
  SparseExpansion e;
  bool have_header = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = strip(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      int d = 0;
      int r = 0;
      if (std::sscanf(t.c_str(), "# d=%d r=%d", &d, &r) == 2) {
        e.d = d;
        e.r = r;
        have_header = true;
      }
      continue;
    }
    if (t.find_first_not_of("0123456789+-.eE, \t") != std::string::npos) continue;  // names
    if (!have_header)
      throw ConfigError("expansion csv: missing '# d=<d> r=<r>' header before data");
    const auto fields = split_csv(t);
    if (static_cast<int>(fields.size()) != e.d + 2)
      throw ConfigError("expansion csv line " + std::to_string(lineno) + ": expected " +
                        std::to_string(e.d + 2) + " fields");
    ExpansionTerm term;
    term.level = static_cast<int>(parse_long(fields[0], "expansion csv"));
    term.s.resize(static_cast<std::size_t>(e.d));
    for (int a = 0; a < e.d; ++a)
      term.s[static_cast<std::size_t>(a)] =
          parse_long(fields[static_cast<std::size_t>(a) + 1], "expansion csv");
    term.c = parse_double(fields[static_cast<std::size_t>(e.d) + 1], "expansion csv");
    e.terms.push_back(std::move(term));
  }
  if (!have_header) throw ConfigError("expansion csv: missing '# d=<d> r=<r>' header");
  return e;
}

GridData read_grid_file(const std::string& path) {
  std::ifstream is = open_input(path);
  if (ends_with(path, ".csv")) return read_grid_csv(is, path);
  int d = 0;
  int level = 0;
  if (!(is >> d >> level))
    throw ConfigError("'" + path + "': expected a 'd m' header line");
  GridData data;
  data.d = d;
  data.level = level;
  if (d < 1 || d > kMaxDim || level < 0 || level > 52)
    throw ConfigError("'" + path + "': bad header d=" + std::to_string(d) +
                      " m=" + std::to_string(level));
  const Lattice nodes = Lattice::cube(0, data.nodes_per_axis() - 1, d);
  std::vector<double> raw;
  raw.reserve(static_cast<std::size_t>(nodes.size()));
  double v = 0.0;
  while (is >> v) raw.push_back(v);
  if (static_cast<Index>(raw.size()) != nodes.size())
    throw ConfigError("'" + path + "': got " + std::to_string(raw.size()) +
                      " values, grid needs " + std::to_string(nodes.size()));
  data.values = Eigen::Map<const Eigen::ArrayXd>(raw.data(), static_cast<Index>(raw.size()));
  data.validate();
  return data;
}

void write_grid_file(const GridData& data, const std::string& path) {
  data.validate();
  std::ofstream os = open_output(path);
  if (ends_with(path, ".csv")) {
    for (int a = 1; a <= data.d; ++a) os << "x" << a << ",";
    os << "value\n";
    const Lattice nodes = Lattice::cube(0, data.nodes_per_axis() - 1, data.d);
    nodes.for_each([&](const MultiIndex& idx, Index flat) {
      const Point x = grid_point(idx, data.level);
      for (int a = 0; a < data.d; ++a) os << fmt(x[a]) << ",";
      os << fmt(data.values[flat]) << "\n";
    });
    return;
  }
  os << data.d << " " << data.level << "\n";
  const Index per_axis = data.nodes_per_axis();
  for (Index i = 0; i < data.values.size(); ++i) {
    os << fmt(data.values[i]);
    os << (((i + 1) % per_axis == 0) ? "\n" : " ");
  }
}

QuasiInterpolantSpec read_spec_json(const std::string& path) {
  const json j = parse_json_file(path);
  if (!j.is_object()) throw ConfigError("'" + path + "': expected a JSON object");
  reject_unknown_keys(j, {"r", "mu", "lambda"}, "'" + path + "'");
  if (!j.contains("r") || !j.contains("mu") || !j.contains("lambda"))
    throw ConfigError("'" + path + "': need keys r, mu, lambda");
  if (!j["r"].is_number_integer() || !j["mu"].is_number_integer())
    throw ConfigError("'" + path + "': r and mu must be integers");
  const int r = j["r"].get<int>();
  const int mu = j["mu"].get<int>();
  if (!j["lambda"].is_array())
    throw ConfigError("'" + path + "': lambda must be an array");
  std::vector<double> lam;
  for (const auto& v : j["lambda"]) {
    if (!v.is_number()) throw ConfigError("'" + path + "': lambda entries must be numbers");
    lam.push_back(v.get<double>());
  }
  return QuasiInterpolantSpec::validated(
      r, mu, Eigen::Map<const Eigen::ArrayXd>(lam.data(), static_cast<Index>(lam.size())));
}

void write_spec_json(const QuasiInterpolantSpec& spec, const std::string& path) {
  json j;
  j["r"] = spec.r;
  j["mu"] = spec.mu;
  j["lambda"] = std::vector<double>(spec.lambda.data(), spec.lambda.data() + spec.lambda.size());
  std::ofstream os = open_output(path);
  os << j.dump(2) << "\n";
}

ExperimentConfig read_experiment_config(const std::string& path) {
  const json j = parse_json_file(path);
  if (!j.is_object()) throw ConfigError("'" + path + "': expected a JSON object");
  reject_unknown_keys(j,
                      {"target", "grid_file", "spec", "spec_file", "besov", "ladder",
                       "q_report", "resolution", "seed", "out", "quadrature_check"},
                      "'" + path + "'");
  ExperimentConfig cfg;
  if (j.contains("target")) cfg.target = j["target"].get<std::string>();
  if (j.contains("grid_file")) cfg.grid_file = j["grid_file"].get<std::string>();
  if (j.contains("spec")) cfg.spec_name = j["spec"].get<std::string>();
  if (j.contains("spec_file")) cfg.custom_spec = read_spec_json(j["spec_file"].get<std::string>());
  if (j.contains("besov")) {
    const json& b = j["besov"];
    reject_unknown_keys(b, {"alpha", "p", "theta", "q", "d"}, "'" + path + "' besov");
    if (b.contains("alpha")) cfg.bp.alpha = b["alpha"].get<double>();
    if (b.contains("p")) cfg.bp.p = parse_extended_number(b["p"], "besov p");
    if (b.contains("theta")) cfg.bp.theta = parse_extended_number(b["theta"], "besov theta");
    if (b.contains("q")) cfg.bp.q = parse_extended_number(b["q"], "besov q");
    if (b.contains("d")) cfg.bp.d = b["d"].get<int>();
  }
  if (j.contains("ladder")) {
    for (const auto& v : j["ladder"]) {
      if (!v.is_number_integer()) throw ConfigError("'" + path + "': ladder entries must be integers");
      cfg.ladder.push_back(v.get<long>());
    }
  }
  if (j.contains("q_report"))
    for (const auto& v : j["q_report"])
      cfg.q_report.push_back(parse_extended_number(v, "q_report entry"));
  if (j.contains("resolution")) cfg.resolution = j["resolution"].get<int>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("out")) cfg.out_path = j["out"].get<std::string>();
  if (j.contains("quadrature_check")) cfg.quadrature_check = j["quadrature_check"].get<bool>();
  return cfg;
}

std::string recovery_sidecar_json(const RecoveryResult& res) {
  json j;
  j["n"] = res.schedule.n;
  j["samples_used"] = res.samples_used;
  j["terms"] = res.expansion.terms.size();
  json sched;
  sched["linear"] = res.schedule.linear;
  sched["k_bar"] = res.schedule.k_bar;
  sched["k_star"] = res.schedule.k_star;
  sched["epsilon"] = res.schedule.epsilon;
  sched["lambda"] = res.schedule.lambda;
  sched["delta"] = res.schedule.delta;
  sched["stencil_bound"] = res.schedule.stencil_bound;
  sched["budgets"] = res.schedule.budgets;
  j["schedule"] = std::move(sched);
  json levels = json::array();
  for (const LevelDiagnostics& lv : res.levels) {
    json e;
    e["level"] = lv.level;
    e["n_k"] = lv.n_k;
    e["kept"] = lv.kept;
    e["scanned"] = lv.scanned;
    e["threshold"] = lv.threshold;
    e["lp_norm"] = lv.lp_norm;
    e["residual_q"] = lv.residual_q;
    levels.push_back(std::move(e));
  }
  j["levels"] = std::move(levels);
  return j.dump(2) + "\n";
}

void write_report_csv(const RateReport& report, std::ostream& os) {
  os << "n,samples_linear,err_linear,samples_adaptive,err_adaptive\n";
  for (const LadderRow& row : report.rows) {
    os << row.n << ",";
    if (row.samples_linear >= 0) os << row.samples_linear;
    os << ",";
    if (row.samples_linear >= 0) os << fmt(row.err_linear);
    os << ",";
    if (row.samples_adaptive >= 0) os << row.samples_adaptive;
    os << ",";
    if (row.samples_adaptive >= 0) os << fmt(row.err_adaptive);
    os << "\n";
  }
}

std::string report_json(const RateReport& report) {
  const auto fit_json = [](const std::optional<RateFit>& fit) {
    if (!fit) return json(nullptr);
    json f;
    f["slope"] = fit->slope;
    f["intercept"] = fit->intercept;
    f["residual"] = fit->residual;
    f["points"] = fit->points;
    f["excluded"] = fit->excluded;
    return f;
  };
  json j;
  json cfg;
  const ExperimentConfig& c = report.config;
  cfg["target"] = c.target;
  cfg["grid_file"] = c.grid_file;
  cfg["spec"] = c.spec_name;
  cfg["besov"] = {{"alpha", c.bp.alpha},
                  {"p", extended_number(c.bp.p)},
                  {"theta", extended_number(c.bp.theta)},
                  {"q", extended_number(c.bp.q)},
                  {"d", c.bp.d}};
  cfg["ladder"] = c.ladder;
  json qs = json::array();
  for (double q : c.q_report) qs.push_back(extended_number(q));
  cfg["q_report"] = std::move(qs);
  cfg["resolution"] = c.resolution;
  cfg["seed"] = c.seed;
  cfg["quadrature_check"] = c.quadrature_check;
  j["config"] = std::move(cfg);
  j["theory"] = {{"linear_slope", report.theory_linear},
                 {"adaptive_slope", report.theory_adaptive}};
  json rows = json::array();
  for (const LadderRow& row : report.rows) {
    json e;
    e["n"] = row.n;
    e["samples_linear"] = row.samples_linear;
    e["err_linear"] = row.err_linear;
    e["samples_adaptive"] = row.samples_adaptive;
    e["err_adaptive"] = row.err_adaptive;
    e["extra_linear"] = row.extra_linear;
    e["extra_adaptive"] = row.extra_adaptive;
    e["quadrature_flag"] = row.quadrature_flag;
    e["warning"] = row.warning;
    rows.push_back(std::move(e));
  }
  j["rows"] = std::move(rows);
  j["fit"] = {{"linear", fit_json(report.fit_linear)},
              {"adaptive", fit_json(report.fit_adaptive)},
              {"linear_full", fit_json(report.fit_linear_full)},
              {"adaptive_full", fit_json(report.fit_adaptive_full)}};
  j["warnings"] = report.warnings;
  return j.dump(2) + "\n";
}

}  // namespace bsrec
