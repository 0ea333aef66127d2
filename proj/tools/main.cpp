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

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bsrec/adaptive.hpp"
#include "bsrec/besov.hpp"
#include "bsrec/errors.hpp"
#include "bsrec/harness.hpp"
#include "bsrec/io.hpp"
#include "bsrec/multilevel.hpp"
#include "bsrec/oracle.hpp"
#include "bsrec/quasi.hpp"

namespace {

using namespace bsrec;

// "inf" is a legal value for the integrability parameters.
double parse_ext(const std::string& s, const std::string& what) {
  if (s == "inf" || s == "Inf" || s == "infinity")
    return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError(what + ": expected a number or 'inf', got '" + s + "'");
  }
  if (used != s.size())
    throw ConfigError(what + ": expected a number or 'inf', got '" + s + "'");
  return v;
}

struct CommonOpts {
  std::string out;
  int resolution = 0;
  std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, CommonOpts& c, const std::string& default_out) {
  c.out = default_out;
  cmd->add_option("--out", c.out, "output basename");
  cmd->add_option("--resolution", c.resolution, "quadrature points per axis (0 = default)");
  cmd->add_option("--seed", c.seed, "random seed for measurement probes");
}

struct TargetOpts {
  std::string target;
  std::string grid_file;
  int d = 1;
};

void add_target(CLI::App* cmd, TargetOpts& t) {
  cmd->add_option("--target", t.target, "closed-form target name, e.g. cusp(beta=0.6)");
  cmd->add_option("--grid-file", t.grid_file, "file of samples on a dyadic grid");
  cmd->add_option("--d", t.d, "dimension")->check(CLI::Range(1, int(kMaxDim)));
}

FunctionOracle make_target_oracle(const TargetOpts& t, std::optional<long> cap) {
  if (t.target.empty() == t.grid_file.empty())
    throw ConfigError("exactly one of --target / --grid-file must be given");
  if (!t.grid_file.empty()) {
    FunctionOracle o = from_grid(read_grid_file(t.grid_file));
    o.set_budget_cap(cap);
    return o;
  }
  return FunctionOracle(closed_form_target(t.target, t.d), t.d, cap);
}

struct SpecOpts {
  std::string name = "cubic";
  std::string file;
};

void add_spec(CLI::App* cmd, SpecOpts& s) {
  cmd->add_option("--spec", s.name, "built-in mask name (piecewise_linear, cubic)");
  cmd->add_option("--spec-file", s.file, "JSON mask file, overrides --spec");
}

QuasiInterpolantSpec resolve_spec(const SpecOpts& s) {
  if (!s.file.empty()) return read_spec_json(s.file);
  return QuasiInterpolantSpec::builtin(s.name);
}

struct BesovOpts {
  double alpha = 1.0;
  std::string p = "2";
  std::string theta = "2";
  std::string q = "2";
};

void add_besov(CLI::App* cmd, BesovOpts& b) {
  cmd->add_option("--alpha", b.alpha, "smoothness order");
  cmd->add_option("--p", b.p, "class integrability (number or inf)");
  cmd->add_option("--theta", b.theta, "class fine index (number or inf)");
  cmd->add_option("--q", b.q, "error norm exponent (number or inf)");
}

BesovParams resolve_besov(const BesovOpts& b, int d) {
  BesovParams bp;
  bp.alpha = b.alpha;
  bp.p = parse_ext(b.p, "--p");
  bp.theta = parse_ext(b.theta, "--theta");
  bp.q = parse_ext(b.q, "--q");
  bp.d = d;
  bp.validate();
  return bp;
}

int run_recover(const TargetOpts& t, const SpecOpts& sp, const BesovOpts& bo,
                const CommonOpts& co, long n, bool adaptive, const std::string& error_q) {
  const QuasiInterpolantSpec spec = resolve_spec(sp);
  FunctionOracle oracle = make_target_oracle(t, n);
  RecoveryResult res;
  if (adaptive) {
    res = recover_adaptive(oracle, spec, resolve_besov(bo, t.d), n);
  } else {
    res = recover_linear(oracle, spec, n);
  }
  {
    std::ofstream os(co.out + ".csv");
    if (!os) throw ConfigError("cannot open '" + co.out + ".csv' for writing");
    write_expansion_csv(res.expansion, os);
  }
  {
    std::ofstream os(co.out + ".json");
    if (!os) throw ConfigError("cannot open '" + co.out + ".json' for writing");
    os << recovery_sidecar_json(res);
  }
  std::cout << "samples_used " << res.samples_used << "\n"
            << "terms " << res.expansion.terms.size() << "\n";
  if (!error_q.empty()) {
    const double q = parse_ext(error_q, "--error-q");
    double err = 0.0;
    if (!t.grid_file.empty())
      err = lq_error_on_grid(read_grid_file(t.grid_file), res.expansion, q);
    else
      err = lq_error(closed_form_target(t.target, t.d), res.expansion, q, co.resolution);
    std::cout << "error_q " << err << "\n";
  }
  std::cout << "wrote " << co.out << ".csv " << co.out << ".json\n";
  return 0;
}

int run_bench(const std::string& config_path, ExperimentConfig overrides,
              const std::vector<std::string>& given) {
  ExperimentConfig cfg;
  if (!config_path.empty()) cfg = read_experiment_config(config_path);
  const auto has = [&](const std::string& flag) {
    for (const auto& g : given)
      if (g == flag) return true;
    return false;
  };
  if (has("--target")) cfg.target = overrides.target;
  if (has("--grid-file")) cfg.grid_file = overrides.grid_file;
  if (has("--spec")) cfg.spec_name = overrides.spec_name;
  if (overrides.custom_spec) cfg.custom_spec = overrides.custom_spec;
  if (has("--alpha")) cfg.bp.alpha = overrides.bp.alpha;
  if (has("--p")) cfg.bp.p = overrides.bp.p;
  if (has("--theta")) cfg.bp.theta = overrides.bp.theta;
  if (has("--q")) cfg.bp.q = overrides.bp.q;
  if (has("--d")) cfg.bp.d = overrides.bp.d;
  if (has("--ladder")) cfg.ladder = overrides.ladder;
  if (has("--resolution")) cfg.resolution = overrides.resolution;
  if (has("--seed")) cfg.seed = overrides.seed;
  if (has("--out")) cfg.out_path = overrides.out_path;
  if (has("--quadrature-check")) cfg.quadrature_check = overrides.quadrature_check;
  if (cfg.out_path.empty()) cfg.out_path = "report";

  const RateReport rep = run_ladder(cfg);
  {
    std::ofstream os(cfg.out_path + ".csv");
    if (!os) throw ConfigError("cannot open '" + cfg.out_path + ".csv' for writing");
    write_report_csv(rep, os);
  }
  {
    std::ofstream os(cfg.out_path + ".json");
    if (!os) throw ConfigError("cannot open '" + cfg.out_path + ".json' for writing");
    os << report_json(rep);
  }
  const auto show = [](const char* name, const std::optional<RateFit>& fit, double theory) {
    std::cout << name << ": theory " << theory;
    if (fit)
      std::cout << ", fitted " << fit->slope << " (residual " << fit->residual << ", "
                << fit->points << " points)";
    else
      std::cout << ", no fit";
    std::cout << "\n";
  };
  show("linear", rep.fit_linear, rep.theory_linear);
  if (cfg.bp.p < cfg.bp.q) show("adaptive", rep.fit_adaptive, rep.theory_adaptive);
  for (const auto& w : rep.warnings) std::cout << "warning: " << w << "\n";
  std::cout << "wrote " << cfg.out_path << ".csv " << cfg.out_path << ".json\n";
  return 0;
}

int run_decompose(const TargetOpts& t, const SpecOpts& sp, const CommonOpts& co, int k_bar,
                  int k_top) {
  const QuasiInterpolantSpec spec = resolve_spec(sp);
  if (k_bar < 0) k_bar = min_grid_level(spec.r);
  if (k_top < k_bar) throw ConfigError("decompose: --k-top must be >= --k-bar");
  FunctionOracle oracle = make_target_oracle(t, std::nullopt);
  const Decomposition dec = decompose(oracle, spec, k_bar, k_top, t.d);
  const SparseExpansion e = to_expansion(dec);
  std::ofstream os(co.out + ".csv");
  if (!os) throw ConfigError("cannot open '" + co.out + ".csv' for writing");
  write_expansion_csv(e, os);
  std::cout << "base level " << dec.base_level << ", top level " << dec.top_level()
            << ", samples " << oracle.samples() << "\n";
  for (const LevelCoefficients& c : dec.details)
    std::cout << "level " << c.level << " max|c| " << coeff_norm(c, std::numeric_limits<double>::infinity())
              << "\n";
  std::cout << "wrote " << co.out << ".csv\n";
  return 0;
}

int run_besov(const TargetOpts& t, const SpecOpts& sp, const BesovOpts& bo,
              const CommonOpts& co, bool nominal, int l, int k_max, int k_bar, int k_top) {
  const QuasiInterpolantSpec spec = resolve_spec(sp);
  BesovParams bp;
  if (nominal) {
    bool found = false;
    for (const CorpusEntry& e : corpus(t.d))
      if (e.name == t.target) {
        bp = e.nominal;
        found = true;
        break;
      }
    if (!found)
      throw ConfigError("--nominal: '" + t.target + "' is not a corpus entry for d = " +
                        std::to_string(t.d));
  } else {
    bp = resolve_besov(bo, t.d);
  }
  if (l <= 0) l = 2 * spec.r;
  if (k_bar < 0) k_bar = min_grid_level(spec.r);
  FunctionOracle oracle = make_target_oracle(t, std::nullopt);
  const SeminormEstimate b1 = besov_seminorm_B1(oracle, bp, l, k_max, co.seed, co.resolution);
  const Decomposition dec = decompose(oracle, spec, k_bar, k_top, t.d);
  const SeminormEstimate b3 = besov_discrete_B3(dec, bp);
  std::cout << "{\n"
            << "  \"b1\": {\"value\": " << b1.value << ", \"last_term\": " << b1.last_term
            << "},\n"
            << "  \"b3\": {\"value\": " << b3.value << ", \"last_term\": " << b3.last_term
            << "},\n"
            << "  \"ratio\": " << (b3.value > 0 ? b1.value / b3.value : 0.0) << "\n"
            << "}\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"B-spline quasi-interpolant sampling recovery"};
  app.require_subcommand(1);

  TargetOpts t_rec, t_dec, t_bes;
  SpecOpts sp_rec, sp_dec, sp_bes, sp_bench;
  BesovOpts bo_rec, bo_bench, bo_bes;
  CommonOpts co_rec, co_bench, co_dec, co_bes;

  // recover
  CLI::App* rec = app.add_subcommand("recover", "recover one function at one budget");
  long rec_n = 0;
  bool rec_adaptive = false;
  std::string rec_error_q;
  add_target(rec, t_rec);
  add_spec(rec, sp_rec);
  add_besov(rec, bo_rec);
  add_common(rec, co_rec, "recovery");
  rec->add_option("--n", rec_n, "sampling budget")->required();
  rec->add_flag("--adaptive", rec_adaptive, "greedy selection instead of one dense level");
  rec->add_option("--error-q", rec_error_q, "also report the recovery error in this norm");

  // bench
  CLI::App* bench = app.add_subcommand("bench", "run a budget ladder and fit rates");
  std::string bench_config;
  ExperimentConfig bench_over;
  bool bench_qcheck = false;
  bench->add_option("--config", bench_config, "JSON experiment config");
  bench->add_option("--target", bench_over.target, "closed-form target name");
  bench->add_option("--grid-file", bench_over.grid_file, "file of samples on a dyadic grid");
  bench->add_option("--d", bench_over.bp.d, "dimension")->check(CLI::Range(1, int(kMaxDim)));
  add_spec(bench, sp_bench);
  bench->add_option("--alpha", bo_bench.alpha, "smoothness order");
  bench->add_option("--p", bo_bench.p, "class integrability (number or inf)");
  bench->add_option("--theta", bo_bench.theta, "class fine index (number or inf)");
  bench->add_option("--q", bo_bench.q, "error norm exponent (number or inf)");
  bench->add_option("--ladder", bench_over.ladder, "budgets, strictly increasing");
  bench->add_flag("--quadrature-check", bench_qcheck, "re-estimate errors at doubled resolution");
  add_common(bench, co_bench, "");

  // decompose
  CLI::App* dec = app.add_subcommand("decompose", "emit multilevel coefficients");
  int dec_kbar = -1;
  int dec_ktop = 6;
  add_target(dec, t_dec);
  add_spec(dec, sp_dec);
  add_common(dec, co_dec, "decomposition");
  dec->add_option("--k-bar", dec_kbar, "base level (default: coarsest the mask allows)");
  dec->add_option("--k-top", dec_ktop, "finest level");

  // besov
  CLI::App* bes = app.add_subcommand("besov", "smoothness norm estimates for a target");
  bool bes_nominal = false;
  int bes_l = 0;
  int bes_kmax = 10;
  int bes_kbar = -1;
  int bes_ktop = 6;
  add_target(bes, t_bes);
  add_spec(bes, sp_bes);
  add_besov(bes, bo_bes);
  add_common(bes, co_bes, "");
  bes->add_flag("--nominal", bes_nominal, "use the corpus entry's nominal parameters");
  bes->add_option("--l", bes_l, "difference order (default 2r)");
  bes->add_option("--k-max", bes_kmax, "finest dyadic step 2^-k for the modulus");
  bes->add_option("--k-bar", bes_kbar, "decomposition base level");
  bes->add_option("--k-top", bes_ktop, "decomposition top level");

  try {
    app.parse(argc, argv);
    if (rec->parsed())
      return run_recover(t_rec, sp_rec, bo_rec, co_rec, rec_n, rec_adaptive, rec_error_q);
    if (bench->parsed()) {
      if (!sp_bench.file.empty()) bench_over.custom_spec = read_spec_json(sp_bench.file);
      bench_over.spec_name = sp_bench.name;
      bench_over.bp.alpha = bo_bench.alpha;
      bench_over.bp.p = parse_ext(bo_bench.p, "--p");
      bench_over.bp.theta = parse_ext(bo_bench.theta, "--theta");
      bench_over.bp.q = parse_ext(bo_bench.q, "--q");
      bench_over.resolution = co_bench.resolution;
      bench_over.seed = co_bench.seed;
      bench_over.out_path = co_bench.out;
      bench_over.quadrature_check = bench_qcheck;
      std::vector<std::string> given;
      for (const auto* opt : bench->get_options())
        if (opt->count() > 0) given.push_back(opt->get_name());
      return run_bench(bench_config, bench_over, given);
    }
    if (dec->parsed()) return run_decompose(t_dec, sp_dec, co_dec, dec_kbar, dec_ktop);
    if (bes->parsed())
      return run_besov(t_bes, sp_bes, bo_bes, co_bes, bes_nominal, bes_l, bes_kmax, bes_kbar,
                       bes_ktop);
    return 2;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const PrecisionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
