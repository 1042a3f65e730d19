// Command-line front end: region computation, Monte Carlo simulation,
// parameter sweeps, invariant verification, and bin statistics. Exit codes:
// 0 success, 1 suite/verification failure, 2 usage or config error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ratesim/bc.hpp"
#include "ratesim/config.hpp"
#include "ratesim/csv.hpp"
#include "ratesim/detic.hpp"
#include "ratesim/region.hpp"
#include "ratesim/suites.hpp"

namespace {

using namespace ratesim;

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<long> trials;
};

ScenarioConfig load_scenario(const CommonOpts& opts) {
  ScenarioConfig sc = load_config(opts.config_path);
  if (opts.seed) {
    sc.neg.seed = *opts.seed;
    sc.ic.seed = *opts.seed;
  }
  if (opts.trials) sc.trials = *opts.trials;
  return sc;
}

std::string out_path(const CommonOpts& opts, const std::string& name) {
  std::filesystem::create_directories(opts.out_dir);
  return (std::filesystem::path(opts.out_dir) / name).string();
}

int cmd_region(const CommonOpts& opts) {
  ScenarioConfig sc = load_scenario(opts);
  if (sc.kind != "neg-bc") {
    std::cerr << "region: requires a neg-bc config\n";
    return 2;
  }
  MIProfile mi = mi_profile(chain_compose(sc.neg.source, sc.neg.channel));
  RegionUnion nonunique{{project_region(build_nonunique_system(mi))}};
  RegionUnion jointunique;
  for (const ConstraintSystem& s : build_jointunique_systems(mi)) {
    jointunique.parts.push_back(project_region(s));
  }

  std::vector<CsvRow> rows;
  auto emit = [&rows](const char* region, const RegionUnion& u) {
    for (std::size_t part = 0; part < u.parts.size(); ++part) {
      if (u.parts[part].infeasible) {
        rows.push_back({region, std::to_string(part), "", "", "", "infeasible"});
        continue;
      }
      for (const auto& h : u.parts[part].halfplanes) {
        rows.push_back({region, std::to_string(part), std::to_string(h.a),
                        std::to_string(h.b), fmt_g12(h.c), "ok"});
      }
    }
  };
  emit("nonunique", nonunique);
  emit("jointunique", jointunique);
  write_csv(out_path(opts, "region.csv"),
            {"region", "part", "a", "b", "c", "status"}, rows);

  CompareResult cr = compare_regions(nonunique, jointunique, 1e-6, 200);
  const char* verdict = cr.verdict == CompareResult::Verdict::kEqual ? "equal"
                        : cr.verdict == CompareResult::Verdict::kANotSubsetB
                            ? "nonunique_not_subset"
                            : "jointunique_not_subset";
  for (const auto& h : nonunique.parts[0].halfplanes) {
    std::cout << "nonunique: " << h.a << "*R0 + " << h.b << "*R1 <= " << fmt_g12(h.c) << "\n";
  }
  std::cout << "comparison: " << verdict << "\n";
  return cr.verdict == CompareResult::Verdict::kEqual ? 0 : 1;
}

std::vector<CsvRow> simulate_rows(const ScenarioConfig& sc, int n) {
  if (sc.kind == "neg-bc") {
    NegSchemeConfig cfg = sc.neg;
    cfg.n = n;
    TrialStats st = run_trials(cfg, sc.trials, sc.fresh_codebook_every);
    return trial_stats_rows(st, n, cfg.eps);
  }
  ICConfig cfg = sc.ic;
  cfg.n = n;
  ICTrialStats st = ic_run_trials(cfg, sc.trials, sc.fresh_codebook_every);
  return ic_trial_stats_rows(st, n, cfg.eps);
}

int cmd_simulate(const CommonOpts& opts) {
  ScenarioConfig sc = load_scenario(opts);
  std::vector<CsvRow> rows;
  for (int n : sc.n_list) {
    auto r = simulate_rows(sc, n);
    rows.insert(rows.end(), r.begin(), r.end());
  }
  std::string path = out_path(opts, "stats.csv");
  write_csv(path, kStatsHeader, rows);
  std::cout << "wrote " << path << "\n";
  return 0;
}

int cmd_sweep(const CommonOpts& opts, const std::string& param,
              const std::vector<double>& values) {
  if (values.empty()) {
    std::cerr << "sweep: --values must be nonempty\n";
    return 2;
  }
  ScenarioConfig base = load_scenario(opts);
  std::vector<CsvRow> rows;
  for (double v : values) {
    ScenarioConfig sc = base;
    int n = sc.n_list.front();
    if (param == "n") {
      n = static_cast<int>(v);
    } else if (param == "eps") {
      sc.neg.eps = v;
      sc.ic.eps = v;
    } else if (sc.kind == "neg-bc") {
      bool known = false;
      for (int var = 0; var < kNumRateVars; ++var) {
        if (param == kRateVarNames[var]) {
          sc.neg.rates.set(var, v);
          known = true;
        }
      }
      if (!known) {
        std::cerr << "sweep: unknown parameter '" << param << "'\n";
        return 2;
      }
    } else if (param == "r1" || param == "r2" || param == "r3") {
      sc.ic.rates[static_cast<std::size_t>(param[1] - '1')] = v;
    } else {
      std::cerr << "sweep: unknown parameter '" << param << "'\n";
      return 2;
    }
    for (CsvRow& r : simulate_rows(sc, n)) {
      r.insert(r.begin(), fmt_g12(v));
      r.insert(r.begin(), param);
      rows.push_back(std::move(r));
    }
  }
  CsvRow header = kStatsHeader;
  header.insert(header.begin(), "value");
  header.insert(header.begin(), "param");
  std::string path = out_path(opts, "sweep.csv");
  write_csv(path, header, rows);
  std::cout << "wrote " << path << "\n";
  return 0;
}

int cmd_verify(std::uint64_t seed, const std::string& suite) {
  std::vector<SuiteResult> results;
  if (suite == "all") {
    results = run_all_suites(seed);
  } else if (suite == "pointwise") {
    results.push_back(run_pointwise_suite(seed, 20, 1000));
  } else if (suite == "projection") {
    results.push_back(run_projection_suite(seed, 10, 1e-6, 200));
  } else if (suite == "implications") {
    results.push_back(run_implication_suite(seed, 10000));
  } else if (suite == "concentration") {
    results.push_back(run_concentration_suite(seed, 500));
  } else {
    std::cerr << "verify: unknown suite '" << suite
              << "' (expected pointwise|projection|implications|concentration|all)\n";
    return 2;
  }
  bool all_pass = true;
  for (const SuiteResult& r : results) {
    std::cout << (r.pass ? "PASS" : "FAIL") << " " << r.name << ": " << r.details << "\n";
    all_pass = all_pass && r.pass;
  }
  return all_pass ? 0 : 1;
}

int cmd_bins(const CommonOpts& opts) {
  ScenarioConfig sc = load_scenario(opts);
  if (sc.kind != "neg-bc") {
    std::cerr << "bins: requires a neg-bc config\n";
    return 2;
  }
  BinStats bs = bin_statistics(sc.neg, sc.draws, sc.delta);
  ConcentrationReport rep = concentration_check(bs);

  std::vector<CsvRow> rows;
  for (std::size_t i = 0; i < bs.n1.size(); ++i) {
    rows.push_back({std::to_string(i), std::to_string(bs.n1[i]), std::to_string(bs.n2[i]),
                    std::to_string(bs.n3[i])});
  }
  write_csv(out_path(opts, "bins.csv"), {"draw", "n1", "n2", "n3"}, rows);

  std::vector<CsvRow> crows = {
      {"alpha1", fmt_g12(rep.alpha1)},
      {"beta1", fmt_g12(rep.beta1)},
      {"alpha2", fmt_g12(rep.alpha2)},
      {"beta2", fmt_g12(rep.beta2)},
      {"p_l", fmt_g12(bs.p_l)},
      {"p_u", fmt_g12(bs.p_u)},
      {"n2_tail_empirical", fmt_g12(rep.emp_n2_tail)},
      {"n2_tail_bound", fmt_g12(rep.bound_n2)},
      {"n3_tail_empirical", fmt_g12(rep.emp_n3_tail)},
      {"n3_tail_bound", fmt_g12(rep.bound_n3)},
      {"pass", rep.pass ? "1" : "0"},
  };
  write_csv(out_path(opts, "concentration.csv"), {"quantity", "value"}, crows);
  std::cout << "concentration check: " << (rep.pass ? "pass" : "fail") << "\n";
  return rep.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rate-region and decoder simulation toolkit"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::uint64_t verify_seed = 0;
  std::string suite = "all";
  std::string param;
  std::vector<double> values;

  auto add_common = [&opts](CLI::App* cmd, bool need_config) {
    auto* c = cmd->add_option("--config", opts.config_path, "scenario config (JSON)");
    if (need_config) c->required();
    cmd->add_option("--out-dir", opts.out_dir, "output directory");
    cmd->add_option("--seed", [&opts](const std::vector<std::string>& v) {
      opts.seed = std::stoull(v[0]);
      return true;
    }, "override the config seed");
    cmd->add_option("--trials", [&opts](const std::vector<std::string>& v) {
      opts.trials = std::stol(v[0]);
      return true;
    }, "override the config trial count");
  };

  CLI::App* region = app.add_subcommand("region", "project and compare rate regions");
  add_common(region, true);
  CLI::App* simulate = app.add_subcommand("simulate", "run Monte Carlo decoder trials");
  add_common(simulate, true);
  CLI::App* sweep = app.add_subcommand("sweep", "vary one parameter over a list");
  add_common(sweep, true);
  sweep->add_option("--param", param, "parameter to vary")->required();
  sweep->add_option("--values", values, "values to sweep")->required()->delimiter(',');
  CLI::App* verify = app.add_subcommand("verify", "run the invariant suites");
  verify->add_option("--suite", suite, "pointwise|projection|implications|concentration|all");
  verify->add_option("--seed", verify_seed, "suite seed");
  CLI::App* bins = app.add_subcommand("bins", "satellite-pair bin statistics");
  add_common(bins, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    std::cerr << app.help();
    return 2;
  }

  try {
    if (region->parsed()) return cmd_region(opts);
    if (simulate->parsed()) return cmd_simulate(opts);
    if (sweep->parsed()) return cmd_sweep(opts, param, values);
    if (verify->parsed()) return cmd_verify(verify_seed, suite);
    if (bins->parsed()) return cmd_bins(opts);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
