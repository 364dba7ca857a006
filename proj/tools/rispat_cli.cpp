// Copyright 2026 The rispat Authors
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

// rispat command-line tool: solve, oracle, bench, count.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "rispat/rispat.hpp"

namespace {

using rispat::json;

struct ScenarioFlags {
  std::string config;
  int n = 8;
  int m = 1;
  int d_antennas = 1;
  double two_bit_ratio = 0.5;
  std::string alphabet = "random";
  int k = 10;
  double gamma_dbm = 40.0;
  double noise_dbm = -50.0;
  double sigma0_sq = 1.0;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "Scenario JSON file (overrides the flags below)")
        ->check(CLI::ExistingFile);
    app->add_option("-N,--units", n, "Number of RIS units")->check(CLI::PositiveNumber);
    app->add_option("-M,--users", m, "Number of users")->check(CLI::PositiveNumber);
    app->add_option("-D,--antennas", d_antennas, "Transmit antennas")->check(CLI::PositiveNumber);
    app->add_option("--two-bit-ratio", two_bit_ratio, "Fraction of 2-bit units")
        ->check(CLI::Range(0.0, 1.0));
    app->add_option("--alphabet", alphabet, "random | uniform | parametric")
        ->check(CLI::IsMember({"random", "uniform", "parametric"}));
    app->add_option("--k", k, "Parametric alphabet index")->check(CLI::Range(1, 10));
    app->add_option("--gamma-dbm", gamma_dbm, "SNR floor in dB");
    app->add_option("--noise-dbm", noise_dbm, "Noise power per user in dBm");
    app->add_option("--sigma0-sq", sigma0_sq, "Channel variance");
  }

  rispat::ScenarioConfig build() const {
    if (!config.empty()) return rispat::load_json_file(config).get<rispat::ScenarioConfig>();
    rispat::ScenarioConfig s;
    s.users = m;
    s.antennas = d_antennas;
    s.panel_sizes = {n};
    s.two_bit_ratio = two_bit_ratio;
    s.alphabet = rispat::alphabet_kind_from(alphabet);
    s.parametric_k = k;
    if (s.alphabet == rispat::AlphabetKind::kParametric) {
      s.bit_profile.assign(n, 4);
      s.two_bit_ratio.reset();
    }
    s.gamma_dbm = gamma_dbm;
    s.noise_dbm = {noise_dbm};
    s.sigma0_sq = sigma0_sq;
    return s;
  }
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  auto out = rispat::open_output(path);
  out << text;
  rispat::check_written(out, path);
}

int run_solve(const ScenarioFlags& flags, std::string method, std::optional<int> d,
              std::optional<std::uint64_t> seed, int threads, std::uint64_t cap, int trials,
              const std::string& out) {
  const rispat::ScenarioConfig sc = flags.build();
  const rispat::ProblemInstance inst = rispat::make_instance(sc, seed.value_or(sc.seed));
  rispat::SolverOptions opt;
  opt.threads = threads;
  opt.exhaustive_cap = cap;
  if (method.empty()) method = d ? "epat" : "pat";
  rispat::SolveReport rep;
  if (method == "pat") {
    rep = rispat::pat_optimize(inst, opt);
  } else if (method == "epat") {
    rispat::EpatConfig ec = rispat::default_epat_config(inst);
    if (d) ec.d = *d;
    rep = rispat::epat_optimize(inst, ec, opt);
  } else if (method == "exhaustive") {
    rep = rispat::exhaustive_search(inst, opt);
  } else if (method == "eig_cpp") {
    rep = rispat::cpp_baseline(inst);
  } else {
    rep = rispat::random_baseline(inst, trials, rispat::mix_seed(seed.value_or(sc.seed), 2));
  }
  json doc = rispat::report_to_json(inst, rep);
  if (method == "epat") doc["d"] = d.value_or(inst.rank());
  doc["scenario"] = sc;
  doc["seed"] = seed.value_or(sc.seed);
  write_text(out, doc.dump(2) + "\n");
  return 0;
}

int run_bench(const std::string& target, std::optional<int> reps, std::optional<std::uint64_t> seed,
              int threads, std::optional<std::uint64_t> cap, bool no_timing, std::string out,
              std::string format) {
  rispat::ExperimentConfig cfg;
  if (std::filesystem::exists(target)) {
    cfg = rispat::experiment_from_json(rispat::load_json_file(target));
  } else {
    cfg = rispat::make_preset(target);
  }
  if (reps) cfg.repetitions = *reps;
  if (seed) cfg.seed = *seed;
  if (cap) cfg.exhaustive_cap = *cap;
  cfg.threads = threads;
  cfg.timing = !no_timing;
  cfg.validate();
  const rispat::ExperimentResult res = rispat::run_experiment(cfg);
  if (!out.empty()) {
    rispat::emit(cfg, res, format, out);
    std::cerr << "wrote " << out << '\n';
    return 0;
  }
  if (format == "json") {
    json doc{{"config", rispat::experiment_to_json(cfg)}};
    if (cfg.id == "table1") doc["rows"] = res.metrics;
    else if (cfg.id == "fig11") doc["rows"] = res.counts;
    else doc["rows"] = res.sweep;
    std::cout << doc.dump(2) << '\n';
  } else if (cfg.id == "table1") {
    rispat::write_metrics_csv(std::cout, res.metrics);
  } else if (cfg.id == "fig11") {
    rispat::write_counts_csv(std::cout, res.counts);
  } else {
    rispat::write_sweep_csv(std::cout, res.sweep);
  }
  return 0;
}

int run_count(int n, double ratio, const std::vector<int>& bits, int md, std::optional<int> d,
              const std::string& format, const std::string& out) {
  const std::vector<int> sizes = bits.empty() ? rispat::two_bit_mix(n, ratio) : bits;
  std::vector<rispat::PhaseAlphabet> alphabets;
  for (int b : sizes) alphabets.push_back(rispat::uniform_alphabet(b));
  const int lp = 2 * md - 1;
  std::vector<std::pair<std::string, int>> rows{{"pat", lp}};
  if (d) rows.emplace_back("epat", *d);
  const auto pat = rispat::candidate_count(alphabets, lp);
  std::ostringstream os;
  json doc = json::array();
  if (format == "csv") {
    os << "method,N,MD,L,candidates,exhaustive,log10_candidates,db_below_exhaustive,"
          "ratio_vs_pat_pct,ratio_vs_exhaustive_pct\n";
  }
  for (const auto& [method, l] : rows) {
    const auto c = rispat::candidate_count(alphabets, l);
    const double db = c.reduction_db();
    const double vs_pat = rispat::CandidateCount::percent(c.traversal, pat.traversal);
    const double vs_ex = rispat::CandidateCount::percent(c.traversal, c.exhaustive);
    const double lg = rispat::CandidateCount::log10_big(c.traversal);
    if (format == "csv") {
      os << method << ',' << sizes.size() << ',' << md << ',' << l << ',' << c.traversal << ','
         << c.exhaustive << ',' << rispat::format_double(lg) << ',' << rispat::format_double(db)
         << ',' << rispat::format_double(vs_pat) << ',' << rispat::format_double(vs_ex) << '\n';
    } else {
      doc.push_back({{"method", method}, {"N", sizes.size()}, {"MD", md}, {"L", l},
                     {"candidates", c.traversal.str()}, {"exhaustive", c.exhaustive.str()},
                     {"log10_candidates", lg}, {"db_below_exhaustive", db},
                     {"ratio_vs_pat_pct", vs_pat}, {"ratio_vs_exhaustive_pct", vs_ex}});
    }
  }
  write_text(out, format == "csv" ? os.str() : doc.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete-phase RIS beamforming: PAT / E-PAT solvers and benchmarks"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  std::optional<int> d;
  int threads = 1;
  std::string out;
  std::string format = "csv";
  std::uint64_t cap = rispat::kDefaultExhaustiveCap;
  std::optional<std::uint64_t> cap_override;

  auto* solve = app.add_subcommand("solve", "Solve one seeded instance, print the report as JSON");
  ScenarioFlags solve_flags;
  solve_flags.attach(solve);
  std::string method;
  int random_trials = 1000;
  solve->add_option("--method", method, "pat | epat | exhaustive | eig_cpp | random")
      ->check(CLI::IsMember({"pat", "epat", "exhaustive", "eig_cpp", "random"}));
  solve->add_option("--d", d, "E-PAT equations per system (implies --method epat)")
      ->check(CLI::PositiveNumber);
  solve->add_option("--random-trials", random_trials, "Samples for the random baseline")
      ->check(CLI::PositiveNumber);

  auto* oracle = app.add_subcommand("oracle", "Exhaustive search on one seeded instance");
  ScenarioFlags oracle_flags;
  oracle_flags.attach(oracle);

  auto* bench = app.add_subcommand("bench", "Run a preset or a JSON experiment config");
  std::string target;
  std::optional<int> reps;
  bool no_timing = false;
  bench->add_option("target", target, "fig7 | fig8 | fig9 | fig10 | fig11 | table1 | config.json")
      ->required();
  bench->add_option("--reps", reps, "Repetitions per sweep point")->check(CLI::PositiveNumber);
  bench->add_flag("--no-timing", no_timing, "Write 0 for wall times (byte-stable output)");
  bench->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));

  auto* count = app.add_subcommand("count", "Closed-form candidate counts");
  int count_n = 20;
  double count_ratio = 0.5;
  std::vector<int> bits;
  int md = 1;
  count->add_option("-N,--units", count_n, "Number of units")->check(CLI::PositiveNumber);
  count->add_option("--two-bit-ratio", count_ratio, "Fraction of 2-bit units")
      ->check(CLI::Range(0.0, 1.0));
  count->add_option("--bits", bits, "Explicit alphabet sizes b_n (overrides -N)")->delimiter(',');
  count->add_option("--md", md, "M*D")->check(CLI::PositiveNumber);
  count->add_option("--d", d, "E-PAT equations per system")->check(CLI::PositiveNumber);
  count->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));

  for (auto* sub : {solve, oracle, bench}) {
    sub->add_option("--seed", seed, "Master seed");
    sub->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  }
  for (auto* sub : {solve, oracle}) {
    sub->add_option("--exhaustive-cap", cap, "Largest exhaustive domain allowed");
  }
  bench->add_option("--exhaustive-cap", cap_override, "Largest exhaustive domain allowed");
  for (auto* sub : {solve, oracle, bench, count}) {
    sub->add_option("--out", out, "Output path (stdout when omitted)");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) {
      return run_solve(solve_flags, method, d, seed, threads, cap, random_trials, out);
    }
    if (*oracle) {
      return run_solve(oracle_flags, "exhaustive", std::nullopt, seed, threads, cap, 1, out);
    }
    if (*bench) {
      return run_bench(target, reps, seed, threads, cap_override, no_timing, out, format);
    }
    return run_count(count_n, count_ratio, bits, md, d, format, out);
  } catch (const rispat::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return 3;
  } catch (const rispat::DomainTooLargeError& e) {
    std::cerr << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
