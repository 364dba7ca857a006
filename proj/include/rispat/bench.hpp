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

// Experiment harness: presets, seeded trials, Table-style metrics and
// CSV/JSON emission. Output bytes are a function of (config, seed) only,
// except wall-time columns, which are zeroed when timing is disabled.

#ifndef RISPAT_BENCH_HPP_
#define RISPAT_BENCH_HPP_

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "rispat/baselines.hpp"
#include "rispat/config.hpp"
#include "rispat/epat.hpp"
#include "rispat/pat.hpp"

namespace rispat {

struct SolverSelection {
  bool pat = true;
  std::vector<int> epat_d;
  bool eig_cpp = true;
  int random_trials = 0;             // 0 disables the random baseline
  std::string exhaustive = "auto";  // auto | on | off
};

/// One sweep point: a scenario plus which solvers run on it.
struct SweepPoint {
  std::string variable;  // swept quantity, e.g. "k" or "N"
  double value = 0.0;
  std::string label;  // free-form tag such as the alphabet kind
  ScenarioConfig scenario;
  SolverSelection solvers;
};

struct CountSweep {
  std::vector<int> n_values;
  std::vector<double> ratios;
  std::vector<int> ranks;  // MD values
};

struct ExperimentConfig {
  std::string id = "custom";  // fig7|fig8|fig9|fig10|fig11|table1|custom
  std::vector<SweepPoint> points;
  CountSweep counts;  // fig11 only
  int repetitions = 500;
  std::uint64_t seed = 1;
  std::uint64_t exhaustive_cap = kDefaultExhaustiveCap;
  int threads = 1;
  bool timing = true;

  void validate() const {
    if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
    if (id == "fig11") {
      if (counts.n_values.empty() || counts.ratios.empty() || counts.ranks.empty()) {
        throw std::invalid_argument("fig11 sweep ranges must be nonempty");
      }
    } else if (points.empty()) {
      throw std::invalid_argument("experiment has an empty sweep");
    }
  }
};

/// One solver run on one seeded instance.
struct TrialRecord {
  int point = 0;
  std::string variable;
  double value = 0.0;
  std::string label;
  int n = 0, m = 0, d_antennas = 0;
  int rep = 0;
  std::uint64_t seed = 0;
  std::string method;
  int d = 0;  // E-PAT equations per system, 0 for other methods
  std::string status = "ok";
  double objective = 0.0;
  double mu_max = 0.0;
  double power_dbm = 0.0;
  std::uint64_t systems = 0;
  std::uint64_t rejected = 0;
  std::uint64_t candidate_slots = 0;
  std::uint64_t evaluated = 0;
  double wall_ms = 0.0;
  // Closed-form complexity ratios (E-PAT rows only), percent.
  double ratio_vs_pat_pct = 0.0;
  double ratio_vs_exhaustive_pct = 0.0;
};

/// One row of the table1 preset.
struct MetricsRow {
  int n = 0;
  int md = 0;
  int d = 0;
  double rel_err_mean = 0.0;  // mean (obj_ref - obj) / obj_ref, a fraction
  double ratio_vs_pat_pct = 0.0;
  double ratio_vs_exhaustive_pct = 0.0;
  double opt_prob_pct = 0.0;
  double wall_ms_mean = 0.0;
  int trials = 0;
  int excluded = 0;  // reference objective was zero
  std::string oracle = "pat";
};

/// Per-(sweep point, method) aggregate for the figure presets.
struct SweepRow {
  std::string variable;
  double value = 0.0;
  std::string label;
  std::string method;
  int d = 0;
  int n = 0, m = 0, d_antennas = 0;
  int trials = 0;
  int failed = 0;
  double objective_mean = 0.0;
  double power_dbm_mean = 0.0;
  double gap_db_mean = 0.0;  // power above the oracle, dB
  double opt_prob_pct = 0.0;
  std::string oracle;  // exhaustive | pat | none
  double candidates_mean = 0.0;
  double wall_ms_mean = 0.0;
};

struct CountRow {
  int n = 0;
  double ratio = 0.0;
  int md = 0;
  std::string method;  // pat | epat | exhaustive
  int l = 0;
  double log10_count = 0.0;
  double db_below_exhaustive = 0.0;
  double db_below_pat = 0.0;
};

struct ExperimentResult {
  std::vector<TrialRecord> trials;
  std::vector<MetricsRow> metrics;  // table1
  std::vector<SweepRow> sweep;      // figure presets and custom
  std::vector<CountRow> counts;     // fig11
};

/// Paired E-PAT/reference outcome, the input of compute_metrics.
struct PairedTrial {
  double reference = 0.0;
  double candidate = 0.0;
  double wall_ms = 0.0;
  double ratio_vs_pat_pct = 0.0;
  double ratio_vs_exhaustive_pct = 0.0;
};

inline constexpr double kOptimalityTolerance = 1e-9;

/// table1 metrics over trials sharing one (N, MD, d).
inline MetricsRow compute_metrics(const std::vector<PairedTrial>& trials, int n, int md, int d) {
  MetricsRow row;
  row.n = n;
  row.md = md;
  row.d = d;
  int used = 0, optimal = 0;
  double err = 0.0, wall = 0.0, rp = 0.0, re = 0.0;
  for (const auto& t : trials) {
    if (!(t.reference > 0.0)) {
      ++row.excluded;
      continue;
    }
    ++used;
    err += (t.reference - t.candidate) / t.reference;
    if (t.candidate >= t.reference * (1.0 - kOptimalityTolerance)) ++optimal;
    wall += t.wall_ms;
    rp += t.ratio_vs_pat_pct;
    re += t.ratio_vs_exhaustive_pct;
  }
  row.trials = used;
  if (used > 0) {
    row.rel_err_mean = err / used;
    row.opt_prob_pct = 100.0 * optimal / used;
    row.wall_ms_mean = wall / used;
    row.ratio_vs_pat_pct = rp / used;
    row.ratio_vs_exhaustive_pct = re / used;
  }
  return row;
}

// ---------------------------------------------------------------------------
// Presets. Parameters the experiments do not pin down (N, channel variance,
// repetitions, M/D split of MD) are ordinary defaults and can be overridden
// from a config file.

inline ScenarioConfig preset_scenario(int n, int m, int d) {
  ScenarioConfig s;
  s.users = m;
  s.antennas = d;
  s.panel_sizes = {n};
  s.two_bit_ratio = 0.5;
  s.gamma_dbm = 40.0;
  s.noise_dbm = {-50.0};
  s.sigma0_sq = 1.0;
  return s;
}

inline ExperimentConfig make_preset(const std::string& id, const json& overrides = json::object()) {
  ExperimentConfig cfg;
  cfg.id = id;
  cfg.repetitions = overrides.value("repetitions", 500);
  cfg.seed = overrides.value("seed", std::uint64_t{1});
  if (id == "table1") {
    // Rows (N, MD, d); the rank MD is realized as one user with MD antennas.
    json rows = overrides.value(
        "rows", json::array({{20, 2, 1}, {20, 2, 2}, {20, 3, 1}, {20, 3, 2}, {20, 3, 3}}));
    std::map<std::pair<int, int>, std::vector<int>> grouped;
    for (const auto& r : rows) grouped[{r.at(0).get<int>(), r.at(1).get<int>()}].push_back(r.at(2).get<int>());
    for (auto& [key, ds] : grouped) {
      SweepPoint p;
      p.variable = "N";
      p.value = key.first;
      p.label = "MD=" + std::to_string(key.second);
      p.scenario = preset_scenario(key.first, 1, key.second);
      p.scenario.two_bit_ratio = overrides.value("two_bit_ratio", 0.5);
      p.solvers.pat = true;
      p.solvers.eig_cpp = false;
      p.solvers.exhaustive = "off";
      std::sort(ds.begin(), ds.end());
      p.solvers.epat_d = ds;
      cfg.points.push_back(std::move(p));
    }
  } else if (id == "fig7") {
    const int n = overrides.value("N", 8);
    for (const std::string kind : {"uniform", "random"}) {
      for (int bits = 1; bits <= 7; ++bits) {
        SweepPoint p;
        p.variable = "bits";
        p.value = bits;
        p.label = kind;
        p.scenario = preset_scenario(n, 1, 1);
        p.scenario.two_bit_ratio.reset();
        p.scenario.bit_profile.assign(n, 1 << bits);
        p.scenario.alphabet = alphabet_kind_from(kind);
        cfg.points.push_back(std::move(p));
      }
    }
  } else if (id == "fig8") {
    const int n = overrides.value("N", 10);
    for (int k = 1; k <= 10; ++k) {
      SweepPoint p;
      p.variable = "k";
      p.value = k;
      p.label = "parametric";
      p.scenario = preset_scenario(n, 1, overrides.value("D", 1));
      p.scenario.two_bit_ratio.reset();
      p.scenario.bit_profile.assign(n, 4);
      p.scenario.alphabet = AlphabetKind::kParametric;
      p.scenario.parametric_k = k;
      cfg.points.push_back(std::move(p));
    }
  } else if (id == "fig9") {
    const int n = overrides.value("N", 10);
    for (int i = 0; i <= 10; ++i) {
      SweepPoint p;
      p.variable = "two_bit_ratio";
      p.value = i / 10.0;
      p.label = "random";
      p.scenario = preset_scenario(n, 1, overrides.value("D", 2));
      p.scenario.two_bit_ratio = i / 10.0;
      cfg.points.push_back(std::move(p));
    }
  } else if (id == "fig10") {
    const auto ns = overrides.value("N_values", std::vector<int>{4, 6, 8, 10});
    for (const auto& [m, d] : std::vector<std::pair<int, int>>{{1, 1}, {1, 2}, {3, 1}, {2, 2}}) {
      for (int n : ns) {
        SweepPoint p;
        p.variable = "N";
        p.value = n;
        p.label = "M=" + std::to_string(m) + ",D=" + std::to_string(d);
        p.scenario = preset_scenario(n, m, d);
        for (int dd = 1; dd <= m * d && dd < 2 * m * d - 1; ++dd) p.solvers.epat_d.push_back(dd);
        cfg.points.push_back(std::move(p));
      }
    }
  } else if (id == "fig11") {
    cfg.counts.n_values = overrides.value("N_values", std::vector<int>{10, 20, 30, 40, 50, 60, 70, 80, 90, 100});
    cfg.counts.ratios = overrides.value("ratios", std::vector<double>{0.2, 0.5, 0.8});
    cfg.counts.ranks = overrides.value("ranks", std::vector<int>{1, 2, 3});
    cfg.repetitions = 1;
  } else {
    throw std::invalid_argument("unknown preset: " + id);
  }
  return cfg;
}

inline void from_json(const json& j, SolverSelection& s) {
  s.pat = j.value("pat", true);
  s.epat_d = j.value("epat_d", std::vector<int>{});
  s.eig_cpp = j.value("eig_cpp", true);
  s.random_trials = j.value("random_trials", 0);
  s.exhaustive = j.value("exhaustive", std::string("auto"));
  if (s.exhaustive != "auto" && s.exhaustive != "on" && s.exhaustive != "off") {
    throw std::invalid_argument("solvers.exhaustive must be auto, on or off");
  }
}

inline void to_json(json& j, const SolverSelection& s) {
  j = json{{"pat", s.pat}, {"epat_d", s.epat_d}, {"eig_cpp", s.eig_cpp},
           {"random_trials", s.random_trials}, {"exhaustive", s.exhaustive}};
}

/// Config document: {"experiment": preset-or-"custom", "repetitions", "seed",
/// "exhaustive_cap", "scenario": {...}, "solvers": {...}, "sweep": {...}} plus
/// preset-specific overrides.
inline ExperimentConfig experiment_from_json(const json& j) {
  const std::string id = j.value("experiment", std::string("custom"));
  ExperimentConfig cfg;
  if (id != "custom") {
    cfg = make_preset(id, j);
  } else {
    cfg.id = "custom";
    cfg.repetitions = j.value("repetitions", 500);
    cfg.seed = j.value("seed", std::uint64_t{1});
    const ScenarioConfig base = j.at("scenario").get<ScenarioConfig>();
    SolverSelection solvers;
    if (j.contains("solvers")) solvers = j.at("solvers").get<SolverSelection>();
    std::vector<double> values{0.0};
    std::string variable = "none";
    if (j.contains("sweep")) {
      variable = j.at("sweep").at("variable").get<std::string>();
      values = j.at("sweep").at("values").get<std::vector<double>>();
      if (values.empty()) throw std::invalid_argument("sweep.values must be nonempty");
    }
    for (double v : values) {
      SweepPoint p;
      p.variable = variable;
      p.value = v;
      p.label = to_string(base.alphabet);
      p.scenario = base;
      p.solvers = solvers;
      if (variable == "N") {
        p.scenario.panel_sizes = {static_cast<int>(v)};
        p.scenario.bit_profile.clear();
        if (!p.scenario.two_bit_ratio) p.scenario.two_bit_ratio = 0.5;
      } else if (variable == "two_bit_ratio") {
        p.scenario.two_bit_ratio = v;
        p.scenario.bit_profile.clear();
      } else if (variable == "k") {
        p.scenario.alphabet = AlphabetKind::kParametric;
        p.scenario.parametric_k = static_cast<int>(v);
      } else if (variable == "gamma_dbm") {
        p.scenario.gamma_dbm = v;
      } else if (variable != "none") {
        throw std::invalid_argument("unsupported sweep variable: " + variable);
      }
      cfg.points.push_back(std::move(p));
    }
  }
  if (j.contains("exhaustive_cap")) cfg.exhaustive_cap = j.at("exhaustive_cap").get<std::uint64_t>();
  if (j.contains("solvers") && id != "custom") {
    for (auto& p : cfg.points) p.solvers = j.at("solvers").get<SolverSelection>();
  }
  cfg.validate();
  return cfg;
}

inline json experiment_to_json(const ExperimentConfig& cfg) {
  json j{{"experiment", cfg.id},
         {"repetitions", cfg.repetitions},
         {"seed", cfg.seed},
         {"exhaustive_cap", cfg.exhaustive_cap},
         {"timing", cfg.timing},
         {"points", json::array()}};
  for (const auto& p : cfg.points) {
    j["points"].push_back({{"variable", p.variable},
                           {"value", p.value},
                           {"label", p.label},
                           {"scenario", p.scenario},
                           {"solvers", p.solvers}});
  }
  if (cfg.id == "fig11") {
    j["N_values"] = cfg.counts.n_values;
    j["ratios"] = cfg.counts.ratios;
    j["ranks"] = cfg.counts.ranks;
  }
  return j;
}

// ---------------------------------------------------------------------------

namespace detail {

inline TrialRecord record_from(const SweepPoint& p, int point, int rep, std::uint64_t seed,
                               const ProblemInstance& inst, const SolveReport& r, int d,
                               bool timing) {
  TrialRecord t;
  t.point = point;
  t.variable = p.variable;
  t.value = p.value;
  t.label = p.label;
  t.n = inst.units();
  t.m = inst.users;
  t.d_antennas = inst.antennas;
  t.rep = rep;
  t.seed = seed;
  t.method = r.method == "eig_cpp" ? "EIG+CPP" : r.method;
  t.d = d;
  t.objective = r.objective;
  t.mu_max = r.mu_max;
  t.power_dbm = r.power.dbm;
  t.systems = r.systems;
  t.rejected = r.systems_rejected;
  t.candidate_slots = r.candidate_slots;
  t.evaluated = r.candidates_evaluated;
  t.wall_ms = timing ? r.wall_ms : 0.0;
  return t;
}

inline TrialRecord failed_record(const SweepPoint& p, int point, int rep, std::uint64_t seed,
                                 const std::string& method, int d, const std::string& why) {
  TrialRecord t;
  t.point = point;
  t.variable = p.variable;
  t.value = p.value;
  t.label = p.label;
  t.n = p.scenario.units();
  t.m = p.scenario.users;
  t.d_antennas = p.scenario.antennas;
  t.rep = rep;
  t.seed = seed;
  t.method = method;
  t.d = d;
  t.status = why;
  return t;
}

// All solver runs for one (point, repetition).
inline std::vector<TrialRecord> run_trial(const ExperimentConfig& cfg, const SweepPoint& p,
                                          int point, int rep) {
  std::vector<TrialRecord> out;
  const std::uint64_t seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(rep));
  ProblemInstance inst;
  try {
    inst = make_instance(p.scenario, seed);
  } catch (const std::exception& e) {
    out.push_back(failed_record(p, point, rep, seed, "instance", 0, std::string("error: ") + e.what()));
    return out;
  }
  SolverOptions opt;
  opt.exhaustive_cap = cfg.exhaustive_cap;
  auto guarded = [&](const std::string& method, int d, auto&& solve) {
    try {
      out.push_back(record_from(p, point, rep, seed, inst, solve(), d, cfg.timing));
    } catch (const InfeasibleError& e) {
      out.push_back(failed_record(p, point, rep, seed, method, d, "infeasible"));
    } catch (const DomainTooLargeError& e) {
      out.push_back(failed_record(p, point, rep, seed, method, d, "skipped: domain above cap"));
    }
  };
  const SolverSelection& s = p.solvers;
  const bool exhaustive_fits = domain_size(inst.alphabets, cfg.exhaustive_cap).has_value();
  if (s.exhaustive == "on" || (s.exhaustive == "auto" && exhaustive_fits)) {
    guarded("exhaustive", 0, [&] { return exhaustive_search(inst, opt); });
  }
  std::optional<TrialRecord> pat_rec;
  if (s.pat) {
    guarded("pat", 0, [&] { return pat_optimize(inst, opt); });
    if (out.back().status == "ok") pat_rec = out.back();
  }
  const int rank = inst.rank();
  for (int d : s.epat_d) {
    if (d == 2 * rank - 1 && pat_rec) {
      // Full-size E-PAT is the PAT traversal; reuse it.
      out.push_back(*pat_rec);
      out.back().method = "epat";
      out.back().d = d;
    } else {
      EpatConfig ec;
      ec.d = d;
      guarded("epat", d, [&] { return epat_optimize(inst, ec, opt); });
    }
    if (out.back().status == "ok") {
      const auto ce = candidate_count(inst.alphabets, d);
      const int lp = 2 * rank - 1;
      if (lp <= static_cast<int>(active_units(inst.alphabets).size())) {
        const auto cp = candidate_count(inst.alphabets, lp);
        out.back().ratio_vs_pat_pct = CandidateCount::percent(ce.traversal, cp.traversal);
      }
      out.back().ratio_vs_exhaustive_pct = CandidateCount::percent(ce.traversal, ce.exhaustive);
    }
  }
  if (s.eig_cpp) guarded("EIG+CPP", 0, [&] { return cpp_baseline(inst); });
  if (s.random_trials > 0) {
    guarded("random", 0, [&] { return random_baseline(inst, s.random_trials, mix_seed(seed, 2)); });
  }
  return out;
}

inline const TrialRecord* find_method(const std::vector<const TrialRecord*>& recs,
                                      const std::string& method) {
  for (const auto* r : recs) {
    if (r->method == method && r->status == "ok") return r;
  }
  return nullptr;
}

}  // namespace detail

inline std::vector<CountRow> run_counts(const CountSweep& sweep) {
  std::vector<CountRow> rows;
  for (int n : sweep.n_values) {
    for (double ratio : sweep.ratios) {
      std::vector<PhaseAlphabet> alphabets;
      for (int b : two_bit_mix(n, ratio)) alphabets.push_back(uniform_alphabet(b));
      for (int md : sweep.ranks) {
        const int lp = 2 * md - 1;
        if (lp > n) continue;
        const auto pat = candidate_count(alphabets, lp);
        auto add = [&](const std::string& method, int l, const BigCount& c) {
          CountRow row;
          row.n = n;
          row.ratio = ratio;
          row.md = md;
          row.method = method;
          row.l = l;
          row.log10_count = CandidateCount::log10_big(c);
          row.db_below_exhaustive = CandidateCount::db_ratio(pat.exhaustive, c);
          row.db_below_pat = CandidateCount::db_ratio(pat.traversal, c);
          rows.push_back(row);
        };
        add("exhaustive", n, pat.exhaustive);
        add("pat", lp, pat.traversal);
        for (int d = 1; d < lp; ++d) add("epat", d, candidate_count(alphabets, d).traversal);
      }
    }
  }
  return rows;
}

/// Runs every sweep point and repetition, then aggregates.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult res;
  if (cfg.id == "fig11") {
    res.counts = run_counts(cfg.counts);
    return res;
  }
  // Trials run in parallel; results land in fixed slots so order is stable.
  const int points = static_cast<int>(cfg.points.size());
  const int total = points * cfg.repetitions;
  std::vector<std::vector<TrialRecord>> slots(total);
  std::atomic<int> next{0};
  auto work = [&] {
    for (int i = next++; i < total; i = next++) {
      const int p = i / cfg.repetitions;
      const int rep = i % cfg.repetitions;
      slots[i] = detail::run_trial(cfg, cfg.points[p], p, rep);
    }
  };
  const int threads = std::max(1, std::min(cfg.threads, total));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (auto& s : slots) {
    for (auto& r : s) res.trials.push_back(std::move(r));
  }

  for (int p = 0; p < points; ++p) {
    const SweepPoint& sp = cfg.points[p];
    // Records grouped per repetition.
    std::vector<std::vector<const TrialRecord*>> by_rep(cfg.repetitions);
    for (const auto& r : res.trials) {
      if (r.point == p) by_rep[r.rep].push_back(&r);
    }
    if (cfg.id == "table1") {
      for (int d : sp.solvers.epat_d) {
        std::vector<PairedTrial> paired;
        for (const auto& recs : by_rep) {
          const TrialRecord* ref = detail::find_method(recs, "pat");
          const TrialRecord* cand = nullptr;
          for (const auto* r : recs) {
            if (r->method == "epat" && r->d == d && r->status == "ok") cand = r;
          }
          if (!ref || !cand) continue;
          paired.push_back({ref->objective, cand->objective, cand->wall_ms,
                            cand->ratio_vs_pat_pct, cand->ratio_vs_exhaustive_pct});
        }
        res.metrics.push_back(
            compute_metrics(paired, sp.scenario.units(), sp.scenario.users * sp.scenario.antennas, d));
      }
      continue;
    }
    // Figure-style aggregate per method (and d).
    std::vector<std::pair<std::string, int>> methods;
    for (const auto& recs : by_rep) {
      for (const auto* r : recs) {
        const std::pair<std::string, int> key{r->method, r->d};
        if (r->method != "instance" &&
            std::find(methods.begin(), methods.end(), key) == methods.end()) {
          methods.push_back(key);
        }
      }
    }
    bool all_exhaustive = true, all_pat = true;
    for (const auto& recs : by_rep) {
      all_exhaustive = all_exhaustive && detail::find_method(recs, "exhaustive");
      all_pat = all_pat && detail::find_method(recs, "pat");
    }
    const std::string oracle = all_exhaustive ? "exhaustive" : (all_pat ? "pat" : "none");
    for (const auto& [method, d] : methods) {
      SweepRow row;
      row.variable = sp.variable;
      row.value = sp.value;
      row.label = sp.label;
      row.method = method;
      row.d = d;
      row.n = sp.scenario.units();
      row.m = sp.scenario.users;
      row.d_antennas = sp.scenario.antennas;
      row.oracle = oracle;
      int optimal = 0;
      for (const auto& recs : by_rep) {
        const TrialRecord* r = nullptr;
        for (const auto* x : recs) {
          if (x->method == method && x->d == d) r = x;
        }
        if (!r) continue;
        if (r->status != "ok") {
          ++row.failed;
          continue;
        }
        ++row.trials;
        row.objective_mean += r->objective;
        row.power_dbm_mean += r->power_dbm;
        row.candidates_mean += static_cast<double>(r->evaluated);
        row.wall_ms_mean += r->wall_ms;
        if (oracle != "none") {
          const TrialRecord* o = detail::find_method(recs, oracle);
          row.gap_db_mean += r->power_dbm - o->power_dbm;
          if (r->objective >= o->objective * (1.0 - kOptimalityTolerance)) ++optimal;
        }
      }
      if (row.trials > 0) {
        row.objective_mean /= row.trials;
        row.power_dbm_mean /= row.trials;
        row.candidates_mean /= row.trials;
        row.wall_ms_mean /= row.trials;
        row.gap_db_mean /= row.trials;
        row.opt_prob_pct = 100.0 * optimal / row.trials;
      }
      res.sweep.push_back(row);
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Emission.

/// Shortest decimal that round-trips to the same double.
inline std::string format_double(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, r.ptr);
}

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  CsvWriter& header(std::initializer_list<const char*> cols) {
    bool first = true;
    for (const char* c : cols) {
      os_ << (first ? "" : ",") << c;
      first = false;
    }
    os_ << '\n';
    return *this;
  }
  template <class... Ts>
  void row(const Ts&... xs) {
    bool first = true;
    ((os_ << (first ? "" : ",") << cell(xs), first = false), ...);
    os_ << '\n';
  }

 private:
  static std::string cell(double x) { return format_double(x); }
  static std::string cell(int x) { return std::to_string(x); }
  static std::string cell(std::uint64_t x) { return std::to_string(x); }
  static std::string cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  std::ostream& os_;
};

inline constexpr const char* kTable1Header =
    "N,MD,d,rel_err_mean,ratio_vs_pat_pct,ratio_vs_exhaustive_pct,opt_prob_pct,wall_ms_mean";

inline void write_metrics_csv(std::ostream& os, const std::vector<MetricsRow>& rows) {
  os << kTable1Header << '\n';
  CsvWriter w(os);
  for (const auto& r : rows) {
    w.row(r.n, r.md, r.d, r.rel_err_mean, r.ratio_vs_pat_pct, r.ratio_vs_exhaustive_pct,
          r.opt_prob_pct, r.wall_ms_mean);
  }
}

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  CsvWriter w(os);
  w.header({"variable", "value", "label", "method", "d", "N", "M", "D", "trials", "failed",
            "objective_mean", "power_dbm_mean", "gap_db_mean", "opt_prob_pct", "oracle",
            "candidates_mean", "wall_ms_mean"});
  for (const auto& r : rows) {
    w.row(r.variable, r.value, r.label, r.method, r.d, r.n, r.m, r.d_antennas, r.trials, r.failed,
          r.objective_mean, r.power_dbm_mean, r.gap_db_mean, r.opt_prob_pct, r.oracle,
          r.candidates_mean, r.wall_ms_mean);
  }
}

inline void write_counts_csv(std::ostream& os, const std::vector<CountRow>& rows) {
  CsvWriter w(os);
  w.header({"N", "two_bit_ratio", "MD", "method", "L", "log10_count", "db_below_exhaustive",
            "db_below_pat"});
  for (const auto& r : rows) {
    w.row(r.n, r.ratio, r.md, r.method, r.l, r.log10_count, r.db_below_exhaustive,
          r.db_below_pat);
  }
}

inline constexpr const char* kTrialsHeader =
    "point,variable,value,label,N,M,D,rep,seed,method,d,status,objective,mu_max,power_dbm,"
    "systems,rejected,candidate_slots,evaluated,ratio_vs_pat_pct,ratio_vs_exhaustive_pct,wall_ms";

inline void write_trials_csv(std::ostream& os, const std::vector<TrialRecord>& rows) {
  os << kTrialsHeader << '\n';
  CsvWriter w(os);
  for (const auto& r : rows) {
    w.row(r.point, r.variable, r.value, r.label, r.n, r.m, r.d_antennas, r.rep, r.seed, r.method,
          r.d, r.status, r.objective, r.mu_max, r.power_dbm, r.systems, r.rejected,
          r.candidate_slots, r.evaluated, r.ratio_vs_pat_pct, r.ratio_vs_exhaustive_pct,
          r.wall_ms);
  }
}

inline void to_json(json& j, const TrialRecord& r) {
  j = json{{"point", r.point}, {"variable", r.variable}, {"value", r.value}, {"label", r.label},
           {"N", r.n}, {"M", r.m}, {"D", r.d_antennas}, {"rep", r.rep}, {"seed", r.seed},
           {"method", r.method}, {"d", r.d}, {"status", r.status}, {"objective", r.objective},
           {"mu_max", r.mu_max}, {"power_dbm", r.power_dbm}, {"systems", r.systems},
           {"rejected", r.rejected}, {"candidate_slots", r.candidate_slots},
           {"evaluated", r.evaluated}, {"ratio_vs_pat_pct", r.ratio_vs_pat_pct},
           {"ratio_vs_exhaustive_pct", r.ratio_vs_exhaustive_pct}, {"wall_ms", r.wall_ms}};
}

inline void to_json(json& j, const MetricsRow& r) {
  j = json{{"N", r.n}, {"MD", r.md}, {"d", r.d}, {"rel_err_mean", r.rel_err_mean},
           {"ratio_vs_pat_pct", r.ratio_vs_pat_pct},
           {"ratio_vs_exhaustive_pct", r.ratio_vs_exhaustive_pct},
           {"opt_prob_pct", r.opt_prob_pct}, {"wall_ms_mean", r.wall_ms_mean},
           {"trials", r.trials}, {"excluded", r.excluded}, {"oracle", r.oracle}};
}

inline void to_json(json& j, const SweepRow& r) {
  j = json{{"variable", r.variable}, {"value", r.value}, {"label", r.label},
           {"method", r.method}, {"d", r.d}, {"N", r.n}, {"M", r.m}, {"D", r.d_antennas},
           {"trials", r.trials}, {"failed", r.failed}, {"objective_mean", r.objective_mean},
           {"power_dbm_mean", r.power_dbm_mean}, {"gap_db_mean", r.gap_db_mean},
           {"opt_prob_pct", r.opt_prob_pct}, {"oracle", r.oracle},
           {"candidates_mean", r.candidates_mean}, {"wall_ms_mean", r.wall_ms_mean}};
}

inline void to_json(json& j, const CountRow& r) {
  j = json{{"N", r.n}, {"two_bit_ratio", r.ratio}, {"MD", r.md}, {"method", r.method},
           {"L", r.l}, {"log10_count", r.log10_count},
           {"db_below_exhaustive", r.db_below_exhaustive}, {"db_below_pat", r.db_below_pat}};
}

/// SolveReport with the phases, precoder and an SNR audit attached.
inline json report_to_json(const ProblemInstance& inst, const SolveReport& r) {
  json w = json::array();
  for (Eigen::Index i = 0; i < r.precoder.size(); ++i) {
    w.push_back({r.precoder(i).real(), r.precoder(i).imag()});
  }
  const SnrAudit audit = achieved_snrs(inst, r.best, r.precoder);
  return json{{"method", r.method == "eig_cpp" ? std::string("EIG+CPP") : r.method},
              {"indices", r.best.indices},
              {"phases", phases_of(inst.alphabets, r.best)},
              {"objective", r.objective},
              {"mu_max", r.mu_max},
              {"power_mw", r.power.mw},
              {"power_dbm", r.power.dbm},
              {"precoder", w},
              {"snr_per_user", audit.per_user},
              {"snr_average", audit.average},
              {"systems", r.systems},
              {"systems_rejected", r.systems_rejected},
              {"candidate_slots", r.candidate_slots},
              {"candidates_evaluated", r.candidates_evaluated},
              {"degenerate_amplitudes", r.degenerate_amplitudes},
              {"rim_systems", r.rim_systems},
              {"fell_back_to_exhaustive", r.fell_back_to_exhaustive},
              {"wall_ms", r.wall_ms}};
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  return out;
}

inline void check_written(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

/// CSV: summary at `path`, per-trial rows at `path.trials.csv`, config at
/// `path.config.json`. JSON: one document at `path` holding all three.
inline void emit(const ExperimentConfig& cfg, const ExperimentResult& res,
                 const std::string& format, const std::string& path) {
  if (format == "csv") {
    {
      auto out = open_output(path);
      if (cfg.id == "table1") write_metrics_csv(out, res.metrics);
      else if (cfg.id == "fig11") write_counts_csv(out, res.counts);
      else write_sweep_csv(out, res.sweep);
      check_written(out, path);
    }
    if (cfg.id != "fig11") {
      const std::string tpath = path + ".trials.csv";
      auto out = open_output(tpath);
      write_trials_csv(out, res.trials);
      check_written(out, tpath);
    }
    const std::string cpath = path + ".config.json";
    auto out = open_output(cpath);
    out << experiment_to_json(cfg).dump(2) << '\n';
    check_written(out, cpath);
  } else if (format == "json") {
    json doc{{"config", experiment_to_json(cfg)}};
    if (cfg.id == "table1") doc["rows"] = res.metrics;
    else if (cfg.id == "fig11") doc["rows"] = res.counts;
    else doc["rows"] = res.sweep;
    doc["trials"] = res.trials;
    auto out = open_output(path);
    out << doc.dump(2) << '\n';
    check_written(out, path);
  } else {
    throw std::invalid_argument("unknown format: " + format + " (expected csv or json)");
  }
}

}  // namespace rispat

#endif  // RISPAT_BENCH_HPP_
