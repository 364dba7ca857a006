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

#ifndef RISPAT_EPAT_HPP_
#define RISPAT_EPAT_HPP_

#include <boost/multiprecision/cpp_int.hpp>

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "rispat/arrangement.hpp"
#include "rispat/baselines.hpp"
#include "rispat/pat.hpp"
#include "rispat/traversal.hpp"

namespace rispat {

using BigCount = boost::multiprecision::cpp_int;

struct EpatConfig {
  int d = 1;  // boundary equations per system
  // Recover from kernel points whose sign pattern fails Re(C v) > 0 as well.
  bool keep_sign_failures = true;
  // Extra points per system for future generation strategies; only 1 exists.
  int points_per_system = 1;

  void validate(int rank) const {
    if (d < 1 || d > 2 * rank - 1) {
      throw std::invalid_argument("EpatConfig: d must lie in [1, 2*M*D - 1], got " +
                                  std::to_string(d));
    }
    if (points_per_system != 1) {
      throw std::invalid_argument("EpatConfig: only points_per_system = 1 is implemented");
    }
  }
};

/// Default d: M*D.
inline EpatConfig default_epat_config(const ProblemInstance& inst) {
  EpatConfig c;
  c.d = inst.rank();
  return c;
}

/// Near-optimal search with d-row systems. Each system's real kernel has
/// dimension 2 MD - d; its orthonormal basis vectors and their negations are
/// the auxiliary points, each recovering 2^d candidates.
inline SolveReport epat_optimize(const ProblemInstance& inst, const EpatConfig& cfg,
                                 const SolverOptions& opt = {}) {
  inst.validate();
  cfg.validate(inst.rank());
  const auto start = std::chrono::steady_clock::now();
  const QuadraticSurrogate s = build_surrogate(inst);
  require_nonzero_channel(s);
  const int free_units = static_cast<int>(active_units(inst.alphabets).size());
  SolveReport rep;
  if (cfg.d == 2 * inst.rank() - 1) {
    // Full-size systems: exactly the PAT traversal.
    rep = pat_optimize(inst, opt);
  } else if (free_units < cfg.d) {
    rep = exhaustive_search(inst, opt);
    rep.fell_back_to_exhaustive = true;
  } else {
    const Traversal tr(s.t, inst.alphabets);
    TraversalOptions topt;
    topt.tol = opt.tol;
    topt.threads = opt.threads;
    topt.keep_sign_failures = cfg.keep_sign_failures;
    rep = report_from_traversal(inst, s, tr.run(cfg.d, PointMode::kKernelBasis, topt),
                                "epat");
  }
  rep.method = "epat";
  rep.wall_ms = detail::elapsed_ms(start);
  return rep;
}

struct ProbabilityBound {
  double p_e = 0.0;
  BigCount faces;  // B, the simplex-face lower bound
  double p_c_low = 0.0;
};

inline BigCount binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  BigCount out = 1;
  for (int i = 1; i <= k; ++i) {
    out *= n - k + i;
    out /= i;
  }
  return out;
}

/// p_c >= 1 - p_e^B with B = C(2 MD, 2 MD - d).
inline ProbabilityBound pc_lower_bound(double p_e, int rank, int d) {
  if (!(p_e >= 0.0 && p_e <= 1.0)) {
    throw std::invalid_argument("pc_lower_bound: p_e must lie in [0, 1]");
  }
  if (rank < 1 || d < 1 || d > 2 * rank - 1) {
    throw std::invalid_argument("pc_lower_bound: need 1 <= d <= 2*MD - 1");
  }
  ProbabilityBound out;
  out.p_e = p_e;
  out.faces = binomial(2 * rank, 2 * rank - d);
  out.p_c_low = 1.0 - std::pow(p_e, out.faces.convert_to<double>());
  return out;
}

struct CandidateCount {
  BigCount traversal;   // sum over |I| = L of 2^L prod_{n in I} b_n
  BigCount exhaustive;  // prod_n b_n

  /// 10 log10(exhaustive / traversal).
  double reduction_db() const { return db_ratio(exhaustive, traversal); }

  static double log10_big(const BigCount& x) {
    if (x <= 0) throw std::domain_error("log10 of a nonpositive count");
    // Split off powers of 10^15 so the double conversion never overflows.
    BigCount y = x;
    double shift = 0.0;
    const BigCount chunk = BigCount(1000000000000000ULL);
    while (y > chunk * chunk) {
      y /= chunk;
      shift += 15.0;
    }
    return shift + std::log10(y.convert_to<double>());
  }
  static double db_ratio(const BigCount& num, const BigCount& den) {
    return 10.0 * (log10_big(num) - log10_big(den));
  }
  /// 100 * num / den.
  static double percent(const BigCount& num, const BigCount& den) {
    return 100.0 * std::pow(10.0, log10_big(num) - log10_big(den));
  }
};

/// Closed-form size of the candidate multiset for systems of L rows, and of
/// the exhaustive domain.
inline CandidateCount candidate_count(const std::vector<PhaseAlphabet>& alphabets, int l) {
  const auto active = active_units(alphabets);
  if (l < 0 || l > static_cast<int>(active.size())) {
    throw std::invalid_argument("candidate_count: L exceeds the number of non-frozen units");
  }
  // Elementary symmetric polynomial e_L of the b_n by dynamic programming.
  std::vector<BigCount> e(l + 1, 0);
  e[0] = 1;
  for (int n : active) {
    const int b = alphabets[n].size();
    for (int k = l; k >= 1; --k) e[k] += e[k - 1] * b;
  }
  CandidateCount out;
  out.traversal = e[l] << l;
  out.exhaustive = 1;
  for (const auto& a : alphabets) out.exhaustive *= a.size();
  return out;
}

}  // namespace rispat

#endif  // RISPAT_EPAT_HPP_
