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

#ifndef RISPAT_BASELINES_HPP_
#define RISPAT_BASELINES_HPP_

#include <chrono>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "rispat/arrangement.hpp"
#include "rispat/reduction.hpp"
#include "rispat/traversal.hpp"

namespace rispat {

inline constexpr std::uint64_t kDefaultExhaustiveCap = 100'000'000;

struct SolverOptions {
  int threads = 1;
  double tol = kDefaultTol;
  std::uint64_t exhaustive_cap = kDefaultExhaustiveCap;
};

/// Raised when the exhaustive domain is larger than the configured cap.
class DomainTooLargeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using BaselineResult = SolveReport;

/// prod b_n, or nullopt when it exceeds `limit`.
inline std::optional<std::uint64_t> domain_size(const std::vector<PhaseAlphabet>& alphabets,
                                                std::uint64_t limit) {
  std::uint64_t total = 1;
  for (const auto& a : alphabets) {
    const auto b = static_cast<std::uint64_t>(a.size());
    if (total > limit / b) return std::nullopt;
    total *= b;
  }
  return total;
}

namespace detail {

inline double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

// Mixed-radix walk over ranks [begin, end), last unit fastest. Prefix sums
// P_k = sum_{n<k} t_n e^{j theta_n} are rebuilt from the changed digit on, so
// rounding does not accumulate along the walk.
inline BestCandidate exhaustive_range(const CMat& t,
                                      const std::vector<PhaseAlphabet>& alphabets,
                                      std::uint64_t begin, std::uint64_t end) {
  BestCandidate best;
  if (begin >= end) return best;
  const int n = static_cast<int>(alphabets.size());
  const int r = static_cast<int>(t.rows());
  std::vector<std::vector<CVec>> cols(n);
  for (int u = 0; u < n; ++u) {
    for (int i = 0; i < alphabets[u].size(); ++i) {
      cols[u].push_back(t.col(u) * std::polar(1.0, alphabets[u][i]));
    }
  }
  std::vector<int> idx(n, 0);
  std::uint64_t rem = begin;
  for (int u = n - 1; u >= 0; --u) {
    const auto b = static_cast<std::uint64_t>(alphabets[u].size());
    idx[u] = static_cast<int>(rem % b);
    rem /= b;
  }
  std::vector<CVec> prefix(n + 1, CVec::Zero(r));
  auto rebuild = [&](int from) {
    for (int u = from; u < n; ++u) prefix[u + 1] = prefix[u] + cols[u][idx[u]];
  };
  rebuild(0);
  for (std::uint64_t rank = begin; rank < end; ++rank) {
    best.offer(prefix[n].squaredNorm(), [&](std::vector<int>& out) { out = idx; });
    if (rank + 1 == end) break;
    int u = n - 1;
    while (idx[u] + 1 == alphabets[u].size()) {
      idx[u] = 0;
      --u;
    }
    ++idx[u];
    rebuild(u);
  }
  return best;
}

}  // namespace detail

/// Exact maximizer of ||T v||^2 by enumerating every index vector.
inline BaselineResult exhaustive_search(const ProblemInstance& inst,
                                        const SolverOptions& opt = {}) {
  inst.validate();
  const auto total = domain_size(inst.alphabets, opt.exhaustive_cap);
  if (!total) {
    throw DomainTooLargeError("exhaustive_search: search domain exceeds cap of " +
                              std::to_string(opt.exhaustive_cap));
  }
  const auto start = std::chrono::steady_clock::now();
  const QuadraticSurrogate s = build_surrogate(inst);
  const int threads = static_cast<int>(
      std::max<std::uint64_t>(1, std::min<std::uint64_t>(opt.threads, *total)));
  std::vector<BestCandidate> parts(threads);
  auto work = [&](int tid) {
    const std::uint64_t lo = *total * tid / threads;
    const std::uint64_t hi = *total * (tid + 1) / threads;
    parts[tid] = detail::exhaustive_range(s.t, inst.alphabets, lo, hi);
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(work, i);
    for (auto& th : pool) th.join();
  }
  BestCandidate best;
  for (const auto& p : parts) best.merge(p);
  BaselineResult rep;
  rep.method = "exhaustive";
  rep.best.indices = best.indices;
  rep.candidates_evaluated = *total;
  rep.wall_ms = detail::elapsed_ms(start);
  finalize_report(inst, s, rep);
  return rep;
}

/// Dominant eigenvector of T^H T rounded to the circularly nearest phases
/// (labelled EIG+CPP in benchmark output).
inline BaselineResult cpp_baseline(const ProblemInstance& inst) {
  inst.validate();
  const auto start = std::chrono::steady_clock::now();
  const QuadraticSurrogate s = build_surrogate(inst);
  const CMat gram = s.t.adjoint() * s.t;
  const EigenPair e = hermitian_max_eig(0.5 * (gram + gram.adjoint()));
  BaselineResult rep;
  rep.method = "eig_cpp";
  rep.best.indices.assign(inst.units(), 0);
  for (int n = 0; n < inst.units(); ++n) {
    if (inst.alphabets[n].frozen()) continue;
    rep.best.indices[n] = nearest_phase(inst.alphabets[n], std::arg(e.vector(n)));
  }
  rep.candidates_evaluated = 1;
  rep.wall_ms = detail::elapsed_ms(start);
  finalize_report(inst, s, rep);
  return rep;
}

/// Best of `trials` uniformly random index vectors.
inline BaselineResult random_baseline(const ProblemInstance& inst, int trials,
                                      std::uint64_t seed) {
  inst.validate();
  if (trials < 1) throw std::invalid_argument("random_baseline: trials must be >= 1");
  const auto start = std::chrono::steady_clock::now();
  const QuadraticSurrogate s = build_surrogate(inst);
  std::mt19937_64 rng(seed);
  BestCandidate best;
  PhaseVector v{std::vector<int>(inst.units(), 0)};
  for (int k = 0; k < trials; ++k) {
    for (int n = 0; n < inst.units(); ++n) {
      std::uniform_int_distribution<int> pick(0, inst.alphabets[n].size() - 1);
      v.indices[n] = pick(rng);
    }
    best.offer(surrogate_objective(s, inst.alphabets, v),
               [&](std::vector<int>& out) { out = v.indices; });
  }
  BaselineResult rep;
  rep.method = "random";
  rep.best.indices = best.indices;
  rep.candidates_evaluated = static_cast<std::uint64_t>(trials);
  rep.wall_ms = detail::elapsed_ms(start);
  finalize_report(inst, s, rep);
  return rep;
}

}  // namespace rispat

#endif  // RISPAT_BASELINES_HPP_
