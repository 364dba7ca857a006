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

#ifndef RISPAT_PAT_HPP_
#define RISPAT_PAT_HPP_

#include <chrono>

#include "rispat/arrangement.hpp"
#include "rispat/baselines.hpp"
#include "rispat/reduction.hpp"
#include "rispat/traversal.hpp"

namespace rispat {

inline void require_nonzero_channel(const QuadraticSurrogate& s) {
  if (s.t.norm() == 0.0) {
    throw InfeasibleError("all effective channels are zero");
  }
}

inline SolveReport report_from_traversal(const ProblemInstance& inst,
                                         const QuadraticSurrogate& s,
                                         const TraversalResult& tr, std::string method) {
  SolveReport rep;
  rep.method = std::move(method);
  rep.best.indices = tr.best.indices;
  if (tr.best.empty()) rep.best.indices.assign(inst.units(), 0);
  rep.systems = tr.stats.systems;
  rep.systems_rejected = tr.stats.rejected;
  rep.candidate_slots = tr.stats.candidate_slots;
  rep.candidates_evaluated = tr.stats.evaluated;
  rep.degenerate_amplitudes = tr.stats.degenerate;
  rep.rim_systems = tr.stats.rim_systems;
  finalize_report(inst, s, rep);
  return rep;
}

/// Global maximizer of ||T v||^2 over the discrete phases.
///
/// Every vertex of the boundary arrangement on the auxiliary sphere is found
/// by solving one (2 MD - 1)-row system; the 2^(2MD-1) phase vectors of the
/// cells around each vertex are evaluated and the best is kept. Vertices where
/// some units have zero amplitude (every phase of such a unit is adjacent) are
/// enumerated too, since for small N the optimal cell may touch no other kind.
/// Falls back to exhaustive search when fewer than 2 MD - 1 units are free.
inline SolveReport pat_optimize(const ProblemInstance& inst, const SolverOptions& opt = {}) {
  inst.validate();
  const auto start = std::chrono::steady_clock::now();
  const QuadraticSurrogate s = build_surrogate(inst);
  require_nonzero_channel(s);
  const int l = 2 * inst.rank() - 1;
  const int free_units = static_cast<int>(active_units(inst.alphabets).size());
  SolveReport rep;
  if (free_units < l) {
    SolverOptions ex = opt;
    rep = exhaustive_search(inst, ex);
    rep.fell_back_to_exhaustive = true;
  } else {
    const Traversal tr(s.t, inst.alphabets);
    TraversalOptions topt;
    topt.tol = opt.tol;
    topt.threads = opt.threads;
    rep = report_from_traversal(inst, s, tr.run(l, PointMode::kVertex, topt), "pat");
  }
  rep.method = "pat";
  rep.wall_ms = detail::elapsed_ms(start);
  return rep;
}

}  // namespace rispat

#endif  // RISPAT_PAT_HPP_
