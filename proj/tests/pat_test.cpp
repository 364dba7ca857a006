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

#include <gtest/gtest.h>

#include <numbers>

#include "test_support.hpp"

namespace rispat {
namespace {

using testing::brute_force;
using testing::random_instance;
using testing::rel_diff;

constexpr double kPi = std::numbers::pi;

TEST(Pat, TwoUnitExample) {
  ProblemInstance p;
  p.panel_sizes = {2};
  CMat r(2, 1);
  r << cplx(1.0, 0.0), std::conj(std::polar(1.0, kPi / 4));
  p.reflect = {r};
  p.noise_mw = {1e-5};
  p.snr_floor = 1e4;
  p.alphabets = {uniform_alphabet(2), uniform_alphabet(2)};
  const SolveReport rep = pat_optimize(p);
  EXPECT_NEAR(rep.objective, 2.0 + std::sqrt(2.0), 1e-12);
  EXPECT_EQ(rep.best.indices, (std::vector<int>{0, 0}));  // lexicographically smaller twin
  EXPECT_EQ(rep.method, "pat");
}

struct Shape {
  int n, m, d;
};

class PatOracle : public ::testing::TestWithParam<Shape> {};

TEST_P(PatOracle, MatchesBruteForce) {
  const Shape s = GetParam();
  for (int seed = 0; seed < 25; ++seed) {
    const ProblemInstance p = random_instance(s.n, s.m, s.d, 1000 * s.n + 10 * s.m + s.d + seed * 7919);
    const double oracle = brute_force(p).best;
    const SolveReport rep = pat_optimize(p);
    EXPECT_LE(rel_diff(rep.objective, oracle), 1e-9) << "seed " << seed;
    EXPECT_LT(rel_diff(rep.objective, testing::direct_objective(p, rep.best.indices)), 1e-12);
  }
}

INSTANTIATE_TEST_SUITE_P(Shapes, PatOracle,
                         ::testing::Values(Shape{4, 1, 1}, Shape{7, 1, 1}, Shape{10, 1, 1},
                                           Shape{5, 1, 2}, Shape{8, 2, 1}, Shape{9, 1, 2},
                                           Shape{6, 3, 1}, Shape{6, 1, 3}),
                         [](const auto& info) {
                           return "N" + std::to_string(info.param.n) + "M" +
                                  std::to_string(info.param.m) + "D" + std::to_string(info.param.d);
                         });

TEST(Pat, NonUniformParametricAlphabets) {
  for (int k : {1, 3, 7}) {
    ProblemInstance p = random_instance(8, 1, 1, {4, 4, 4, 4, 4, 4, 4, 4}, 300 + k);
    p.alphabets.assign(8, parametric_alphabet(k));
    EXPECT_LE(rel_diff(pat_optimize(p).objective, brute_force(p).best), 1e-9) << k;
  }
}

TEST(Pat, FrozenUnitsAndSingletonAlphabets) {
  ProblemInstance p = random_instance(7, 1, 2, {2, 1, 4, 1, 3, 2, 1}, 400);
  const SolveReport rep = pat_optimize(p);
  EXPECT_LE(rel_diff(rep.objective, brute_force(p).best), 1e-9);
  for (int n : {1, 3, 6}) EXPECT_EQ(rep.best.indices[n], 0);

  ProblemInstance frozen = random_instance(5, 1, 1, {1, 1, 1, 1, 1}, 401);
  const SolveReport only = pat_optimize(frozen);
  EXPECT_EQ(only.best.indices, std::vector<int>(5, 0));
  EXPECT_TRUE(only.fell_back_to_exhaustive);
  EXPECT_EQ(only.candidates_evaluated, 1u);
}

TEST(Pat, FewerFreeUnitsThanSystemRowsFallsBack) {
  const ProblemInstance p = random_instance(2, 1, 2, {4, 2}, 402);
  const SolveReport rep = pat_optimize(p);
  EXPECT_TRUE(rep.fell_back_to_exhaustive);
  EXPECT_LE(rel_diff(rep.objective, brute_force(p).best), 1e-12);
}

TEST(Pat, HotLoopMatchesReferenceSystemSolver) {
  for (int seed = 0; seed < 5; ++seed) {
    const ProblemInstance p = random_instance(7, 1, 2, 500 + seed);
    const CMat t = build_surrogate(p).t;
    const BoundarySet bs = boundary_midpoints(p.alphabets);
    std::uint64_t systems = 0, accepted = 0;
    BestCandidate best;
    SystemEnumerator(p.alphabets, 3).for_each([&](const IntersectionSystem& sys) {
      ++systems;
      if (auto pt = solve_intersection(t, bs, sys)) {
        ++accepted;
        for (const auto& v : recover_candidates(p.alphabets, t, *pt, sys)) {
          best.offer(surrogate_objective(t, unimodular(p.alphabets, v)),
                     [&](std::vector<int>& out) { out = v.indices; });
        }
      }
      return true;
    });
    std::uint64_t rims = 0;
    for_each_rim_system(p.alphabets, 2, [&](const RimSystem& rim) {
      ++rims;
      if (auto pt = solve_rim_intersection(t, bs, rim)) {
        for (const auto& v : recover_rim_candidates(p.alphabets, t, *pt, rim)) {
          best.offer(surrogate_objective(t, unimodular(p.alphabets, v)),
                     [&](std::vector<int>& out) { out = v.indices; });
        }
      }
      return true;
    });
    const SolveReport rep = pat_optimize(p);
    EXPECT_EQ(rep.systems, systems);
    EXPECT_EQ(rep.rim_systems, rims);
    EXPECT_EQ(rep.systems - rep.systems_rejected, accepted);
    EXPECT_EQ(rep.best.indices, best.indices);
    EXPECT_EQ(BigCount(rep.candidate_slots), candidate_count(p.alphabets, 3).traversal);
  }
}

TEST(Pat, CollinearColumnsDoNotBreakOptimality) {
  ProblemInstance p = random_instance(6, 1, 2, 600);
  p.reflect[0].row(1) = p.reflect[0].row(0);
  p.reflect[0].row(4) = -p.reflect[0].row(2);
  EXPECT_LE(rel_diff(pat_optimize(p).objective, brute_force(p).best), 1e-9);
}

TEST(Pat, ThreadCountDoesNotChangeTheResult) {
  const ProblemInstance p = random_instance(12, 1, 2, 700);
  SolverOptions one, many;
  many.threads = 3;
  const SolveReport a = pat_optimize(p, one);
  const SolveReport b = pat_optimize(p, many);
  EXPECT_EQ(a.best.indices, b.best.indices);
  EXPECT_EQ(a.objective, b.objective);
  EXPECT_EQ(a.systems, b.systems);
  EXPECT_EQ(a.candidates_evaluated, b.candidates_evaluated);
}

TEST(Pat, FarfieldInstance) {
  ScenarioConfig c;
  c.users = 1;
  c.antennas = 2;
  c.panel_sizes = {6};
  c.channel_model = "farfield";
  RisGeometry g;
  g.wavelength = 0.1;
  RisPanel panel;
  for (int i = 0; i < 6; ++i) panel.unit_positions.push_back({0.03 * i, 0.01 * (i % 2), 0.0});
  panel.antennas = {Polar{20.0, 0.4, 0.1}, Polar{20.5, 0.45, 0.12}};
  panel.users = {Polar{5.0, 1.0, 2.0}};
  g.panels = {panel};
  c.geometry = g;
  const ProblemInstance p = make_instance(c, 1);
  EXPECT_LE(rel_diff(pat_optimize(p).objective, brute_force(p).best), 1e-9);
}

TEST(Pat, ZeroChannelIsInfeasible) {
  ProblemInstance p = random_instance(4, 1, 1, 800);
  p.reflect[0].setZero();
  EXPECT_THROW(pat_optimize(p), InfeasibleError);
}

}  // namespace
}  // namespace rispat
