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

#include <cmath>
#include <random>

#include "test_support.hpp"

namespace rispat {
namespace {

using testing::random_instance;
using testing::rel_diff;

TEST(EpatConfig, Validation) {
  EpatConfig c;
  c.d = 0;
  EXPECT_THROW(c.validate(2), std::invalid_argument);
  c.d = 4;
  EXPECT_THROW(c.validate(2), std::invalid_argument);
  c.d = 3;
  EXPECT_NO_THROW(c.validate(2));
  c.points_per_system = 2;
  EXPECT_THROW(c.validate(2), std::invalid_argument);
  const ProblemInstance p = random_instance(6, 3, 1, 1);
  EXPECT_EQ(default_epat_config(p).d, 3);
}

TEST(Epat, FullSizeSystemsDegenerateToPat) {
  for (int seed = 0; seed < 20; ++seed) {
    const ProblemInstance p = random_instance(9, 1 + seed % 2, 2 - seed % 2, 50 + seed);
    EpatConfig c;
    c.d = 3;
    const SolveReport e = epat_optimize(p, c);
    const SolveReport q = pat_optimize(p);
    EXPECT_EQ(e.best.indices, q.best.indices);
    EXPECT_EQ(e.objective, q.objective);
    EXPECT_EQ(e.candidates_evaluated, q.candidates_evaluated);
    EXPECT_EQ(e.method, "epat");
  }
}

TEST(Epat, NeverBeatsPatAndKeepingSignFailuresNeverHurts) {
  for (int seed = 0; seed < 30; ++seed) {
    const int md = 2 + seed % 2;
    const ProblemInstance p = random_instance(8, 1, md, 90 + seed);
    const double pat = pat_optimize(p).objective;
    for (int d = 1; d < 2 * md - 1; ++d) {
      EpatConfig keep, drop;
      keep.d = drop.d = d;
      drop.keep_sign_failures = false;
      const double k = epat_optimize(p, keep).objective;
      const double r = epat_optimize(p, drop).objective;
      EXPECT_LE(k, pat * (1.0 + 1e-9));
      EXPECT_GE(k, r * (1.0 - 1e-12));
    }
  }
}

TEST(Epat, SingleEquationSystemsAreLinearInN) {
  const ProblemInstance p = random_instance(20, 1, 2, two_bit_mix(20, 0.5), 7);
  EpatConfig c;
  c.d = 1;
  const SolveReport rep = epat_optimize(p, c);
  std::uint64_t sum_b = 0;
  for (const auto& a : p.alphabets) sum_b += a.size();
  EXPECT_EQ(rep.systems, sum_b);
  EXPECT_EQ(rep.candidate_slots, 2 * sum_b);
  EXPECT_EQ(BigCount(rep.candidate_slots), candidate_count(p.alphabets, 1).traversal);
}

TEST(Epat, SlotsMatchClosedFormForEveryD) {
  const ProblemInstance p = random_instance(11, 1, 3, 8);
  for (int d = 1; d <= 4; ++d) {
    EpatConfig c;
    c.d = d;
    EXPECT_EQ(BigCount(epat_optimize(p, c).candidate_slots),
              candidate_count(p.alphabets, d).traversal) << d;
  }
}

TEST(Epat, ModerateOptimalityRateWithTwoEquations) {
  // Loose sanity band; the tight statistical check lives in the acceptance suite.
  int optimal = 0;
  const int trials = 60;
  for (int seed = 0; seed < trials; ++seed) {
    const ProblemInstance p = random_instance(20, 1, 2, two_bit_mix(20, 0.5), 1000 + seed);
    EpatConfig c;
    c.d = 2;
    if (epat_optimize(p, c).objective >= pat_optimize(p).objective * (1.0 - 1e-9)) ++optimal;
  }
  EXPECT_GE(optimal, trials * 3 / 4);
}

TEST(Epat, FallsBackWhenTooFewFreeUnits) {
  const ProblemInstance p = random_instance(3, 1, 3, {4, 1, 2}, 9);
  EpatConfig c;
  c.d = 3;
  const SolveReport rep = epat_optimize(p, c);
  EXPECT_TRUE(rep.fell_back_to_exhaustive);
  EXPECT_EQ(rep.objective, exhaustive_search(p).objective);
}

TEST(PcLowerBound, Examples) {
  const ProbabilityBound b = pc_lower_bound(0.5, 2, 2);
  EXPECT_EQ(b.faces, 6);
  EXPECT_DOUBLE_EQ(b.p_c_low, 0.984375);
  EXPECT_EQ(pc_lower_bound(0.0, 2, 1).p_c_low, 1.0);
  EXPECT_EQ(pc_lower_bound(1.0, 3, 2).p_c_low, 0.0);
  EXPECT_THROW(pc_lower_bound(1.5, 2, 2), std::invalid_argument);
  EXPECT_THROW(pc_lower_bound(0.5, 2, 4), std::invalid_argument);
}

TEST(PcLowerBound, FacesMatchPascalTriangle) {
  std::vector<std::vector<long long>> pascal(17);
  for (int n = 0; n <= 16; ++n) {
    pascal[n].assign(n + 1, 1);
    for (int k = 1; k < n; ++k) pascal[n][k] = pascal[n - 1][k - 1] + pascal[n - 1][k];
  }
  for (int md = 1; md <= 8; ++md) {
    for (int d = 1; d <= 2 * md - 1; ++d) {
      const ProbabilityBound b = pc_lower_bound(0.7, md, d);
      EXPECT_EQ(b.faces, pascal[2 * md][2 * md - d]);
      EXPECT_NEAR(b.p_c_low, 1.0 - std::pow(0.7, static_cast<double>(pascal[2 * md][d])), 1e-15);
    }
  }
}

TEST(CandidateCount, SmallExamples) {
  const std::vector<PhaseAlphabet> a(4, uniform_alphabet(2));
  EXPECT_EQ(candidate_count(a, 1).traversal, 16);
  EXPECT_EQ(candidate_count(a, 1).exhaustive, 16);
  EXPECT_EQ(candidate_count(a, 0).traversal, 1);
  EXPECT_THROW(candidate_count(a, 5), std::invalid_argument);
  // Frozen units contribute to neither the subsets nor the domain.
  const std::vector<PhaseAlphabet> f{uniform_alphabet(2), PhaseAlphabet({1.0}), uniform_alphabet(4)};
  EXPECT_EQ(candidate_count(f, 2).traversal, 4 * 8);
  EXPECT_EQ(candidate_count(f, 2).exhaustive, 8);
}

TEST(CandidateCount, HundredUnitsMatchesDirectSummation) {
  std::vector<PhaseAlphabet> a;
  for (int b : two_bit_mix(100, 0.5)) a.push_back(uniform_alphabet(b));
  BigCount direct = 0;
  for (int i = 0; i < 100; ++i) {
    for (int j = i + 1; j < 100; ++j) {
      for (int k = j + 1; k < 100; ++k) {
        direct += BigCount(8) * a[i].size() * a[j].size() * a[k].size();
      }
    }
  }
  EXPECT_EQ(candidate_count(a, 3).traversal, direct);
  EXPECT_EQ(candidate_count(a, 3).exhaustive, BigCount(1) << 150);
}

TEST(CandidateCount, LogAndRatioHelpers) {
  const BigCount huge = BigCount(1) << 400;
  EXPECT_NEAR(CandidateCount::log10_big(huge), 400 * std::log10(2.0), 1e-9);
  EXPECT_NEAR(CandidateCount::db_ratio(BigCount(1000), BigCount(10)), 20.0, 1e-12);
  EXPECT_NEAR(CandidateCount::percent(BigCount(3), BigCount(4)), 75.0, 1e-12);
  EXPECT_THROW(CandidateCount::log10_big(BigCount(0)), std::domain_error);
  std::vector<PhaseAlphabet> a(100, uniform_alphabet(4));
  EXPECT_GT(candidate_count(a, 1).reduction_db(), 200.0);
}

TEST(CandidateCount, TableRatiosForTwentyUnits) {
  std::vector<PhaseAlphabet> a;
  for (int b : two_bit_mix(20, 0.5)) a.push_back(uniform_alphabet(b));
  const auto pat = candidate_count(a, 3);
  const auto e2 = candidate_count(a, 2);
  EXPECT_NEAR(CandidateCount::percent(e2.traversal, pat.traversal), 2.81, 0.005);
  EXPECT_NEAR(CandidateCount::percent(e2.traversal, e2.exhaustive), 6.33e-4, 0.005e-4);
}

}  // namespace
}  // namespace rispat
