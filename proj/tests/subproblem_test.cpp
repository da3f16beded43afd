// Copyright 2026 The spreadopt Authors
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

#include <limits>

#include "doctest.h"
#include "spreadopt/correlation.hpp"
#include "spreadopt/generators.hpp"
#include "spreadopt/subproblem.hpp"
#include "test_util.hpp"

namespace spreadopt {
namespace {

using testing::assignment_from_mask;
using testing::naive_restricted;
using testing::random_acz_family;
using testing::random_subset;
using testing::with_assignment;

// Minimum over all assignments by rebuilding the family each time; ties go to
// the lexicographically smallest assignment.
struct BruteResult {
  bool feasible = false;
  std::int64_t objective = std::numeric_limits<std::int64_t>::max();
  std::vector<Chip> assignment;
};

BruteResult brute_force(const CodeFamily& f, const IndexSet& s, SubproblemMode mode) {
  BruteResult best;
  const auto& bits = s.entries();
  for (std::uint64_t mask = 0; mask < (1ull << bits.size()); ++mask) {
    const auto a = assignment_from_mask(mask, bits.size());
    const auto g = with_assignment(f, bits, a);
    if (mode == SubproblemMode::kStageTwo) {
      bool ok = true;
      for (int c : s.active_columns()) ok = ok && is_acz(g.code(c));
      if (!ok) continue;
    }
    const auto value = naive_restricted(g, s.active_columns(), mode);
    if (!best.feasible || value < best.objective ||
        (value == best.objective && a < best.assignment)) {
      best = {true, value, a};
    }
  }
  return best;
}

TEST_CASE("single free chip on an all-ones code") {
  const CodeFamily f(4, 1);
  const auto table = build_table(f);
  const auto p = build_partial(f, table, IndexSet({{0, 0}}, 4, 1), SubproblemMode::kStageOne);
  REQUIRE(p.terms.size() == 1);
  const auto& t = p.terms[0];
  CHECK(t.i == 0);
  CHECK(t.j == 0);
  CHECK(t.k == 1);
  CHECK(t.constant == 2);
  REQUIRE(t.linear_end - t.linear_begin == 1);
  CHECK(p.linear[t.linear_begin].bit == 0);
  CHECK(p.linear[t.linear_begin].coef == 2);
  CHECK(t.bilinear_end == t.bilinear_begin);
  const std::vector<Chip> plus{1}, minus{-1};
  CHECK(evaluate(p, plus) == 16);
  CHECK(evaluate(p, minus) == 0);
  CHECK(dump_partial(p) == "# free 0,0\n# offset 0\n0 0 1 | 2 | 0:2 |\n");
}

TEST_CASE("evaluate matches the table and the rebuild oracle") {
  Rng rng(101);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = trial % 2 == 0 ? 31 : 16;
    const int m = 2 + static_cast<int>(rng.below(5));
    const auto f = random_family(n, m, rng.next());
    const auto table = build_table(f);
    const int cols = 1 + static_cast<int>(rng.below(m));
    const int size = cols + static_cast<int>(rng.below(6));
    const auto s = random_subset(rng, n, m, size, cols);
    for (auto mode : {SubproblemMode::kStageOne, SubproblemMode::kStageTwo,
                      SubproblemMode::kUnconstrained}) {
      const auto p = build_partial(f, table, s, mode);
      CHECK(evaluate(p, p.incumbent) == naive_restricted(f, s.active_columns(), mode));
      for (int r = 0; r < 5; ++r) {
        std::vector<Chip> a(s.size());
        for (auto& c : a) c = rng.chip();
        const auto g = with_assignment(f, s.entries(), a);
        CHECK(evaluate(p, a) == naive_restricted(g, s.active_columns(), mode));
      }
      if (mode != SubproblemMode::kStageOne) {
        const auto c = static_cast<std::int64_t>(s.active_columns().size());
        CHECK(p.retained_terms == n * (c * m - c * (c - 1) / 2));
      } else {
        CHECK(p.retained_terms == static_cast<std::int64_t>(s.active_columns().size()));
      }
    }
  }
}

TEST_CASE("acz terms") {
  Rng rng(7);
  const auto f = random_acz_family(15, 4, rng);
  const auto table = build_table(f);
  const auto s = random_subset(rng, 15, 4, 6, 3);
  const auto p = build_partial(f, table, s, SubproblemMode::kStageTwo);
  CHECK(p.acz_terms.size() == 3);
  CHECK(satisfies_acz(p, p.incumbent));
  for (int r = 0; r < 20; ++r) {
    std::vector<Chip> a(s.size());
    for (auto& c : a) c = rng.chip();
    const auto g = with_assignment(f, s.entries(), a);
    bool expected = true;
    for (int c : s.active_columns()) expected = expected && is_acz(g.code(c));
    CHECK(satisfies_acz(p, a) == expected);
  }
  CHECK_THROWS_AS(evaluate(p, std::vector<Chip>(s.size() + 1, 1)), std::invalid_argument);
}

TEST_CASE("exhaustive solver against the rebuild oracle") {
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const bool two = trial % 2 == 0;
    const auto f = two ? random_acz_family(5, 2, rng) : random_family(5, 2, rng.next());
    const auto table = build_table(f);
    const auto s = random_subset(rng, 5, 2, 4, 1 + static_cast<int>(rng.below(2)));
    const auto mode = two ? SubproblemMode::kStageTwo : SubproblemMode::kStageOne;
    const auto p = build_partial(f, table, s, mode);
    const auto expected = brute_force(f, s, mode);
    const auto got = solve_exhaustive(p);
    CHECK(got.objective == expected.objective);
    CHECK(got.assignment == expected.assignment);
    CHECK(got.objective <= evaluate(p, p.incumbent));
  }
}

TEST_CASE("single bit picks the better sign") {
  const auto f = random_family(31, 3, 5);
  const auto table = build_table(f);
  const auto p = build_partial(f, table, IndexSet({{1, 4}}, 31, 3),
                               SubproblemMode::kUnconstrained);
  const std::vector<Chip> minus{-1}, plus{1};
  const auto best = std::min(evaluate(p, minus), evaluate(p, plus));
  CHECK(solve_exhaustive(p).objective == best);
  CHECK(solve_branch_and_bound(p).objective == best);
}

TEST_CASE("infeasible stage-two block") {
  const CodeFamily f(8, 1);
  const auto table = build_table(f);
  const auto p = build_partial(f, table, IndexSet({{0, 3}}, 8, 1), SubproblemMode::kStageTwo);
  CHECK_THROWS_AS(solve_exhaustive(p), InfeasibleError);
  CHECK_THROWS_AS(solve_branch_and_bound(p), InfeasibleError);
}

TEST_CASE("branch and bound equals enumeration") {
  Rng rng(2024);
  int instances = 0;
  for (int n : {31, 63}) {
    for (int m : {4, 8}) {
      for (int size : {2, 4, 8, 12}) {
        for (int rep = 0; rep < 2; ++rep) {
          for (auto mode : {SubproblemMode::kStageOne, SubproblemMode::kStageTwo}) {
            const auto f = mode == SubproblemMode::kStageTwo ? random_acz_family(n, m, rng)
                                                             : random_family(n, m, rng.next());
            const auto table = build_table(f);
            const int cols = 1 + static_cast<int>(rng.below(std::min(m, size)));
            const auto s = random_subset(rng, n, m, size, cols);
            const auto p = build_partial(f, table, s, mode);
            const auto a = solve_exhaustive(p);
            const auto b = solve_branch_and_bound(p);
            CHECK(a.objective == b.objective);
            CHECK(a.assignment == b.assignment);
            ++instances;
          }
        }
      }
    }
  }
  CHECK(instances == 64);
}

TEST_CASE("solvers are thread-count invariant") {
  Rng rng(77);
  for (int trial = 0; trial < 6; ++trial) {
    const auto f = random_acz_family(31, 6, rng);
    const auto table = build_table(f);
    const auto s = random_subset(rng, 31, 6, 14, 6);
    const auto p = build_partial(f, table, s, SubproblemMode::kStageTwo);
    const auto seq = solve_exhaustive(p);
    const auto par = solve_exhaustive(p, {.threads = 4});
    CHECK(seq.objective == par.objective);
    CHECK(seq.assignment == par.assignment);
    const auto bseq = solve_branch_and_bound(p);
    const auto bpar = solve_branch_and_bound(p, {.threads = 4});
    CHECK(bseq.objective == bpar.objective);
    CHECK(bseq.assignment == bpar.assignment);
    CHECK(bseq.assignment == seq.assignment);
  }
}

TEST_CASE("optimal incumbent is kept") {
  Rng rng(8);
  const auto f = random_family(31, 4, 3);
  auto table = build_table(f);
  const auto s = random_subset(rng, 31, 4, 10, 4);
  auto p = build_partial(f, table, s, SubproblemMode::kUnconstrained);
  const auto first = solve_exhaustive(p);
  const auto g = with_assignment(f, s.entries(), first.assignment);
  table = build_table(g);
  p = build_partial(g, table, s, SubproblemMode::kUnconstrained);
  const auto again = solve_branch_and_bound(p);
  CHECK(again.objective == first.objective);
  CHECK(evaluate(p, p.incumbent) == again.objective);
  CHECK(again.nodes_explored <= (1u << s.size()));
}

TEST_CASE("one bit per column, downscaled") {
  Rng rng(31);
  for (int trial = 0; trial < 3; ++trial) {
    const auto f = random_acz_family(31, 24, rng);
    const auto table = build_table(f);
    std::vector<BitIndex> bits;
    for (int c = 0; c < 18; ++c) bits.push_back({c, static_cast<int>(rng.below(31))});
    const IndexSet s(bits, 31, 24);
    const auto p = build_partial(f, table, s, SubproblemMode::kStageTwo);
    const auto a = solve_exhaustive(p);
    const auto b = solve_branch_and_bound(p);
    CHECK(a.objective == b.objective);
    CHECK(a.assignment == b.assignment);
  }
}

TEST_CASE("one bit per column at full scale terminates") {
  Rng rng(4);
  const auto f = random_acz_family(127, 66, rng);
  const auto table = build_table(f);
  std::vector<BitIndex> bits;
  for (int c = 0; c < 25; ++c) bits.push_back({c * 2, static_cast<int>(rng.below(127))});
  const IndexSet s(bits, 127, 66);
  const auto p = build_partial(f, table, s, SubproblemMode::kStageTwo);
  const auto r = solve_branch_and_bound(p);
  CHECK(r.objective <= evaluate(p, p.incumbent));
  CHECK(satisfies_acz(p, r.assignment));
  CHECK(evaluate(p, r.assignment) == r.objective);
}

TEST_CASE("enumeration cap") {
  const auto f = random_family(31, 4, 1);
  const auto table = build_table(f);
  Rng rng(1);
  const auto s = random_subset(rng, 31, 4, 6, 2);
  const auto p = build_partial(f, table, s, SubproblemMode::kUnconstrained);
  CHECK_THROWS_AS(solve_exhaustive(p, {.threads = 1, .enumeration_cap = 5}),
                  std::invalid_argument);
}

}  // namespace
}  // namespace spreadopt
