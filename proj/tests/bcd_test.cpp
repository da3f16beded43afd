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

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "doctest.h"
#include "spreadopt/bcd.hpp"
#include "spreadopt/generators.hpp"
#include "test_util.hpp"

namespace spreadopt {
namespace {

using testing::assignment_from_mask;
using testing::random_acz_family;
using testing::with_assignment;

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("spreadopt_bcd_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

TEST_CASE("subset selection shapes") {
  Rng rng(1);
  SUBCASE("one index from each of 25 columns") {
    const auto s = select_subset(rng, 127, 66, {25, 25, 1});
    CHECK(s.size() == 25);
    CHECK(s.active_columns().size() == 25);
  }
  SUBCASE("five columns of five") {
    const auto s = select_subset(rng, 127, 66, {25, 5, 5});
    CHECK(s.size() == 25);
    REQUIRE(s.active_columns().size() == 5);
    std::map<int, int> per_column;
    for (const auto& b : s.entries()) ++per_column[b.code];
    for (const auto& [c, count] : per_column) CHECK(count == 5);
  }
  SUBCASE("single index") {
    const auto s = select_subset(rng, 31, 8, {1, 1, 0});
    CHECK(s.size() == 1);
  }
  SUBCASE("uneven split respects the per-column cap") {
    for (int t = 0; t < 50; ++t) {
      const SelectionStrategy strategy{7, 3, 0};
      CHECK(strategy.resolved_max_per_column() == 3);
      const auto s = select_subset(rng, 31, 8, strategy);
      CHECK(s.size() == 7);
      CHECK(s.active_columns().size() <= 3);
      std::map<int, int> per_column;
      for (const auto& b : s.entries()) ++per_column[b.code];
      for (const auto& [c, count] : per_column) CHECK(count <= 3);
    }
  }
  SUBCASE("deterministic given the rng state") {
    Rng a(9), b(9);
    for (int t = 0; t < 10; ++t) {
      CHECK(select_subset(a, 63, 8, {6, 3, 0}).entries() ==
            select_subset(b, 63, 8, {6, 3, 0}).entries());
    }
  }
  SUBCASE("infeasible strategies") {
    CHECK_THROWS_AS(select_subset(rng, 31, 8, {10, 2, 3}), std::invalid_argument);
    CHECK_THROWS_AS(select_subset(rng, 31, 8, {4, 9, 1}), std::invalid_argument);
    CHECK_THROWS_AS(select_subset(rng, 31, 8, {0, 1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(select_subset(rng, 4, 2, {8, 1, 8}), std::invalid_argument);
  }
}

TEST_CASE("solver choice") {
  CHECK(resolve_solver(SolverChoice::kAuto, 4) == SolverChoice::kEnumeration);
  CHECK(resolve_solver(SolverChoice::kAuto, 5) == SolverChoice::kBranchAndBound);
  CHECK(resolve_solver(SolverChoice::kEnumeration, 25) == SolverChoice::kEnumeration);
}

TEST_CASE("config validation and defaults") {
  BcdConfig c;
  c.strategy = {4, 2, 0};
  CHECK(c.resolved_patience() == 500);
  c.strategy = {1, 1, 0};
  CHECK(c.resolved_patience() == 2000);
  c.max_iterations = 0;
  CHECK_THROWS_AS(c.validate(31, 4), std::invalid_argument);
  c.time_limit_s = 5;
  CHECK_NOTHROW(c.validate(31, 4));
  c.checkpoint_every = 0;
  CHECK_THROWS_AS(c.validate(31, 4), std::invalid_argument);
}

TEST_CASE("block step against the rebuild oracle") {
  Rng rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    auto f = random_acz_family(31, 4, rng);
    auto table = build_table(f);
    const auto s = select_subset(rng, 31, 4, {4, 2, 0});
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    CodeFamily expected;
    for (std::uint64_t mask = 0; mask < 16; ++mask) {
      // Masks in increasing lexicographic order of the assignment.
      std::vector<Chip> a(4);
      for (int p = 0; p < 4; ++p) a[p] = ((mask >> (3 - p)) & 1u) != 0 ? 1 : -1;
      const auto g = with_assignment(f, s.entries(), a);
      if (!all_acz(g)) continue;
      const auto value = testing::naive_isl(g);
      if (value < best) {
        best = value;
        expected = g;
      }
    }
    const auto before = table.isl_sum();
    bcd_step(f, table, s, SubproblemMode::kStageTwo, SolverChoice::kEnumeration);
    CHECK(table.isl_sum() == best);
    CHECK(table.isl_sum() <= before);
    CHECK(f == expected);
    CHECK(table == build_table(f));
  }
}

TEST_CASE("optimal block leaves the family unchanged") {
  Rng rng(3);
  auto f = random_acz_family(31, 4, rng);
  auto table = build_table(f);
  const auto s = select_subset(rng, 31, 4, {4, 2, 0});
  bcd_step(f, table, s, SubproblemMode::kStageTwo, SolverChoice::kEnumeration);
  const auto settled = f;
  const auto out = bcd_step(f, table, s, SubproblemMode::kStageTwo, SolverChoice::kBranchAndBound);
  CHECK_FALSE(out.changed);
  CHECK(out.restricted_after == out.restricted_before);
  CHECK(f == settled);
}

TEST_CASE("stage one") {
  BcdConfig config;
  SUBCASE("feasible start needs no iterations") {
    Rng rng(5);
    const auto f = random_acz_family(31, 4, rng);
    const auto h = run_stage_one(f, config);
    CHECK(h.feasible);
    CHECK(h.stage_one_iterations == 0);
    CHECK(h.final_family == f);
  }
  SUBCASE("all-ones code of length four") {
    config.strategy = {1, 1, 0};
    config.max_iterations = 50;
    const auto h = run_stage_one(CodeFamily(4, 1), config);
    CHECK(h.feasible);
    CHECK(stage_one_objective(build_table(h.final_family)) == 0);
    CHECK(h.stage_one_iterations <= 20);
  }
  SUBCASE("random odd family reaches J = m") {
    config.strategy = {4, 2, 0};
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      config.seed = seed;
      const auto h = run_stage_one(random_family(31, 8, seed), config);
      CHECK(h.feasible);
      CHECK(stage_one_objective(build_table(h.final_family)) == 8);
      for (std::size_t r = 1; r < h.records.size(); ++r) {
        CHECK(h.records[r].stage_one <= h.records[r - 1].stage_one);
      }
    }
  }
  SUBCASE("budget exhaustion is flagged") {
    config.strategy = {1, 1, 0};
    config.max_iterations = 1;
    const auto h = run_stage_one(CodeFamily(31, 8), config);
    CHECK_FALSE(h.feasible);
    CHECK(h.stage_one_iterations == 1);
  }
}

TEST_CASE("stage two") {
  Rng rng(12);
  const auto f = random_acz_family(31, 6, rng);
  BcdConfig config;
  config.strategy = {3, 3, 0};
  config.max_iterations = 300;
  std::int64_t last = std::numeric_limits<std::int64_t>::max();
  bool monotone = true;
  bool feasible = true;
  config.observer = [&](const StepRecord& r, const CodeFamily& family) {
    monotone = monotone && r.isl <= last;
    last = r.isl;
    feasible = feasible && all_acz(family);
  };
  const auto h = run_stage_two(f, config);
  CHECK(monotone);
  CHECK(feasible);
  CHECK(h.records.back().isl < h.records.front().isl);
  CHECK(h.records.back().isl == build_table(h.final_family).isl_sum());
  CHECK_THROWS_AS(run_stage_two(CodeFamily(31, 2), config), std::invalid_argument);

  SUBCASE("patience stops a settled run") {
    config.observer = nullptr;
    config.patience = 5;
    config.max_iterations = 100000;
    config.strategy = {1, 1, 0};
    const auto settled = run_stage_two(h.final_family, config);
    CHECK(settled.stage_two_iterations < 100000);
  }
}

TEST_CASE("initial families") {
  const auto gold = initial_family(Initializer::Parse("gold"), 127, 66, 1);
  CHECK(gold.m() == 66);
  CHECK(acz_count(gold) == 65);
  for (int i = 0; i < 65; ++i) CHECK(is_acz(gold.code(i)));
  const auto weil = initial_family(Initializer::Parse("weil"), 257, 130, 1);
  CHECK(weil.m() == 130);
  CHECK(weil.select({0}) == weil_family({}).select({0}));
  CHECK(initial_family(Initializer::Parse("random"), 31, 3, 4) == random_family(31, 3, 4));
  CHECK_THROWS_AS(initial_family(Initializer::Parse("gold"), 100, 3, 1), std::invalid_argument);
  CHECK_THROWS_AS(initial_family(Initializer::Parse("weil"), 100, 3, 1), std::invalid_argument);
  CHECK_THROWS_AS(Initializer::Parse("sobol"), std::invalid_argument);
  CHECK(Initializer::Parse("file:/tmp/x.txt").to_string() == "file:/tmp/x.txt");
}

TEST_CASE("gold start skips stage one") {
  BcdConfig config;
  config.strategy = {1, 1, 0};
  config.max_iterations = 5;
  const auto h = run(Initializer::Parse("gold"), 127, 65, config);
  CHECK(h.feasible);
  CHECK(h.stage_one_iterations == 0);
  CHECK(h.stage_two_iterations == 5);
}

TEST_CASE("runs are reproducible and checkpointed") {
  const auto dir = scratch("ckpt");
  BcdConfig config;
  config.strategy = {4, 2, 0};
  config.seed = 77;
  config.max_iterations = 120;
  config.checkpoint_every = 50;
  config.output_dir = dir;
  const auto a = run(Initializer::Parse("random"), 31, 6, config);
  config.output_dir.clear();
  const auto b = run(Initializer::Parse("random"), 31, 6, config);
  CHECK(a.final_family == b.final_family);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t r = 0; r < a.records.size(); ++r) {
    CHECK(a.records[r].isl == b.records[r].isl);
    CHECK(a.records[r].restricted_objective == b.records[r].restricted_objective);
    CHECK(a.records[r].stage_one == b.records[r].stage_one);
  }

  CHECK(std::filesystem::exists(dir / "config.json"));
  CHECK(std::filesystem::exists(dir / "family_50.txt"));
  const auto total = a.stage_one_iterations + a.stage_two_iterations;
  CHECK(load_family(dir / ("family_" + std::to_string(total) + ".txt")) == a.final_family);
  const auto lines = read_lines(dir / "history.csv");
  CHECK(lines.front() == "iter,stage,elapsed_s,block_size,active_cols,restricted_obj,isl,mos,J");
  CHECK(lines.size() == a.records.size() + 1);
  std::ostringstream expected;
  for (const auto& line : read_lines(dir / "history.csv")) expected << line << '\n';
  CHECK(expected.str() == history_csv(a.records));
  std::filesystem::remove_all(dir);
}

TEST_CASE("number formatting") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(125.95) == "125.95");
  CHECK(format_double(16.0) == "16");
}

}  // namespace
}  // namespace spreadopt
