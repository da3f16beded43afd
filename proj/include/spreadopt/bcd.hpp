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

// Two-stage block coordinate descent.
//
// Stage one minimizes the sum of squared shift-one autocorrelations until
// every code satisfies ACZ. Stage two minimizes the full sum of squared
// correlations with ACZ enforced on every block update. Each iteration draws
// a random block of chips and replaces it with the exact minimizer of the
// restricted problem, so the stage objective never increases.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "spreadopt/core.hpp"
#include "spreadopt/correlation.hpp"
#include "spreadopt/generators.hpp"
#include "spreadopt/subproblem.hpp"

namespace spreadopt {

struct SelectionStrategy {
  int block_size = 1;
  int max_active_columns = 1;
  // 0 selects ceil(block_size / min(max_active_columns, block_size)).
  int max_per_column = 0;

  int resolved_max_per_column() const;
  // Throws std::invalid_argument when no subset can be drawn for (n, m).
  void validate(int n, int m) const;
};

// Draws min(max_active_columns, block_size) distinct columns uniformly, then
// fills them round-robin with distinct uniformly drawn rows until block_size
// indices are chosen.
IndexSet select_subset(Rng& rng, int n, int m, const SelectionStrategy& strategy);

enum class SolverChoice { kAuto, kEnumeration, kBranchAndBound };

// kAuto enumerates blocks of at most four bits and branches otherwise.
SolverChoice resolve_solver(SolverChoice choice, int block_size);

struct StepRecord {
  std::int64_t iteration = 0;
  // 0 for the initial state, then 1 or 2.
  int stage = 0;
  double elapsed_s = 0.0;
  int block_size = 0;
  int active_cols = 0;
  std::int64_t restricted_objective = 0;
  std::int64_t isl = 0;
  double mos = 0.0;
  std::int64_t stage_one = 0;
};

struct BcdConfig {
  SelectionStrategy strategy;
  std::uint64_t seed = 0;
  // Per-stage limits. max_iterations <= 0 means no iteration limit.
  std::int64_t max_iterations = 100000;
  double time_limit_s = std::numeric_limits<double>::infinity();
  // Stage two stops after this many consecutive non-improving iterations;
  // 0 selects max(1, 2000 / block_size).
  std::int64_t patience = 0;
  SolverChoice solver = SolverChoice::kAuto;
  SolverOptions solver_options;
  // Empty: no checkpoints.
  std::filesystem::path output_dir;
  std::int64_t checkpoint_every = 500;
  // Called after every recorded step with the current family.
  std::function<void(const StepRecord&, const CodeFamily&)> observer;

  std::int64_t resolved_patience() const;
  void validate(int n, int m) const;
};

struct RunHistory {
  std::vector<StepRecord> records;
  CodeFamily final_family;
  std::int64_t stage_one_iterations = 0;
  std::int64_t stage_two_iterations = 0;
  // False when stage one ran out of budget before reaching ACZ feasibility.
  bool feasible = true;
};

struct StepOutcome {
  std::int64_t restricted_before = 0;
  std::int64_t restricted_after = 0;
  bool changed = false;
  double build_s = 0.0;
  double solve_s = 0.0;
};

// One block update in place. Stage two requires an ACZ-feasible family and
// propagates InfeasibleError otherwise.
StepOutcome bcd_step(CodeFamily& family, CorrelationTable& table, const IndexSet& subset,
                     SubproblemMode mode, SolverChoice solver,
                     const SolverOptions& options = {});

RunHistory run_stage_one(const CodeFamily& family, const BcdConfig& config);
// Throws std::invalid_argument when the family is not ACZ feasible.
RunHistory run_stage_two(const CodeFamily& family, const BcdConfig& config);

struct Initializer {
  enum class Kind { kRandom, kGold, kWeil, kFile };
  Kind kind = Kind::kRandom;
  std::filesystem::path path;

  // "random", "gold", "weil" or "file:PATH".
  static Initializer Parse(const std::string& text);
  std::string to_string() const;
};

// Gold (n = 2^d - 1) takes the ACZ codes first, then the rest in generation
// order; Weil (n prime) takes codes in generation order. Codes beyond the
// size of the base family are drawn at random from `seed`.
CodeFamily initial_family(const Initializer& init, int n, int m, std::uint64_t seed);

// Stage one then stage two, with checkpoints when config.output_dir is set.
RunHistory run(const Initializer& init, int n, int m, const BcdConfig& config);

// history.csv text for a list of records, header included.
std::string history_csv(const std::vector<StepRecord>& records);

// Shortest decimal form that round-trips, independent of locale.
std::string format_double(double value);

}  // namespace spreadopt
