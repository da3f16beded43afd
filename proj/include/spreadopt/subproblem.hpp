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

// Partial minimization over a block of free chips.
//
// With every chip outside the block held at its incumbent value, each retained
// correlation (x^i * x^j)_k is an affine function of the free chips and of
// their pairwise products:
//
//   value = constant + sum_p a_p b_p + sum_{p<q} c_pq b_p b_q
//
// where b_p in {-1, +1}. A product x^i_s x^j_l lands in the bilinear part when
// both chips are free, in the linear part (coefficient = the fixed partner
// chip) when exactly one is free, and in the constant otherwise. The objective
// is the sum of squared values. The mixed-integer form of the same problem
// introduces an auxiliary z = b_p b_q per free pair together with the four
// linking inequalities z <= b_q - b_p + 1, z <= b_p - b_q + 1,
// z >= -b_p - b_q - 1, z >= b_p + b_q - 1; the solvers here work on the
// products directly, so those constraints are never materialized.

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "spreadopt/core.hpp"
#include "spreadopt/correlation.hpp"

namespace spreadopt {

enum class SubproblemMode {
  // Shift-one autocorrelations of the active columns only, no constraint.
  kStageOne,
  // Every correlation touching an active column, ACZ on active columns.
  kStageTwo,
  // Stage-two objective without the ACZ constraint (timing benchmarks).
  kUnconstrained,
};

struct LinearEntry {
  int bit = 0;
  int coef = 0;
};

struct BilinearEntry {
  int first = 0;  // first < second
  int second = 0;
  int coef = 0;
};

struct PartialTerm {
  int i = 0;
  int j = 0;
  int k = 0;
  std::int64_t constant = 0;
  std::uint32_t linear_begin = 0;
  std::uint32_t linear_end = 0;
  std::uint32_t bilinear_begin = 0;
  std::uint32_t bilinear_end = 0;
};

struct PartialProblem {
  int n = 0;
  int m = 0;
  SubproblemMode mode = SubproblemMode::kStageTwo;
  int acz_bound = 0;
  std::vector<BitIndex> free_bits;
  std::vector<int> active_columns;
  // Incumbent values of the free bits when the problem was built.
  std::vector<Chip> incumbent;
  // Terms that depend on at least one free bit (plus every ACZ term).
  std::vector<PartialTerm> terms;
  std::vector<LinearEntry> linear;
  std::vector<BilinearEntry> bilinear;
  // Sum of squares of the retained terms that do not depend on any free bit.
  std::int64_t offset = 0;
  // Number of retained (i, j, k) terms, folded ones included.
  std::int64_t retained_terms = 0;
  // Index into `terms` of each active column's shift-one autocorrelation.
  // Empty unless mode is kStageTwo.
  std::vector<int> acz_terms;

  std::size_t size() const { return free_bits.size(); }
  bool constrained() const { return mode == SubproblemMode::kStageTwo; }
};

PartialProblem build_partial(const CodeFamily& family, const CorrelationTable& table,
                             const IndexSet& subset, SubproblemMode mode);

std::int64_t evaluate(const PartialProblem& problem, std::span<const Chip> assignment);

// Value of every stored term under `assignment`.
std::vector<std::int64_t> term_values(const PartialProblem& problem,
                                      std::span<const Chip> assignment);

bool satisfies_acz(const PartialProblem& problem, std::span<const Chip> assignment);

struct SolveResult {
  std::vector<Chip> assignment;
  std::int64_t objective = 0;
  std::uint64_t nodes_explored = 0;
};

class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolverOptions {
  int threads = 1;
  int enumeration_cap = 20;
};

// Both solvers return the minimizer of evaluate() over the feasible
// assignments; among equal objectives the lexicographically smallest
// assignment in free-bit order, with -1 before +1.
SolveResult solve_exhaustive(const PartialProblem& problem, const SolverOptions& options = {});
SolveResult solve_branch_and_bound(const PartialProblem& problem,
                                   const SolverOptions& options = {});

// One line per stored term: "i j k | const | id:coef ... | id,id:coef ...".
std::string dump_partial(const PartialProblem& problem);

}  // namespace spreadopt
