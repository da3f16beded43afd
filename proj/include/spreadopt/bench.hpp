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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spreadopt/bcd.hpp"

namespace spreadopt {

struct BenchParams {
  int n = 127;
  int m = 66;
  int block_size = 25;
  std::vector<int> active_columns{1, 5, 25};
  int repeats = 30;
  std::uint64_t seed = 0;
  SolverChoice solver = SolverChoice::kAuto;
  SolverOptions solver_options;
};

struct BenchRow {
  int active_cols = 0;
  double mean_build_s = 0.0;
  double mean_solve_s = 0.0;
  double mean_total_s = 0.0;
  int repeats = 0;
};

// For every active-column count c, times `repeats` block solves on fresh
// random families with a random block spread over c columns (at most
// ceil(block_size / c) bits each) and no ACZ constraint.
std::vector<BenchRow> run_bench(const BenchParams& params);

std::string bench_csv(const std::vector<BenchRow>& rows);

}  // namespace spreadopt
