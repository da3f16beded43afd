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

#include "spreadopt/bench.hpp"

#include <chrono>
#include <stdexcept>

namespace spreadopt {

std::vector<BenchRow> run_bench(const BenchParams& params) {
  if (params.repeats < 1) throw std::invalid_argument("repeats must be positive");
  if (params.active_columns.empty()) throw std::invalid_argument("no active-column counts given");
  for (int c : params.active_columns) {
    if (c < 1 || c > params.m || c > params.block_size) {
      throw std::invalid_argument("active-column count " + std::to_string(c) +
                                  " must lie in [1, min(m, block size)]");
    }
    SelectionStrategy{params.block_size, c, 0}.validate(params.n, params.m);
  }

  using Clock = std::chrono::steady_clock;
  const SolverChoice solver = resolve_solver(params.solver, params.block_size);
  std::vector<BenchRow> rows;
  for (int c : params.active_columns) {
    const SelectionStrategy strategy{params.block_size, c, 0};
    Rng rng(params.seed ^ (0xA0761D6478BD642Full * static_cast<std::uint64_t>(c)));
    BenchRow row;
    row.active_cols = c;
    row.repeats = params.repeats;
    for (int r = 0; r < params.repeats; ++r) {
      const CodeFamily family = random_family(params.n, params.m, rng.next());
      const CorrelationTable table = build_table(family);
      const IndexSet subset = select_subset(rng, params.n, params.m, strategy);

      auto t0 = Clock::now();
      const PartialProblem problem =
          build_partial(family, table, subset, SubproblemMode::kUnconstrained);
      auto t1 = Clock::now();
      if (solver == SolverChoice::kEnumeration) {
        solve_exhaustive(problem, params.solver_options);
      } else {
        solve_branch_and_bound(problem, params.solver_options);
      }
      auto t2 = Clock::now();
      row.mean_build_s += std::chrono::duration<double>(t1 - t0).count();
      row.mean_solve_s += std::chrono::duration<double>(t2 - t1).count();
    }
    row.mean_build_s /= params.repeats;
    row.mean_solve_s /= params.repeats;
    row.mean_total_s = row.mean_build_s + row.mean_solve_s;
    rows.push_back(row);
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::string out = "active_cols,mean_build_s,mean_solve_s,mean_total_s,repeats\n";
  for (const auto& r : rows) {
    out += std::to_string(r.active_cols) + ',' + format_double(r.mean_build_s) + ',' +
           format_double(r.mean_solve_s) + ',' + format_double(r.mean_total_s) + ',' +
           std::to_string(r.repeats) + '\n';
  }
  return out;
}

}  // namespace spreadopt
