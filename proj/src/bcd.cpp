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

#include "spreadopt/bcd.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <optional>
#include <stdexcept>

#include "json.hpp"

namespace spreadopt {

int SelectionStrategy::resolved_max_per_column() const {
  if (max_per_column > 0) return max_per_column;
  const int cols = std::max(1, std::min(max_active_columns, block_size));
  return (block_size + cols - 1) / cols;
}

void SelectionStrategy::validate(int n, int m) const {
  if (block_size < 1) throw std::invalid_argument("block size must be at least 1");
  if (max_active_columns < 1 || max_active_columns > m) {
    throw std::invalid_argument("max active columns must lie in [1, m]");
  }
  const int per_column = resolved_max_per_column();
  if (per_column > n) {
    throw std::invalid_argument("max indices per column exceeds the code length");
  }
  const int cols = std::min(max_active_columns, block_size);
  if (static_cast<long long>(cols) * per_column < block_size) {
    throw std::invalid_argument(
        "block cannot be filled: active columns times indices per column < block size");
  }
}

IndexSet select_subset(Rng& rng, int n, int m, const SelectionStrategy& strategy) {
  strategy.validate(n, m);
  const int cols = std::min(strategy.max_active_columns, strategy.block_size);
  const int per_column = strategy.resolved_max_per_column();

  // Partial Fisher-Yates for the columns.
  std::vector<int> columns(m);
  for (int i = 0; i < m; ++i) columns[i] = i;
  for (int i = 0; i < cols; ++i) {
    const int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(m - i)));
    std::swap(columns[i], columns[j]);
  }
  columns.resize(cols);

  // Each column keeps its own partially shuffled row pool.
  std::vector<std::vector<int>> rows(cols);
  std::vector<BitIndex> entries;
  entries.reserve(strategy.block_size);
  for (int round = 0; static_cast<int>(entries.size()) < strategy.block_size; ++round) {
    for (int c = 0; c < cols && static_cast<int>(entries.size()) < strategy.block_size; ++c) {
      if (round >= per_column) break;
      auto& pool = rows[c];
      if (pool.empty()) {
        pool.resize(n);
        for (int r = 0; r < n; ++r) pool[r] = r;
      }
      const int j = round + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - round)));
      std::swap(pool[round], pool[j]);
      entries.push_back({columns[c], pool[round]});
    }
  }
  return IndexSet(std::move(entries), n, m);
}

SolverChoice resolve_solver(SolverChoice choice, int block_size) {
  if (choice != SolverChoice::kAuto) return choice;
  return block_size <= 4 ? SolverChoice::kEnumeration : SolverChoice::kBranchAndBound;
}

std::int64_t BcdConfig::resolved_patience() const {
  if (patience > 0) return patience;
  return std::max<std::int64_t>(1, 2000 / std::max(1, strategy.block_size));
}

void BcdConfig::validate(int n, int m) const {
  strategy.validate(n, m);
  if (patience < 0) throw std::invalid_argument("patience must be positive");
  if (max_iterations <= 0 && !std::isfinite(time_limit_s)) {
    throw std::invalid_argument("either an iteration limit or a time limit is required");
  }
  if (max_iterations < 0) throw std::invalid_argument("max iterations must be nonnegative");
  if (!(time_limit_s >= 0)) throw std::invalid_argument("time limit must be nonnegative");
  if (checkpoint_every < 1) throw std::invalid_argument("checkpoint period must be positive");
  if (solver_options.threads < 1) throw std::invalid_argument("threads must be positive");
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Selection stream seed, decorrelated from the seed used for random init.
std::uint64_t selection_seed(std::uint64_t seed) { return seed ^ 0x9E3779B97F4A7C15ull; }

}  // namespace

StepOutcome bcd_step(CodeFamily& family, CorrelationTable& table, const IndexSet& subset,
                     SubproblemMode mode, SolverChoice solver, const SolverOptions& options) {
  StepOutcome out;
  auto t0 = Clock::now();
  const PartialProblem problem = build_partial(family, table, subset, mode);
  out.build_s = seconds_since(t0);

  out.restricted_before = evaluate(problem, problem.incumbent);
  t0 = Clock::now();
  const SolveResult result =
      resolve_solver(solver, static_cast<int>(problem.size())) == SolverChoice::kEnumeration
          ? solve_exhaustive(problem, options)
          : solve_branch_and_bound(problem, options);
  out.solve_s = seconds_since(t0);
  out.restricted_after = result.objective;

  std::vector<Assignment> assignment;
  for (std::size_t p = 0; p < problem.size(); ++p) {
    if (result.assignment[p] != problem.incumbent[p]) {
      assignment.push_back({problem.free_bits[p], result.assignment[p]});
    }
  }
  out.changed = !assignment.empty();
  apply_assignment(family, table, assignment);
  return out;
}

namespace {

class Runner {
 public:
  Runner(CodeFamily family, const BcdConfig& config, std::uint64_t rng_seed)
      : config_(config),
        family_(std::move(family)),
        table_(build_table(family_, config.solver_options.threads)),
        rng_(rng_seed),
        start_(Clock::now()) {
    config_.validate(family_.n(), family_.m());
  }

  void write_config(const nlohmann::json& extra) {
    if (config_.output_dir.empty()) return;
    std::filesystem::create_directories(config_.output_dir);
    nlohmann::json j = extra;
    j["n"] = family_.n();
    j["m"] = family_.m();
    j["block_size"] = config_.strategy.block_size;
    j["max_active_cols"] = config_.strategy.max_active_columns;
    j["max_per_col"] = config_.strategy.resolved_max_per_column();
    j["seed"] = config_.seed;
    j["max_iters"] = config_.max_iterations;
    if (std::isfinite(config_.time_limit_s)) {
      j["time_limit"] = config_.time_limit_s;
    } else {
      j["time_limit"] = nullptr;
    }
    j["patience"] = config_.resolved_patience();
    const char* solver = "auto";
    if (config_.solver == SolverChoice::kEnumeration) solver = "enum";
    if (config_.solver == SolverChoice::kBranchAndBound) solver = "bnb";
    j["solver"] = solver;
    j["resolved_solver"] =
        resolve_solver(config_.solver, config_.strategy.block_size) == SolverChoice::kEnumeration
            ? "enum"
            : "bnb";
    j["threads"] = config_.solver_options.threads;
    j["enum_cap"] = config_.solver_options.enumeration_cap;
    j["checkpoint_every"] = config_.checkpoint_every;
    j["out"] = config_.output_dir.string();
    std::ofstream(config_.output_dir / "config.json") << j.dump(2) << '\n';
  }

  void record_initial() {
    StepRecord r;
    r.stage = 0;
    r.restricted_objective = 0;
    fill_globals(r);
    push(r);
  }

  // Returns true when the family is ACZ feasible at exit.
  bool stage_one() {
    const std::int64_t floor = static_cast<std::int64_t>(family_.m()) * acz_bound(family_.n());
    if (stage_one_objective(table_) == floor) return true;
    const auto stage_start = Clock::now();
    for (std::int64_t it = 0; config_.max_iterations <= 0 || it < config_.max_iterations; ++it) {
      if (seconds_since(stage_start) >= config_.time_limit_s) break;
      const IndexSet subset = select_subset(rng_, family_.n(), family_.m(), config_.strategy);
      const StepOutcome step = bcd_step(family_, table_, subset, SubproblemMode::kStageOne,
                                        config_.solver, config_.solver_options);
      ++history_.stage_one_iterations;
      record_step(1, subset, step);
      // With |(x*x)_1| >= g for every code, J reaches m*g exactly when all
      // codes are ACZ.
      if (stage_one_objective(table_) == floor) return true;
    }
    return false;
  }

  void stage_two() {
    if (!all_acz(family_)) {
      throw std::invalid_argument("stage two requires an ACZ-feasible family");
    }
    const auto stage_start = Clock::now();
    const std::int64_t patience = config_.resolved_patience();
    std::int64_t stale = 0;
    for (std::int64_t it = 0; config_.max_iterations <= 0 || it < config_.max_iterations; ++it) {
      if (seconds_since(stage_start) >= config_.time_limit_s) break;
      const IndexSet subset = select_subset(rng_, family_.n(), family_.m(), config_.strategy);
      const std::int64_t before = table_.isl_sum();
      const StepOutcome step = bcd_step(family_, table_, subset, SubproblemMode::kStageTwo,
                                        config_.solver, config_.solver_options);
      ++history_.stage_two_iterations;
      record_step(2, subset, step);
      stale = table_.isl_sum() < before ? 0 : stale + 1;
      if (stale >= patience) break;
    }
  }

  RunHistory finish(bool feasible) {
    history_.feasible = feasible;
    checkpoint();
    history_.final_family = family_;
    return std::move(history_);
  }

 private:
  void fill_globals(StepRecord& r) const {
    r.iteration = iteration_;
    r.elapsed_s = seconds_since(start_);
    const ObjectiveValue obj = isl(table_);
    r.isl = obj.isl;
    r.mos = obj.mos;
    r.stage_one = stage_one_objective(table_);
  }

  void record_step(int stage, const IndexSet& subset, const StepOutcome& step) {
    ++iteration_;
    StepRecord r;
    r.stage = stage;
    r.block_size = static_cast<int>(subset.size());
    r.active_cols = static_cast<int>(subset.active_columns().size());
    r.restricted_objective = step.restricted_after;
    fill_globals(r);
    push(r);
    if (!config_.output_dir.empty() && iteration_ % config_.checkpoint_every == 0) {
      checkpoint();
    }
  }

  void push(const StepRecord& r) {
    history_.records.push_back(r);
    if (config_.observer) config_.observer(r, family_);
  }

  void checkpoint() {
    if (config_.output_dir.empty()) return;
    // Spot check the incrementally maintained table.
    const CorrelationTable fresh = build_table(family_);
    if (fresh.isl_sum() != table_.isl_sum() ||
        fresh.stage_one_sum() != table_.stage_one_sum()) {
      throw std::logic_error("incremental correlation table diverged from recomputation");
    }
    std::filesystem::create_directories(config_.output_dir);
    save_family(family_, config_.output_dir / ("family_" + std::to_string(iteration_) + ".txt"));

    const auto path = config_.output_dir / "history.csv";
    std::ofstream out(path, flushed_ == 0 ? std::ios::trunc : std::ios::app);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    std::vector<StepRecord> pending(history_.records.begin() + flushed_, history_.records.end());
    std::string text = history_csv(pending);
    if (flushed_ != 0) text.erase(0, text.find('\n') + 1);
    out << text;
    flushed_ = history_.records.size();
  }

  BcdConfig config_;
  CodeFamily family_;
  CorrelationTable table_;
  Rng rng_;
  Clock::time_point start_;
  std::int64_t iteration_ = 0;
  std::size_t flushed_ = 0;
  RunHistory history_;
};

}  // namespace

RunHistory run_stage_one(const CodeFamily& family, const BcdConfig& config) {
  Runner runner(family, config, selection_seed(config.seed));
  runner.record_initial();
  const bool feasible = runner.stage_one();
  return runner.finish(feasible);
}

RunHistory run_stage_two(const CodeFamily& family, const BcdConfig& config) {
  if (!all_acz(family)) throw std::invalid_argument("stage two requires an ACZ-feasible family");
  Runner runner(family, config, selection_seed(config.seed));
  runner.record_initial();
  runner.stage_two();
  return runner.finish(true);
}

Initializer Initializer::Parse(const std::string& text) {
  Initializer init;
  if (text == "random") {
    init.kind = Kind::kRandom;
  } else if (text == "gold") {
    init.kind = Kind::kGold;
  } else if (text == "weil") {
    init.kind = Kind::kWeil;
  } else if (text.rfind("file:", 0) == 0 && text.size() > 5) {
    init.kind = Kind::kFile;
    init.path = text.substr(5);
  } else {
    throw std::invalid_argument("unknown initializer '" + text +
                                "', expected random, gold, weil or file:PATH");
  }
  return init;
}

std::string Initializer::to_string() const {
  switch (kind) {
    case Kind::kRandom:
      return "random";
    case Kind::kGold:
      return "gold";
    case Kind::kWeil:
      return "weil";
    case Kind::kFile:
      return "file:" + path.string();
  }
  return "random";
}

namespace {

CodeFamily fill_to(const CodeFamily& base, std::vector<int> order, int m, std::uint64_t seed) {
  if (static_cast<int>(order.size()) >= m) {
    order.resize(m);
    return base.select(order);
  }
  const int extra = m - static_cast<int>(order.size());
  const CodeFamily head = base.select(order);
  const CodeFamily tail = random_family(base.n(), extra, seed);
  std::vector<Chip> chips = head.chips();
  chips.insert(chips.end(), tail.chips().begin(), tail.chips().end());
  return CodeFamily(base.n(), m, std::move(chips));
}

}  // namespace

CodeFamily initial_family(const Initializer& init, int n, int m, std::uint64_t seed) {
  if (n < 2 || m < 1) throw std::invalid_argument("need n >= 2 and m >= 1");
  switch (init.kind) {
    case Initializer::Kind::kRandom:
      return random_family(n, m, seed);
    case Initializer::Kind::kGold: {
      const int degree = std::bit_width(static_cast<unsigned>(n + 1)) - 1;
      if ((1 << degree) != n + 1) {
        throw std::invalid_argument("gold initialization needs n = 2^d - 1, got n = " +
                                    std::to_string(n));
      }
      const auto spec = default_gold_spec(degree);
      if (!spec) {
        throw std::invalid_argument("no preferred pair known for degree " +
                                    std::to_string(degree));
      }
      const CodeFamily gold = gold_family(*spec);
      std::vector<int> order = acz_indices(gold);
      for (int i = 0; i < gold.m(); ++i) {
        if (!is_acz(gold.code(i))) order.push_back(i);
      }
      return fill_to(gold, std::move(order), m, seed);
    }
    case Initializer::Kind::kWeil: {
      if (n < 5 || !is_prime(n)) {
        throw std::invalid_argument("weil initialization needs a prime n >= 5, got n = " +
                                    std::to_string(n));
      }
      const CodeFamily weil = weil_family(WeilSpec{n, 0});
      std::vector<int> order(weil.m());
      for (int i = 0; i < weil.m(); ++i) order[i] = i;
      return fill_to(weil, std::move(order), m, seed);
    }
    case Initializer::Kind::kFile: {
      CodeFamily family = load_family(init.path);
      if (family.n() != n || family.m() != m) {
        throw std::invalid_argument("initial family file has n=" + std::to_string(family.n()) +
                                    " m=" + std::to_string(family.m()) + ", expected n=" +
                                    std::to_string(n) + " m=" + std::to_string(m));
      }
      return family;
    }
  }
  throw std::invalid_argument("unknown initializer");
}

RunHistory run(const Initializer& init, int n, int m, const BcdConfig& config) {
  config.validate(n, m);
  Runner runner(initial_family(init, n, m, config.seed), config, selection_seed(config.seed));
  runner.write_config({{"init", init.to_string()}});
  runner.record_initial();
  const bool feasible = runner.stage_one();
  if (feasible) runner.stage_two();
  return runner.finish(feasible);
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

std::string history_csv(const std::vector<StepRecord>& records) {
  std::string out = "iter,stage,elapsed_s,block_size,active_cols,restricted_obj,isl,mos,J\n";
  for (const auto& r : records) {
    out += std::to_string(r.iteration) + ',' + std::to_string(r.stage) + ',' +
           format_double(r.elapsed_s) + ',' + std::to_string(r.block_size) + ',' +
           std::to_string(r.active_cols) + ',' + std::to_string(r.restricted_objective) + ',' +
           std::to_string(r.isl) + ',' + format_double(r.mos) + ',' +
           std::to_string(r.stage_one) + '\n';
  }
  return out;
}

}  // namespace spreadopt
