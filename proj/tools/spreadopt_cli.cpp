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

// spreadopt: spreading-code design from the command line.
//
//   spreadopt run      two-stage block coordinate descent
//   spreadopt generate Gold / Weil / random families
//   spreadopt eval     correlation metrics of a family file
//   spreadopt bench    block solve timing versus active columns
//
// Exit codes: 0 success, 1 usage or runtime error, 2 run ended without an
// ACZ-feasible family.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spreadopt/spreadopt.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;

struct FamilyDeleter {
  void operator()(spreadopt_family* f) const { spreadopt_family_free(f); }
};
struct ConfigDeleter {
  void operator()(spreadopt_config* c) const { spreadopt_config_free(c); }
};
struct RunDeleter {
  void operator()(spreadopt_run* r) const { spreadopt_run_free(r); }
};
using FamilyPtr = std::unique_ptr<spreadopt_family, FamilyDeleter>;
using ConfigPtr = std::unique_ptr<spreadopt_config, ConfigDeleter>;
using RunPtr = std::unique_ptr<spreadopt_run, RunDeleter>;

std::string num(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return ec == std::errc() ? std::string(buf, ptr) : "nan";
}

int report(spreadopt_status status, const char* what) {
  std::cerr << "spreadopt: " << what << ": " << spreadopt_last_error() << '\n';
  return status == SPREADOPT_ERR_INFEASIBLE ? kExitInfeasible : kExitUsage;
}

void print_metrics(const spreadopt_metrics& m, std::ostream& out) {
  out << "n: " << m.n << '\n'
      << "m: " << m.m << '\n'
      << "isl: " << m.isl << '\n'
      << "mos: " << num(m.mos) << '\n'
      << "sidelobe_mos: " << num(m.sidelobe_mos) << '\n'
      << "J: " << m.stage_one << '\n'
      << "acz_count: " << m.acz_count << '\n';
}

struct RunFlags {
  std::string config;
  // Flag name -> config key; values collected as strings.
  std::vector<std::pair<std::string, std::optional<std::string>>> values;
};

int cmd_run(const RunFlags& flags) {
  spreadopt_config* raw = nullptr;
  const spreadopt_status st = flags.config.empty()
                                  ? spreadopt_config_create(&raw)
                                  : spreadopt_config_load(flags.config.c_str(), &raw);
  if (st != SPREADOPT_OK) return report(st, "config");
  ConfigPtr config(raw);
  for (const auto& [key, value] : flags.values) {
    if (!value) continue;
    const auto s = spreadopt_config_set(config.get(), key.c_str(), value->c_str());
    if (s != SPREADOPT_OK) return report(s, ("--" + key).c_str());
  }

  spreadopt_run* run_raw = nullptr;
  const auto rs = spreadopt_run_execute(config.get(), &run_raw);
  if (rs != SPREADOPT_OK) return report(rs, "run");
  RunPtr run(run_raw);

  spreadopt_run_summary summary{};
  spreadopt_run_get_summary(run.get(), &summary);
  std::cout << "stage_one_iterations: " << summary.stage_one_iterations << '\n'
            << "stage_two_iterations: " << summary.stage_two_iterations << '\n'
            << "feasible: " << (summary.feasible ? "yes" : "no") << '\n'
            << "initial_mos: " << num(summary.initial.mos) << '\n'
            << "final_mos: " << num(summary.final_metrics.mos) << '\n'
            << "final_sidelobe_mos: " << num(summary.final_metrics.sidelobe_mos) << '\n'
            << "final_isl: " << summary.final_metrics.isl << '\n'
            << "final_acz_count: " << summary.final_metrics.acz_count << '\n';
  return summary.feasible ? kExitOk : kExitInfeasible;
}

struct GenerateFlags {
  std::string family;
  int degree = 7;
  int p = 257;
  int legendre_zero_bit = 0;
  int n = 0;
  int m = 0;
  std::uint64_t seed = 0;
  bool acz_only = false;
  std::string out;
};

int cmd_generate(const GenerateFlags& flags) {
  spreadopt_family* raw = nullptr;
  spreadopt_status st;
  if (flags.family == "gold") {
    st = spreadopt_family_gold(flags.degree, &raw);
  } else if (flags.family == "weil") {
    st = spreadopt_family_weil(flags.p, flags.legendre_zero_bit, &raw);
  } else {
    if (flags.n < 2 || flags.m < 1) {
      std::cerr << "spreadopt: random families need --n >= 2 and --m >= 1\n";
      return kExitUsage;
    }
    st = spreadopt_family_random(flags.n, flags.m, flags.seed, &raw);
  }
  if (st != SPREADOPT_OK) return report(st, "generate");
  FamilyPtr family(raw);
  if (flags.acz_only) {
    spreadopt_family* subset = nullptr;
    st = spreadopt_family_acz_subset(family.get(), &subset);
    if (st != SPREADOPT_OK) return report(st, "acz filter");
    family.reset(subset);
  }
  st = spreadopt_family_save(family.get(), flags.out.c_str());
  if (st != SPREADOPT_OK) return report(st, "save");
  std::cout << "wrote " << spreadopt_family_m(family.get()) << " codes of length "
            << spreadopt_family_n(family.get()) << " to " << flags.out << '\n';
  return kExitOk;
}

int cmd_eval(const std::string& in, const std::string& dump) {
  spreadopt_family* raw = nullptr;
  auto st = spreadopt_family_load(in.c_str(), &raw);
  if (st != SPREADOPT_OK) return report(st, in.c_str());
  FamilyPtr family(raw);
  spreadopt_metrics m{};
  st = spreadopt_family_metrics(family.get(), &m);
  if (st != SPREADOPT_OK) return report(st, "metrics");
  print_metrics(m, std::cout);
  if (!dump.empty()) {
    st = spreadopt_family_write_correlations(family.get(), dump.c_str());
    if (st != SPREADOPT_OK) return report(st, "dump");
  }
  return kExitOk;
}

struct BenchFlags {
  int n = 127;
  int m = 66;
  int block_size = 25;
  std::string active_cols = "1,5,25";
  int repeats = 30;
  std::uint64_t seed = 0;
  std::string solver = "auto";
  int threads = 1;
  std::string out;
};

int cmd_bench(const BenchFlags& flags) {
  std::vector<int32_t> cols;
  std::stringstream ss(flags.active_cols);
  std::string item;
  while (std::getline(ss, item, ',')) {
    int32_t v = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || ptr != item.data() + item.size() || v < 1) {
      std::cerr << "spreadopt: bad active-column count '" << item << "'\n";
      return kExitUsage;
    }
    cols.push_back(v);
  }
  if (cols.empty()) {
    std::cerr << "spreadopt: --active-cols-list is empty\n";
    return kExitUsage;
  }
  spreadopt_bench_params params{};
  params.n = flags.n;
  params.m = flags.m;
  params.block_size = flags.block_size;
  params.active_cols = cols.data();
  params.active_cols_count = cols.size();
  params.repeats = flags.repeats;
  params.seed = flags.seed;
  params.solver = flags.solver == "enum"  ? SPREADOPT_SOLVER_ENUM
                  : flags.solver == "bnb" ? SPREADOPT_SOLVER_BNB
                                          : SPREADOPT_SOLVER_AUTO;
  params.threads = flags.threads;
  std::vector<spreadopt_bench_row> rows(cols.size());
  const auto st = spreadopt_bench(&params, rows.data(), rows.size());
  if (st != SPREADOPT_OK) return report(st, "bench");

  std::ostringstream csv;
  csv << "active_cols,mean_build_s,mean_solve_s,mean_total_s,repeats\n";
  for (const auto& r : rows) {
    csv << r.active_cols << ',' << num(r.mean_build_s) << ',' << num(r.mean_solve_s) << ','
        << num(r.mean_total_s) << ',' << r.repeats << '\n';
  }
  if (flags.out.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(flags.out);
    out << csv.str();
    if (!out) {
      std::cerr << "spreadopt: cannot write " << flags.out << '\n';
      return kExitUsage;
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Design binary spreading-code families with low correlation sidelobes"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(spreadopt_version()));

  // run
  auto* run = app.add_subcommand("run", "Two-stage block coordinate descent");
  RunFlags run_flags;
  run->add_option("--config", run_flags.config, "key = value configuration file")
      ->check(CLI::ExistingFile);
  const std::vector<std::pair<std::string, std::string>> run_options = {
      {"n", "Code length"},
      {"m", "Number of codes"},
      {"block-size", "Free bits per block update"},
      {"max-active-cols", "Maximum number of codes per block"},
      {"max-per-col", "Maximum free bits per code (default: even split)"},
      {"init", "random | gold | weil | file:PATH"},
      {"seed", "Random seed"},
      {"max-iters", "Iteration limit per stage (0: none)"},
      {"time-limit", "Seconds per stage, or none"},
      {"patience", "Stage-two stop after this many non-improving iterations"},
      {"solver", "enum | bnb | auto"},
      {"out", "Checkpoint directory"},
      {"checkpoint-every", "Checkpoint period in iterations"},
      {"threads", "Solver threads"},
      {"enum-cap", "Largest block the enumeration solver accepts"},
  };
  run_flags.values.reserve(run_options.size());
  for (const auto& [flag, help] : run_options) {
    std::string key = flag;
    for (char& c : key) c = c == '-' ? '_' : c;
    run_flags.values.emplace_back(key, std::nullopt);
    run->add_option_function<std::string>(
        "--" + flag,
        [&run_flags, idx = run_flags.values.size() - 1](const std::string& v) {
          run_flags.values[idx].second = v;
        },
        help);
  }

  // generate
  auto* gen = app.add_subcommand("generate", "Write a Gold, Weil or random family");
  GenerateFlags gen_flags;
  gen->add_option("--family", gen_flags.family, "gold | weil | random")
      ->required()
      ->check(CLI::IsMember({"gold", "weil", "random"}));
  gen->add_option("--degree", gen_flags.degree, "Gold register degree");
  gen->add_option("--p", gen_flags.p, "Weil prime length");
  gen->add_option("--legendre-zero-bit", gen_flags.legendre_zero_bit,
                  "Legendre sequence bit at index 0");
  gen->add_option("--n", gen_flags.n, "Random code length");
  gen->add_option("--m", gen_flags.m, "Random family size");
  gen->add_option("--seed", gen_flags.seed, "Random seed");
  gen->add_flag("--acz-only", gen_flags.acz_only, "Keep only ACZ codes, in order");
  gen->add_option("--out", gen_flags.out, "Output family file")->required();

  // eval
  auto* eval = app.add_subcommand("eval", "Correlation metrics of a family file");
  std::string eval_in;
  std::string eval_dump;
  eval->add_option("--in", eval_in, "Family file")->required();
  eval->add_option("--dump-correlations", eval_dump, "Write every correlation as CSV");

  // bench
  auto* bench = app.add_subcommand("bench", "Block solve time versus active columns");
  BenchFlags bench_flags;
  bench->add_option("--n", bench_flags.n, "Code length");
  bench->add_option("--m", bench_flags.m, "Number of codes");
  bench->add_option("--block-size", bench_flags.block_size, "Free bits per block");
  bench->add_option("--active-cols-list", bench_flags.active_cols,
                    "Comma separated active-column counts");
  bench->add_option("--repeats", bench_flags.repeats, "Random instances per count");
  bench->add_option("--seed", bench_flags.seed, "Random seed");
  bench->add_option("--solver", bench_flags.solver, "enum | bnb | auto")
      ->check(CLI::IsMember({"enum", "bnb", "auto"}));
  bench->add_option("--threads", bench_flags.threads, "Solver threads");
  bench->add_option("--out", bench_flags.out, "CSV output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*run) return cmd_run(run_flags);
  if (*gen) return cmd_generate(gen_flags);
  if (*eval) return cmd_eval(eval_in, eval_dump);
  if (*bench) return cmd_bench(bench_flags);
  return kExitUsage;
}
