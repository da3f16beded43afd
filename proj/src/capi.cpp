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

#include "spreadopt/spreadopt.h"

#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <string>

#include "spreadopt/bcd.hpp"
#include "spreadopt/bench.hpp"
#include "spreadopt/core.hpp"
#include "spreadopt/correlation.hpp"
#include "spreadopt/generators.hpp"
#include "spreadopt/run_config.hpp"

struct spreadopt_family {
  spreadopt::CodeFamily value;
};

struct spreadopt_config {
  spreadopt::RunConfig value;
};

struct spreadopt_run {
  spreadopt::RunHistory history;
  spreadopt_metrics initial{};
  spreadopt_metrics final_metrics{};
  std::string csv;
};

namespace {

thread_local std::string last_error;

spreadopt_status fail(spreadopt_status status, const std::string& message) {
  last_error = message;
  return status;
}

// Maps exceptions thrown by the core onto status codes.
template <typename F>
spreadopt_status guarded(F&& body) {
  try {
    return body();
  } catch (const spreadopt::FormatError& e) {
    return fail(SPREADOPT_ERR_PARSE, e.what());
  } catch (const spreadopt::InfeasibleError& e) {
    return fail(SPREADOPT_ERR_INFEASIBLE, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(SPREADOPT_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::out_of_range& e) {
    return fail(SPREADOPT_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(SPREADOPT_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SPREADOPT_ERR_INTERNAL, "out of memory");
  } catch (const std::runtime_error& e) {
    // Remaining runtime errors from the core are file-system failures.
    return fail(SPREADOPT_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(SPREADOPT_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SPREADOPT_ERR_INTERNAL, "unknown error");
  }
}

#define SPREADOPT_REQUIRE(cond, what) \
  if (!(cond)) return fail(SPREADOPT_ERR_INVALID_ARGUMENT, what)

spreadopt_status emit(spreadopt::CodeFamily family, spreadopt_family** out) {
  *out = new spreadopt_family{std::move(family)};
  return SPREADOPT_OK;
}

spreadopt_metrics metrics_of(const spreadopt::CodeFamily& family) {
  const auto table = spreadopt::build_table(family);
  const auto obj = spreadopt::isl(table);
  spreadopt_metrics m{};
  m.n = family.n();
  m.m = family.m();
  m.isl = obj.isl;
  m.mos = obj.mos;
  m.sidelobe_mos = obj.sidelobe_mos;
  m.stage_one = spreadopt::stage_one_objective(table);
  m.acz_count = spreadopt::acz_count(family);
  return m;
}

}  // namespace

extern "C" {

const char* spreadopt_version(void) { return "1.0.0"; }

const char* spreadopt_last_error(void) { return last_error.c_str(); }

spreadopt_status spreadopt_family_load(const char* path, spreadopt_family** out) {
  SPREADOPT_REQUIRE(path && out, "null argument");
  return guarded([&] { return emit(spreadopt::load_family(path), out); });
}

spreadopt_status spreadopt_family_save(const spreadopt_family* family, const char* path) {
  SPREADOPT_REQUIRE(family && path, "null argument");
  return guarded([&] {
    spreadopt::save_family(family->value, path);
    return SPREADOPT_OK;
  });
}

spreadopt_status spreadopt_family_from_chips(int32_t n, int32_t m, const int8_t* chips,
                                             spreadopt_family** out) {
  SPREADOPT_REQUIRE(chips && out, "null argument");
  SPREADOPT_REQUIRE(n >= 2 && m >= 1, "need n >= 2 and m >= 1");
  return guarded([&] {
    std::vector<spreadopt::Chip> v(chips, chips + static_cast<std::size_t>(n) * m);
    return emit(spreadopt::CodeFamily(n, m, std::move(v)), out);
  });
}

spreadopt_status spreadopt_family_gold(int32_t degree, spreadopt_family** out) {
  SPREADOPT_REQUIRE(out, "null argument");
  return guarded([&] {
    const auto spec = spreadopt::default_gold_spec(degree);
    if (!spec) {
      return fail(SPREADOPT_ERR_INVALID_ARGUMENT,
                  "no preferred pair known for degree " + std::to_string(degree) +
                      " (supported: 5, 6, 7, 9, 10, 11)");
    }
    return emit(spreadopt::gold_family(*spec), out);
  });
}

spreadopt_status spreadopt_family_weil(int32_t p, int32_t legendre_zero_bit,
                                       spreadopt_family** out) {
  SPREADOPT_REQUIRE(out, "null argument");
  return guarded([&] {
    return emit(spreadopt::weil_family(spreadopt::WeilSpec{p, legendre_zero_bit}), out);
  });
}

spreadopt_status spreadopt_family_random(int32_t n, int32_t m, uint64_t seed,
                                         spreadopt_family** out) {
  SPREADOPT_REQUIRE(out, "null argument");
  return guarded([&] { return emit(spreadopt::random_family(n, m, seed), out); });
}

spreadopt_status spreadopt_family_acz_subset(const spreadopt_family* family,
                                             spreadopt_family** out) {
  SPREADOPT_REQUIRE(family && out, "null argument");
  return guarded([&] { return emit(spreadopt::acz_subset(family->value), out); });
}

void spreadopt_family_free(spreadopt_family* family) { delete family; }

int32_t spreadopt_family_n(const spreadopt_family* family) {
  return family ? family->value.n() : 0;
}

int32_t spreadopt_family_m(const spreadopt_family* family) {
  return family ? family->value.m() : 0;
}

spreadopt_status spreadopt_family_chips(const spreadopt_family* family, int8_t* out,
                                        size_t len) {
  SPREADOPT_REQUIRE(family && out, "null argument");
  const auto& chips = family->value.chips();
  SPREADOPT_REQUIRE(len >= chips.size(), "output buffer too small");
  std::memcpy(out, chips.data(), chips.size());
  return SPREADOPT_OK;
}

spreadopt_status spreadopt_family_metrics(const spreadopt_family* family,
                                          spreadopt_metrics* out) {
  SPREADOPT_REQUIRE(family && out, "null argument");
  return guarded([&] {
    *out = metrics_of(family->value);
    return SPREADOPT_OK;
  });
}

spreadopt_status spreadopt_family_write_correlations(const spreadopt_family* family,
                                                     const char* path) {
  SPREADOPT_REQUIRE(family && path, "null argument");
  return guarded([&] {
    const auto table = spreadopt::build_table(family->value);
    std::ofstream out(path);
    if (!out) return fail(SPREADOPT_ERR_IO, std::string("cannot open ") + path);
    out << "i,j,k,value\n";
    const int n = table.n();
    const int m = table.m();
    std::string line;
    for (int i = 0; i < m; ++i) {
      for (int j = i; j < m; ++j) {
        auto row = table.row(i, j);
        for (int k = 0; k < n; ++k) {
          line = std::to_string(i) + ',' + std::to_string(j) + ',' + std::to_string(k) + ',' +
                 std::to_string(row[k]) + '\n';
          out << line;
        }
      }
    }
    if (!out) return fail(SPREADOPT_ERR_IO, std::string("write failed for ") + path);
    return SPREADOPT_OK;
  });
}

spreadopt_status spreadopt_config_create(spreadopt_config** out) {
  SPREADOPT_REQUIRE(out, "null argument");
  return guarded([&] {
    *out = new spreadopt_config{};
    return SPREADOPT_OK;
  });
}

spreadopt_status spreadopt_config_load(const char* path, spreadopt_config** out) {
  SPREADOPT_REQUIRE(path && out, "null argument");
  return guarded([&] {
    auto cfg = std::make_unique<spreadopt_config>();
    try {
      cfg->value = spreadopt::load_run_config(path);
    } catch (const std::invalid_argument& e) {
      return fail(SPREADOPT_ERR_PARSE, e.what());
    }
    *out = cfg.release();
    return SPREADOPT_OK;
  });
}

spreadopt_status spreadopt_config_set(spreadopt_config* config, const char* key,
                                      const char* value) {
  SPREADOPT_REQUIRE(config && key && value, "null argument");
  return guarded([&] {
    config->value.set(key, value);
    return SPREADOPT_OK;
  });
}

void spreadopt_config_free(spreadopt_config* config) { delete config; }

spreadopt_status spreadopt_run_execute(const spreadopt_config* config, spreadopt_run** out) {
  SPREADOPT_REQUIRE(config && out, "null argument");
  return guarded([&] {
    const auto& cfg = config->value;
    cfg.validate();
    auto result = std::make_unique<spreadopt_run>();
    result->initial = metrics_of(spreadopt::initial_family(cfg.init, *cfg.n, *cfg.m, cfg.bcd.seed));
    result->history = spreadopt::run(cfg.init, *cfg.n, *cfg.m, cfg.bcd);
    result->final_metrics = metrics_of(result->history.final_family);
    result->csv = spreadopt::history_csv(result->history.records);
    *out = result.release();
    return SPREADOPT_OK;
  });
}

spreadopt_status spreadopt_run_get_summary(const spreadopt_run* run, spreadopt_run_summary* out) {
  SPREADOPT_REQUIRE(run && out, "null argument");
  out->stage_one_iterations = run->history.stage_one_iterations;
  out->stage_two_iterations = run->history.stage_two_iterations;
  out->feasible = run->history.feasible ? 1 : 0;
  out->initial = run->initial;
  out->final_metrics = run->final_metrics;
  return SPREADOPT_OK;
}

spreadopt_status spreadopt_run_final_family(const spreadopt_run* run, spreadopt_family** out) {
  SPREADOPT_REQUIRE(run && out, "null argument");
  return guarded([&] { return emit(run->history.final_family, out); });
}

const char* spreadopt_run_history_csv(const spreadopt_run* run) {
  return run ? run->csv.c_str() : "";
}

void spreadopt_run_free(spreadopt_run* run) { delete run; }

spreadopt_status spreadopt_bench(const spreadopt_bench_params* params, spreadopt_bench_row* rows,
                                 size_t rows_len) {
  SPREADOPT_REQUIRE(params && rows, "null argument");
  SPREADOPT_REQUIRE(params->active_cols && params->active_cols_count > 0,
                    "no active-column counts given");
  SPREADOPT_REQUIRE(rows_len >= params->active_cols_count, "row buffer too small");
  return guarded([&] {
    spreadopt::BenchParams p;
    p.n = params->n;
    p.m = params->m;
    p.block_size = params->block_size;
    p.active_columns.assign(params->active_cols, params->active_cols + params->active_cols_count);
    p.repeats = params->repeats;
    p.seed = params->seed;
    switch (params->solver) {
      case SPREADOPT_SOLVER_ENUM:
        p.solver = spreadopt::SolverChoice::kEnumeration;
        break;
      case SPREADOPT_SOLVER_BNB:
        p.solver = spreadopt::SolverChoice::kBranchAndBound;
        break;
      default:
        p.solver = spreadopt::SolverChoice::kAuto;
        break;
    }
    p.solver_options.threads = params->threads > 0 ? params->threads : 1;
    const auto result = spreadopt::run_bench(p);
    for (std::size_t r = 0; r < result.size(); ++r) {
      rows[r] = {result[r].active_cols, result[r].mean_build_s, result[r].mean_solve_s,
                 result[r].mean_total_s, result[r].repeats};
    }
    return SPREADOPT_OK;
  });
}

}  // extern "C"
