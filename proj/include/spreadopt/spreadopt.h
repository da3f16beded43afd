/* Copyright 2026 The spreadopt Authors
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface of libspreadopt.
 *
 * Objects are opaque handles created by the library and released with the
 * matching *_free function (which accepts NULL). Every fallible call returns
 * a spreadopt_status; on failure spreadopt_last_error() describes the error
 * for the calling thread until its next failing call. Output handles are only
 * written on success.
 */

#ifndef SPREADOPT_SPREADOPT_H_
#define SPREADOPT_SPREADOPT_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SPREADOPT_API __declspec(dllexport)
#else
#define SPREADOPT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum spreadopt_status {
  SPREADOPT_OK = 0,
  SPREADOPT_ERR_INVALID_ARGUMENT = 1,
  SPREADOPT_ERR_PARSE = 2,
  SPREADOPT_ERR_IO = 3,
  SPREADOPT_ERR_INFEASIBLE = 4,
  SPREADOPT_ERR_INTERNAL = 5
} spreadopt_status;

typedef enum spreadopt_solver {
  SPREADOPT_SOLVER_AUTO = 0,
  SPREADOPT_SOLVER_ENUM = 1,
  SPREADOPT_SOLVER_BNB = 2
} spreadopt_solver;

typedef struct spreadopt_family spreadopt_family;
typedef struct spreadopt_config spreadopt_config;
typedef struct spreadopt_run spreadopt_run;

/* mos: isl / (n m (m+1) / 2). sidelobe_mos: same with the m zero-shift
 * autocorrelation peaks removed from isl. stage_one: sum of squared shift-one
 * autocorrelations. */
typedef struct spreadopt_metrics {
  int32_t n;
  int32_t m;
  int64_t isl;
  double mos;
  double sidelobe_mos;
  int64_t stage_one;
  int32_t acz_count;
} spreadopt_metrics;

SPREADOPT_API const char* spreadopt_version(void);
SPREADOPT_API const char* spreadopt_last_error(void);

/* Families. Chips are +1/-1, code-major: chips[i * n + s] is chip s of code i. */
SPREADOPT_API spreadopt_status spreadopt_family_load(const char* path, spreadopt_family** out);
SPREADOPT_API spreadopt_status spreadopt_family_save(const spreadopt_family* family,
                                                     const char* path);
SPREADOPT_API spreadopt_status spreadopt_family_from_chips(int32_t n, int32_t m,
                                                           const int8_t* chips,
                                                           spreadopt_family** out);
SPREADOPT_API spreadopt_status spreadopt_family_gold(int32_t degree, spreadopt_family** out);
SPREADOPT_API spreadopt_status spreadopt_family_weil(int32_t p, int32_t legendre_zero_bit,
                                                     spreadopt_family** out);
SPREADOPT_API spreadopt_status spreadopt_family_random(int32_t n, int32_t m, uint64_t seed,
                                                       spreadopt_family** out);
/* ACZ-satisfying codes in order; fails when there are none. */
SPREADOPT_API spreadopt_status spreadopt_family_acz_subset(const spreadopt_family* family,
                                                           spreadopt_family** out);
SPREADOPT_API void spreadopt_family_free(spreadopt_family* family);

SPREADOPT_API int32_t spreadopt_family_n(const spreadopt_family* family);
SPREADOPT_API int32_t spreadopt_family_m(const spreadopt_family* family);
/* len must be at least n * m. */
SPREADOPT_API spreadopt_status spreadopt_family_chips(const spreadopt_family* family,
                                                      int8_t* out, size_t len);
SPREADOPT_API spreadopt_status spreadopt_family_metrics(const spreadopt_family* family,
                                                        spreadopt_metrics* out);
/* CSV with header "i,j,k,value", one row per i <= j and shift k. */
SPREADOPT_API spreadopt_status spreadopt_family_write_correlations(
    const spreadopt_family* family, const char* path);

/* Run configuration: flat key/value pairs, see the README for keys. */
SPREADOPT_API spreadopt_status spreadopt_config_create(spreadopt_config** out);
SPREADOPT_API spreadopt_status spreadopt_config_load(const char* path, spreadopt_config** out);
SPREADOPT_API spreadopt_status spreadopt_config_set(spreadopt_config* config, const char* key,
                                                   const char* value);
SPREADOPT_API void spreadopt_config_free(spreadopt_config* config);

typedef struct spreadopt_run_summary {
  int64_t stage_one_iterations;
  int64_t stage_two_iterations;
  /* 0 when stage one ran out of budget before every code satisfied ACZ. */
  int32_t feasible;
  spreadopt_metrics initial;
  spreadopt_metrics final_metrics;
} spreadopt_run_summary;

/* Runs both stages; writes checkpoints when the config has an "out" dir. */
SPREADOPT_API spreadopt_status spreadopt_run_execute(const spreadopt_config* config,
                                                     spreadopt_run** out);
SPREADOPT_API spreadopt_status spreadopt_run_get_summary(const spreadopt_run* run,
                                                         spreadopt_run_summary* out);
SPREADOPT_API spreadopt_status spreadopt_run_final_family(const spreadopt_run* run,
                                                          spreadopt_family** out);
/* history.csv text of the run; the pointer lives as long as the run. */
SPREADOPT_API const char* spreadopt_run_history_csv(const spreadopt_run* run);
SPREADOPT_API void spreadopt_run_free(spreadopt_run* run);

typedef struct spreadopt_bench_params {
  int32_t n;
  int32_t m;
  int32_t block_size;
  const int32_t* active_cols;
  size_t active_cols_count;
  int32_t repeats;
  uint64_t seed;
  spreadopt_solver solver;
  int32_t threads;
} spreadopt_bench_params;

typedef struct spreadopt_bench_row {
  int32_t active_cols;
  double mean_build_s;
  double mean_solve_s;
  double mean_total_s;
  int32_t repeats;
} spreadopt_bench_row;

/* rows must hold params->active_cols_count entries. */
SPREADOPT_API spreadopt_status spreadopt_bench(const spreadopt_bench_params* params,
                                               spreadopt_bench_row* rows, size_t rows_len);

#ifdef __cplusplus
}
#endif

#endif /* SPREADOPT_SPREADOPT_H_ */
