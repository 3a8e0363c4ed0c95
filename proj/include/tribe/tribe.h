// Copyright 2026 The TRIBE Simulator Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to the TRIBE bond-market simulator.
 *
 * All handles are opaque and owned by the caller once returned; release them
 * with the matching *_free function. Every call that can fail returns a
 * tribe_status and records a message retrievable with tribe_last_error() on
 * the calling thread. Strings returned through char** are heap-allocated and
 * released with tribe_string_free().
 */
#ifndef TRIBE_TRIBE_H_
#define TRIBE_TRIBE_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(TRIBE_BUILDING_LIBRARY)
#    define TRIBE_API __declspec(dllexport)
#  else
#    define TRIBE_API __declspec(dllimport)
#  endif
#else
#  define TRIBE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values double as CLI exit codes for 1-3. */
typedef enum tribe_status {
  TRIBE_OK = 0,
  TRIBE_ERR_CONFIG = 1,
  TRIBE_ERR_PROVIDER = 2,
  TRIBE_ERR_PARTIAL = 3,
  TRIBE_ERR_IO = 4,
  TRIBE_ERR_INVALID_ARGUMENT = 5,
  TRIBE_ERR_INTERNAL = 6
} tribe_status;

typedef enum tribe_metric {
  TRIBE_METRIC_MAX_LIFE = 0,
  TRIBE_METRIC_MM_CLIENT_BOND_PCT = 1,
  TRIBE_METRIC_MM_CLIENT_CASH_PCT = 2,
  TRIBE_METRIC_INTERBANK_BOND_PCT = 3,
  TRIBE_METRIC_INTERBANK_CASH_PCT = 4,
  TRIBE_METRIC_TERMINAL_STEP = 5,
  TRIBE_METRIC_DECISION_REQUESTS = 6,
  TRIBE_METRIC_TRADE_COUNT = 7
} tribe_metric;

typedef enum tribe_decision {
  TRIBE_DECISION_YES = 0,
  TRIBE_DECISION_NO = 1,
  TRIBE_DECISION_ERROR = 2
} tribe_decision;

typedef enum tribe_terminal {
  TRIBE_TERMINAL_ALL_CEASED = 0,
  TRIBE_TERMINAL_STEP_LIMIT = 1
} tribe_terminal;

typedef struct tribe_stats {
  double mean;
  double std;
  double min;
  double p25;
  double p50;
  double p75;
  double max;
  size_t count;
} tribe_stats;

typedef struct tribe_sim_summary {
  int sim_id;
  int aborted;
  int terminal_step;
  tribe_terminal terminal_reason;
  int max_life;
  double mm_client_bond_pct;
  double mm_client_cash_pct;
  double interbank_bond_pct;
  double interbank_cash_pct;
  int contacts;
  int decision_requests;
  int yes_count;
  int no_count;
  int error_count;
  int trade_count;
  int interbank_count;
  int active_mm_steps;
} tribe_sim_summary;

typedef struct tribe_config tribe_config;
typedef struct tribe_batch tribe_batch;

TRIBE_API const char* tribe_version(void);

/* Message for the last failed call on this thread; "" if none. */
TRIBE_API const char* tribe_last_error(void);

TRIBE_API void tribe_string_free(char* s);

/* preset: "exp1", "exp2", "exp3" or "custom". */
TRIBE_API tribe_status tribe_config_new(const char* preset, tribe_config** out);

/* Reads a `key = value` file; a `preset` key selects the base preset. */
TRIBE_API tribe_status tribe_config_load(const char* path, tribe_config** out);

/* Overrides one field. Rejected settings leave the config unchanged. */
TRIBE_API tribe_status tribe_config_set(tribe_config* cfg, const char* key,
                                        const char* value);

/* Resolved value of one field as text. */
TRIBE_API tribe_status tribe_config_get(const tribe_config* cfg, const char* key,
                                        char** out);

/* Canonical `key = value` echo of the resolved config. */
TRIBE_API tribe_status tribe_config_text(const tribe_config* cfg, char** out);

TRIBE_API void tribe_config_free(tribe_config* cfg);

/* Runs the batch and writes the output tree when output_dir is set.
 * Returns TRIBE_ERR_PARTIAL (with *out populated) if any simulation aborted,
 * or TRIBE_ERR_CONFIG / TRIBE_ERR_PROVIDER (with *out NULL) when the batch
 * could not start. */
TRIBE_API tribe_status tribe_batch_run(const tribe_config* cfg, tribe_batch** out);

TRIBE_API size_t tribe_batch_size(const tribe_batch* batch);

TRIBE_API tribe_status tribe_batch_sim(const tribe_batch* batch, size_t index,
                                       tribe_sim_summary* out);

TRIBE_API tribe_status tribe_batch_stats(const tribe_batch* batch,
                                         tribe_metric metric, tribe_stats* out);

/* Statistics of the batch yes-ratio series. TRIBE_ERR_INVALID_ARGUMENT when
 * the batch produced no yes/no outcomes. */
TRIBE_API tribe_status tribe_batch_yes_stats(const tribe_batch* batch,
                                             tribe_stats* cumulative,
                                             tribe_stats* rolling);

TRIBE_API tribe_status tribe_batch_tables(const tribe_batch* batch, char** out);

TRIBE_API void tribe_batch_free(tribe_batch* batch);

/* Re-emits the tables from the CSV logs of a previous run. */
TRIBE_API tribe_status tribe_tables_from_dir(const char* dir, char** out);

TRIBE_API tribe_status tribe_normalize_response(const char* raw,
                                                tribe_decision* out);

/* template_name: "timeliness", "aversion1", "aversion2", "aversion3". */
TRIBE_API tribe_status tribe_render_prompt(const char* template_name,
                                           double bonds, double cash, int x,
                                           int y, char** out);

#ifdef __cplusplus
}
#endif

#endif /* TRIBE_TRIBE_H_ */
