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

#include "tribe/tribe.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "tribe/error.hpp"
#include "tribe/harness.hpp"

struct tribe_config {
  tribe::Overrides settings;
  tribe::ExperimentConfig resolved;
};

struct tribe_batch {
  tribe::BatchResult result;
};

namespace {

thread_local std::string g_last_error;

tribe_status fail(tribe_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Maps the exception in flight to a status code.
tribe_status translate() {
  try {
    throw;
  } catch (const tribe::ConfigError& e) {
    return fail(TRIBE_ERR_CONFIG, e.what());
  } catch (const tribe::ProviderError& e) {
    return fail(TRIBE_ERR_PROVIDER, e.what());
  } catch (const tribe::IoError& e) {
    return fail(TRIBE_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(TRIBE_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(TRIBE_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(TRIBE_ERR_INTERNAL, "unknown error");
  }
}

tribe_status ok() {
  g_last_error.clear();
  return TRIBE_OK;
}

char* dup_string(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

tribe_stats to_c(const tribe::MetricStats& m) {
  return {m.mean, m.std, m.min, m.p25, m.p50, m.p75, m.max, m.count};
}

#define TRIBE_REQUIRE(cond)                                                   \
  do {                                                                        \
    if (!(cond)) return fail(TRIBE_ERR_INVALID_ARGUMENT, "invalid argument: " #cond); \
  } while (0)

}  // namespace

extern "C" {

const char* tribe_version(void) { return "1.0.0"; }

const char* tribe_last_error(void) { return g_last_error.c_str(); }

void tribe_string_free(char* s) { std::free(s); }

tribe_status tribe_config_new(const char* preset, tribe_config** out) {
  TRIBE_REQUIRE(preset != nullptr && out != nullptr);
  *out = nullptr;
  try {
    if (!tribe::parse_preset(preset)) {
      return fail(TRIBE_ERR_CONFIG, std::string("unknown preset '") + preset + "'");
    }
    auto cfg = std::make_unique<tribe_config>();
    cfg->settings.emplace_back("preset", preset);
    cfg->resolved = tribe::resolve_config(cfg->settings);
    *out = cfg.release();
    return ok();
  } catch (...) {
    return translate();
  }
}

tribe_status tribe_config_load(const char* path, tribe_config** out) {
  TRIBE_REQUIRE(path != nullptr && out != nullptr);
  *out = nullptr;
  try {
    auto cfg = std::make_unique<tribe_config>();
    cfg->settings = tribe::read_config_file(path);
    cfg->resolved = tribe::resolve_config(cfg->settings);
    *out = cfg.release();
    return ok();
  } catch (...) {
    return translate();
  }
}

tribe_status tribe_config_set(tribe_config* cfg, const char* key, const char* value) {
  TRIBE_REQUIRE(cfg != nullptr && key != nullptr && value != nullptr);
  try {
    tribe::Overrides next = cfg->settings;
    if (std::strcmp(key, "preset") != 0 && !tribe::get_setting(cfg->resolved, key)) {
      return fail(TRIBE_ERR_CONFIG, std::string("unknown config key '") + key + "'");
    }
    if (std::strcmp(key, "provider") == 0) {
      // Switching provider drops settings specific to the previous one.
      tribe::ExperimentConfig probe = cfg->resolved;
      tribe::apply_setting(probe, key, value);
      std::erase_if(next, [&](const auto& kv) {
        return !tribe::setting_applies(kv.first, probe.provider.kind);
      });
    }
    next.emplace_back(key, value);
    cfg->resolved = tribe::resolve_config(next);
    cfg->settings = std::move(next);
    return ok();
  } catch (...) {
    return translate();
  }
}

tribe_status tribe_config_get(const tribe_config* cfg, const char* key, char** out) {
  TRIBE_REQUIRE(cfg != nullptr && key != nullptr && out != nullptr);
  *out = nullptr;
  try {
    const auto value = tribe::get_setting(cfg->resolved, key);
    if (!value) return fail(TRIBE_ERR_CONFIG, std::string("unknown config key '") + key + "'");
    *out = dup_string(*value);
    return ok();
  } catch (...) {
    return translate();
  }
}

tribe_status tribe_config_text(const tribe_config* cfg, char** out) {
  TRIBE_REQUIRE(cfg != nullptr && out != nullptr);
  *out = nullptr;
  try {
    *out = dup_string(tribe::config_to_text(cfg->resolved));
    return ok();
  } catch (...) {
    return translate();
  }
}

void tribe_config_free(tribe_config* cfg) { delete cfg; }

tribe_status tribe_batch_run(const tribe_config* cfg, tribe_batch** out) {
  TRIBE_REQUIRE(cfg != nullptr && out != nullptr);
  *out = nullptr;
  try {
    auto batch = std::make_unique<tribe_batch>();
    batch->result = tribe::run_batch(cfg->resolved);
    const auto& r = batch->result;
    std::string first_reason;
    std::size_t aborted = 0;
    for (const auto& run : r.runs) {
      if (!run.aborted) continue;
      if (aborted++ == 0) first_reason = run.abort_reason;
    }
    *out = batch.release();
    if (aborted == 0) return ok();
    return fail(TRIBE_ERR_PARTIAL, std::to_string(aborted) + " of " +
                                       std::to_string(r.runs.size()) +
                                       " simulations aborted; first: " + first_reason);
  } catch (...) {
    return translate();
  }
}

size_t tribe_batch_size(const tribe_batch* batch) {
  return batch == nullptr ? 0 : batch->result.runs.size();
}

tribe_status tribe_batch_sim(const tribe_batch* batch, size_t index, tribe_sim_summary* out) {
  TRIBE_REQUIRE(batch != nullptr && out != nullptr && index < batch->result.runs.size());
  const auto& run = batch->result.runs[index];
  const auto& s = run.summary;
  *out = tribe_sim_summary{};
  out->sim_id = run.sim_id;
  out->aborted = run.aborted ? 1 : 0;
  if (!run.aborted) {
    out->terminal_step = s.terminal_step;
    out->terminal_reason = s.terminal_reason == tribe::TerminalReason::StepLimit
                               ? TRIBE_TERMINAL_STEP_LIMIT
                               : TRIBE_TERMINAL_ALL_CEASED;
    out->max_life = s.max_life;
    out->mm_client_bond_pct = s.mm_client_bond_pct;
    out->mm_client_cash_pct = s.mm_client_cash_pct;
    out->interbank_bond_pct = s.interbank_bond_pct;
    out->interbank_cash_pct = s.interbank_cash_pct;
    out->contacts = s.contacts;
    out->decision_requests = s.decision_requests;
    out->yes_count = s.yes_count;
    out->no_count = s.no_count;
    out->error_count = s.error_count;
    out->trade_count = s.trade_count;
    out->interbank_count = s.interbank_count;
    out->active_mm_steps = s.active_mm_steps;
  }
  return ok();
}

tribe_status tribe_batch_stats(const tribe_batch* batch, tribe_metric metric, tribe_stats* out) {
  TRIBE_REQUIRE(batch != nullptr && out != nullptr);
  const auto& b = batch->result.batch;
  if (!b) return fail(TRIBE_ERR_INVALID_ARGUMENT, "batch has no completed simulations");
  switch (metric) {
    case TRIBE_METRIC_MAX_LIFE: *out = to_c(b->max_life); break;
    case TRIBE_METRIC_MM_CLIENT_BOND_PCT: *out = to_c(b->mm_client_bond_pct); break;
    case TRIBE_METRIC_MM_CLIENT_CASH_PCT: *out = to_c(b->mm_client_cash_pct); break;
    case TRIBE_METRIC_INTERBANK_BOND_PCT: *out = to_c(b->interbank_bond_pct); break;
    case TRIBE_METRIC_INTERBANK_CASH_PCT: *out = to_c(b->interbank_cash_pct); break;
    case TRIBE_METRIC_TERMINAL_STEP: *out = to_c(b->terminal_step); break;
    case TRIBE_METRIC_DECISION_REQUESTS: *out = to_c(b->decision_requests); break;
    case TRIBE_METRIC_TRADE_COUNT: *out = to_c(b->trade_count); break;
    default: return fail(TRIBE_ERR_INVALID_ARGUMENT, "unknown metric");
  }
  return ok();
}

tribe_status tribe_batch_yes_stats(const tribe_batch* batch, tribe_stats* cumulative,
                                   tribe_stats* rolling) {
  TRIBE_REQUIRE(batch != nullptr && cumulative != nullptr && rolling != nullptr);
  const auto& y = batch->result.yes_stats;
  if (!y) return fail(TRIBE_ERR_INVALID_ARGUMENT, "batch produced no yes/no outcomes");
  *cumulative = to_c(y->cumulative);
  *rolling = to_c(y->rolling);
  return ok();
}

tribe_status tribe_batch_tables(const tribe_batch* batch, char** out) {
  TRIBE_REQUIRE(batch != nullptr && out != nullptr);
  *out = nullptr;
  try {
    *out = dup_string(tribe::format_tables(batch->result.batch, batch->result.yes_stats));
    return ok();
  } catch (...) {
    return translate();
  }
}

void tribe_batch_free(tribe_batch* batch) { delete batch; }

tribe_status tribe_tables_from_dir(const char* dir, char** out) {
  TRIBE_REQUIRE(dir != nullptr && out != nullptr);
  *out = nullptr;
  try {
    *out = dup_string(tribe::tables_from_dir(dir));
    return ok();
  } catch (...) {
    return translate();
  }
}

tribe_status tribe_normalize_response(const char* raw, tribe_decision* out) {
  TRIBE_REQUIRE(raw != nullptr && out != nullptr);
  switch (tribe::normalize_response(raw)) {
    case tribe::DecisionState::Yes: *out = TRIBE_DECISION_YES; break;
    case tribe::DecisionState::No: *out = TRIBE_DECISION_NO; break;
    case tribe::DecisionState::Error: *out = TRIBE_DECISION_ERROR; break;
  }
  return ok();
}

tribe_status tribe_render_prompt(const char* template_name, double bonds, double cash, int x,
                                 int y, char** out) {
  TRIBE_REQUIRE(template_name != nullptr && out != nullptr);
  *out = nullptr;
  try {
    const auto t = tribe::parse_prompt_template(template_name);
    if (!t) return fail(TRIBE_ERR_INVALID_ARGUMENT,
                        std::string("unknown prompt template '") + template_name + "'");
    tribe::DesireQuery q;
    q.client_bonds = bonds;
    q.client_cash = cash;
    q.client_position = {x, y};
    *out = dup_string(tribe::render_prompt(*t, q));
    return ok();
  } catch (...) {
    return translate();
  }
}

}  // extern "C"
