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

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tribe/decision.hpp"
#include "tribe/engine.hpp"
#include "tribe/journal.hpp"
#include "tribe/metrics.hpp"

namespace tribe {

enum class Preset { Exp1, Exp2, Exp3, Custom };

std::string_view to_string(Preset p) noexcept;
std::optional<Preset> parse_preset(std::string_view s);

struct ExperimentConfig {
  Preset preset = Preset::Custom;
  SimConfig sim;
  ProviderConfig provider;
  int n_simulations = 200;
  std::uint64_t master_seed = 20240718;
  std::filesystem::path output_dir;  // empty: no files written
  int parallelism = 1;
  bool journal = false;  // always on for LiveLLM
  bool record_timestamps = false;
  bool snapshot = false;  // initial grid CSV per simulation

  void validate() const;
};

// Ordered key/value overrides; later entries win.
using Overrides = std::vector<std::pair<std::string, std::string>>;

// Applies one `key = value` setting. Throws ConfigError on unknown keys or
// unparsable values.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

// Preset defaults, then overrides; checks that no override contradicts the
// resolved provider. Throws ConfigError.
ExperimentConfig resolve_preset(Preset preset, const Overrides& overrides = {});

// resolve_preset with the base taken from the last `preset` entry (custom if none).
ExperimentConfig resolve_config(const Overrides& settings);

// False for provider-specific keys that do not apply to `kind`.
bool setting_applies(std::string_view key, ProviderKind kind);

// `key = value` lines, '#' comments. A `preset` key selects the base.
Overrides parse_config_text(std::string_view text);
Overrides read_config_file(const std::filesystem::path& path);

// Canonical echo of every field, one `key = value` per line, fixed order.
std::string config_to_text(const ExperimentConfig& cfg);
// Resolved value of one field; nullopt for unknown keys.
std::optional<std::string> get_setting(const ExperimentConfig& cfg, std::string_view key);

// Git blob hash (SHA-1 hex) of config_to_text.
std::string config_hash(const ExperimentConfig& cfg);

struct SimulationResult {
  int sim_id = 0;
  std::uint64_t seed = 0;
  bool aborted = false;
  std::string abort_reason;
  SimulationState state;
  SimulationSummary summary;
  std::vector<JournalRecord> journal;  // filled when journaling is on
  std::string initial_snapshot;        // grid CSV when cfg.snapshot
};

struct BatchResult {
  ExperimentConfig config;
  std::vector<SimulationResult> runs;  // in sim order
  std::vector<SimulationSummary> summaries;
  std::optional<BatchSummary> batch;
  std::optional<YesRatioStats> yes_stats;
  YesRatioSeries series;
  bool provider_failure = false;
  std::string started_at;  // UTC ISO-8601; written only with record_timestamps
  std::string finished_at;

  [[nodiscard]] bool any_aborted() const;
};

// Runs every simulation (parallel up to cfg.parallelism), then writes the
// output tree if cfg.output_dir is set. Throws ConfigError / ProviderError
// for problems detected before the first simulation starts.
BatchResult run_batch(const ExperimentConfig& cfg);

void write_outputs(const BatchResult& result);

// Table 2, 3 and 4 text as written to tables.txt.
std::string format_tables(const std::optional<BatchSummary>& batch,
                          const std::optional<YesRatioStats>& yes);

// Rebuilds summaries from the CSV logs in an output directory.
std::vector<SimulationSummary> summaries_from_logs(const std::filesystem::path& dir);
std::vector<DecisionState> decisions_from_logs(const std::filesystem::path& dir);

// Table 2/3/4 text regenerated from the logs in `dir`.
std::string tables_from_dir(const std::filesystem::path& dir);

}  // namespace tribe
