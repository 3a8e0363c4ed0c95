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

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tribe/engine.hpp"

namespace tribe {

struct SimulationSummary {
  int sim_id = 0;
  int terminal_step = 0;
  TerminalReason terminal_reason = TerminalReason::AllCeased;
  int max_life = 0;
  double mm_client_bond_pct = 0.0;
  double mm_client_cash_pct = 0.0;
  double interbank_bond_pct = 0.0;
  double interbank_cash_pct = 0.0;
  int contacts = 0;
  int decision_requests = 0;
  int yes_count = 0;
  int no_count = 0;
  int error_count = 0;
  int trade_count = 0;         // client legs
  int interbank_count = 0;
  int active_mm_steps = 0;     // sum over rounds of agents active at round start
  bool any_mm_reached_max = false;

  // yes / (yes + no); absent with no yes or no outcomes.
  [[nodiscard]] std::optional<double> yes_ratio() const;
  friend bool operator==(const SimulationSummary&, const SimulationSummary&) = default;
};

std::string_view to_string(TerminalReason r) noexcept;
std::optional<TerminalReason> parse_terminal_reason(std::string_view s);

// Everything a summary is computed from; the in-memory run and the CSV logs
// both reduce to this.
struct SimulationLog {
  int sim_id = 0;
  int rounds = 0;
  int max_steps = 0;
  TerminalReason terminal = TerminalReason::AllCeased;
  double initial_client_bonds = 0.0;
  double initial_client_cash = 0.0;
  int contacts = 0;
  std::vector<std::optional<int>> ceased_at;  // per agent, in id order
  std::vector<TradeRecord> trades;
  std::vector<DecisionState> decisions;       // in sequence order
};

SimulationLog extract_log(const SimulationState& state, int max_steps);
SimulationSummary summarize_simulation(const SimulationLog& log);
SimulationSummary summarize_simulation(const SimulationState& state, int max_steps);

struct MetricStats {
  double mean = 0.0;
  double std = 0.0;  // population
  double min = 0.0;
  double p25 = 0.0;
  double p50 = 0.0;
  double p75 = 0.0;
  double max = 0.0;
  std::size_t count = 0;
  friend bool operator==(const MetricStats&, const MetricStats&) = default;
};

// Linear interpolation between closest ranks (rank = q * (n - 1)).
double percentile(std::span<const double> sorted, double q);
// Throws std::invalid_argument on empty input.
MetricStats describe(std::span<const double> values);

struct BatchSummary {
  std::size_t simulations = 0;
  MetricStats max_life;
  MetricStats mm_client_bond_pct;
  MetricStats mm_client_cash_pct;
  MetricStats interbank_bond_pct;
  MetricStats interbank_cash_pct;
  MetricStats terminal_step;
  MetricStats decision_requests;
  MetricStats trade_count;
  std::size_t sims_reaching_max = 0;
  friend bool operator==(const BatchSummary&, const BatchSummary&) = default;
};

// Throws std::invalid_argument on an empty list.
BatchSummary aggregate_batch(std::span<const SimulationSummary> summaries);

struct YesRatioSeries {
  std::vector<DecisionState> outcomes;     // yes/no only, in order
  std::vector<double> cumulative;          // one per outcome
  std::vector<double> rolling;             // from the window-th outcome onward
  std::size_t window = 10;
};

YesRatioSeries yes_ratio_series(std::span<const DecisionState> decisions,
                                std::size_t window = 10);

struct YesRatioStats {
  MetricStats cumulative;
  MetricStats rolling;
};
std::optional<YesRatioStats> describe_series(const YesRatioSeries& series);

// Published-layout tables. Text uses rounded integers; CSV keeps four decimals.
std::string table2_text(const BatchSummary& b);
std::string table3_text(const BatchSummary& b);
std::string table4_text(const std::optional<YesRatioStats>& s);
std::string table2_csv(const BatchSummary& b);
std::string table3_csv(const BatchSummary& b);
std::string table4_csv(const std::optional<YesRatioStats>& s);

void write_series_csv(const YesRatioSeries& s, std::ostream& out);

}  // namespace tribe
