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
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "tribe/agents.hpp"
#include "tribe/decision.hpp"
#include "tribe/landscape.hpp"
#include "tribe/rng.hpp"

namespace tribe {

struct SimConfig {
  LandscapeConfig landscape;
  AgentConfig agents;
  int max_steps = 1500;
  double runway_threshold = 3.0;  // interbank trigger, in steps of cash cost

  void validate() const;
};

struct InterbankCounterparty {
  int mm_id = 0;
  friend bool operator==(InterbankCounterparty, InterbankCounterparty) = default;
};
using Counterparty = std::variant<GridPos, InterbankCounterparty>;

struct TradeRecord {
  int step = 0;
  int mm_id = 0;
  Counterparty counterparty;
  std::optional<Direction> client_direction;  // absent for interbank trades
  double bond_qty = 0.0;
  double cash_qty = 0.0;

  [[nodiscard]] bool is_interbank() const noexcept {
    return std::holds_alternative<InterbankCounterparty>(counterparty);
  }
};

struct DecisionEntry {
  DesireQuery query;
  DecisionOutcome outcome;
};

enum class TerminalReason { Running, AllCeased, StepLimit };

struct StepReport {
  int contacts = 0;
  int decision_requests = 0;
  int client_trades = 0;
  int interbank_trades = 0;
  int ceases = 0;
};

struct SimulationState {
  int sim_id = 0;
  int step = 0;  // rounds executed so far
  Landscape grid;
  std::vector<MarketMakerState> mms;
  std::vector<TradeRecord> trades;
  std::vector<DecisionEntry> decisions;

  double initial_client_bonds = 0.0;
  double initial_client_cash = 0.0;
  double initial_mm_bonds = 0.0;
  double initial_mm_cash = 0.0;
  double consumed_bonds = 0.0;  // cumulative metabolism
  double consumed_cash = 0.0;
  int contacts = 0;
  TerminalReason terminal = TerminalReason::Running;

  // Sub-streams of the simulation seed.
  RandomStream step_rng;
  RandomStream contact_rng;
  RandomStream provider_rng;

  [[nodiscard]] int active_count() const noexcept;
  [[nodiscard]] double total_bonds() const noexcept;  // clients + MMs
  [[nodiscard]] double total_cash() const noexcept;
};

// Builds the landscape and agents from the seed's init sub-streams.
SimulationState make_simulation(const SimConfig& cfg, int sim_id, std::uint64_t seed);

// Client trade obligated by a Yes. Returns nullopt when nothing can move.
std::optional<TradeRecord> execute_client_trade(MarketMakerState& mm,
                                                ClientCell& client, int step);

// Needy agents (cash runway below `runway_threshold`) sell bonds at par to
// the active agent holding the most cash.
std::vector<TradeRecord> interbank_rebalance(std::vector<MarketMakerState>& mms,
                                             int step, double runway_threshold);

// One contact by `mm`: pick a client from its base, query it if available,
// trade on Yes. Appends to state.decisions / state.trades.
std::optional<TradeRecord> contact_client(SimulationState& state, MarketMakerState& mm,
                                          DecisionProvider& provider);

// One round: roll client states, client contacts in id order, interbank,
// costs. Requires an active agent and step < max_steps.
StepReport step(SimulationState& state, DecisionProvider& provider, const SimConfig& cfg);

// Called after each completed round.
using StepObserver = std::function<void(const SimulationState&, const StepReport&)>;

// Steps `state` until every agent ceased or max_steps rounds ran, then sets
// the terminal reason. If the provider throws, `state` keeps every round
// completed so far.
void run_to_completion(SimulationState& state, DecisionProvider& provider,
                       const SimConfig& cfg, const StepObserver& observer = {});

SimulationState run_simulation(const SimConfig& cfg, DecisionProvider& provider,
                               int sim_id, std::uint64_t seed,
                               const StepObserver& observer = {});

}  // namespace tribe
