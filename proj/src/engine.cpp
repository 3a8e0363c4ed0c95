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

#include "tribe/engine.hpp"

#include <algorithm>

#include "tribe/error.hpp"

namespace tribe {

void SimConfig::validate() const {
  landscape.validate();
  agents.validate();
  if (max_steps < 0) throw ConfigError("max_steps must be non-negative");
  if (runway_threshold < 0.0) throw ConfigError("runway_threshold must be non-negative");
}

int SimulationState::active_count() const noexcept {
  return static_cast<int>(
      std::count_if(mms.begin(), mms.end(), [](const auto& m) { return m.active(); }));
}

double SimulationState::total_bonds() const noexcept {
  double total = grid.total_bonds();
  for (const auto& m : mms) total += m.bonds_acc;
  return total;
}

double SimulationState::total_cash() const noexcept {
  double total = grid.total_cash();
  for (const auto& m : mms) total += m.cash_acc;
  return total;
}

SimulationState make_simulation(const SimConfig& cfg, int sim_id, std::uint64_t seed) {
  cfg.validate();
  SimulationState s;
  s.sim_id = sim_id;
  RandomStream landscape_rng(seed, "landscape-init");
  RandomStream agents_rng(seed, "agents-init");
  s.grid = init_landscape(cfg.landscape, landscape_rng);
  s.mms = init_market_makers(cfg.agents, s.grid.dims(), agents_rng);
  s.step_rng = RandomStream(seed, "step-rolls");
  s.contact_rng = RandomStream(seed, "contact-selection");
  s.provider_rng = RandomStream(seed, "provider");
  s.initial_client_bonds = s.grid.total_bonds();
  s.initial_client_cash = s.grid.total_cash();
  for (const auto& m : s.mms) {
    s.initial_mm_bonds += m.bonds_acc;
    s.initial_mm_cash += m.cash_acc;
  }
  return s;
}

std::optional<TradeRecord> execute_client_trade(MarketMakerState& mm, ClientCell& client,
                                                int step) {
  TradeRecord rec;
  rec.step = step;
  rec.mm_id = mm.id;
  rec.counterparty = client.position;
  rec.client_direction = client.direction_now;

  if (client.direction_now == Direction::Sell) {
    // The client sells its whole holding; payment is capped by MM cash.
    const double bonds = client.bonds;
    if (bonds <= 0.0) return std::nullopt;
    const double cash = std::min(mm.cash_acc, bonds);
    client.bonds = 0.0;
    client.cash += cash;
    mm.bonds_acc += bonds;
    mm.cash_acc -= cash;
    rec.bond_qty = bonds;
    rec.cash_qty = cash;
  } else {
    // Par purchase capped by client cash and MM inventory.
    const double qty = std::min(client.cash, mm.bonds_acc);
    if (qty <= 0.0) return std::nullopt;
    client.cash -= qty;
    client.bonds += qty;
    mm.cash_acc += qty;
    mm.bonds_acc -= qty;
    rec.bond_qty = qty;
    rec.cash_qty = qty;
  }
  return rec;
}

std::vector<TradeRecord> interbank_rebalance(std::vector<MarketMakerState>& mms, int step,
                                             double runway_threshold) {
  std::vector<TradeRecord> out;
  const auto active = std::count_if(mms.begin(), mms.end(),
                                    [](const auto& m) { return m.active(); });
  if (active < 2) return out;

  for (auto& needy : mms) {
    if (!needy.active()) continue;
    if (needy.cash_acc / needy.cash_rate >= runway_threshold) continue;

    MarketMakerState* partner = nullptr;
    for (auto& other : mms) {
      if (&other == &needy || !other.active()) continue;
      if (partner == nullptr || other.cash_acc > partner->cash_acc) partner = &other;
    }
    if (partner == nullptr) continue;

    const double needed = runway_threshold * needy.cash_rate - needy.cash_acc;
    const double qty = std::min({needy.bonds_acc, partner->cash_acc, needed});
    if (qty <= 0.0) continue;

    needy.bonds_acc -= qty;
    needy.cash_acc += qty;
    partner->bonds_acc += qty;
    partner->cash_acc -= qty;

    TradeRecord rec;
    rec.step = step;
    rec.mm_id = needy.id;
    rec.counterparty = InterbankCounterparty{partner->id};
    rec.bond_qty = qty;
    rec.cash_qty = qty;
    out.push_back(rec);
  }
  return out;
}

std::optional<TradeRecord> contact_client(SimulationState& state, MarketMakerState& mm,
                                          DecisionProvider& provider) {
  const auto region = client_base_region(mm, state.grid.dims());
  const GridPos pos{static_cast<int>(state.contact_rng.uniform_int(region.x_min, region.x_max)),
                    static_cast<int>(state.contact_rng.uniform_int(region.y_min, region.y_max))};
  ++state.contacts;
  ClientCell& client = state.grid.at(pos);
  if (!client.available_now) return std::nullopt;

  DesireQuery q;
  q.sim_id = state.sim_id;
  q.step = state.step;
  q.mm_id = mm.id;
  q.client_position = pos;
  q.client_bonds = client.bonds;
  q.client_cash = client.cash;
  q.sequence_no = state.decisions.size();

  DecisionOutcome outcome = provider.decide(q, state.provider_rng);
  client.desire_now = outcome.state;
  const bool yes = outcome.state == DecisionState::Yes;
  state.decisions.push_back({q, std::move(outcome)});
  if (!yes) return std::nullopt;

  auto trade = execute_client_trade(mm, client, state.step);
  if (trade) state.trades.push_back(*trade);
  return trade;
}

StepReport step(SimulationState& state, DecisionProvider& provider, const SimConfig& cfg) {
  StepReport report;
  roll_step_state(state.grid, cfg.landscape, state.step_rng);

  for (auto& mm : state.mms) {
    if (!mm.active()) continue;
    const auto before = state.decisions.size();
    ++report.contacts;
    if (contact_client(state, mm, provider)) ++report.client_trades;
    report.decision_requests += static_cast<int>(state.decisions.size() - before);
  }

  auto interbank = interbank_rebalance(state.mms, state.step, cfg.runway_threshold);
  report.interbank_trades = static_cast<int>(interbank.size());
  state.trades.insert(state.trades.end(), interbank.begin(), interbank.end());

  for (auto& mm : state.mms) {
    if (!mm.active()) continue;
    const Metabolism used = apply_costs(mm, state.step, cfg.agents.cease_rule);
    state.consumed_bonds += used.bonds;
    state.consumed_cash += used.cash;
    if (!mm.active()) ++report.ceases;
  }

  ++state.step;
  return report;
}

void run_to_completion(SimulationState& state, DecisionProvider& provider,
                       const SimConfig& cfg, const StepObserver& observer) {
  while (state.step < cfg.max_steps && state.active_count() > 0) {
    const StepReport report = step(state, provider, cfg);
    if (observer) observer(state, report);
  }
  state.terminal =
      state.active_count() == 0 ? TerminalReason::AllCeased : TerminalReason::StepLimit;
}

SimulationState run_simulation(const SimConfig& cfg, DecisionProvider& provider, int sim_id,
                               std::uint64_t seed, const StepObserver& observer) {
  SimulationState state = make_simulation(cfg, sim_id, seed);
  run_to_completion(state, provider, cfg, observer);
  return state;
}

}  // namespace tribe
