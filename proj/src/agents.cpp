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

#include "tribe/agents.hpp"

#include <algorithm>

#include "tribe/error.hpp"

namespace tribe {

void AgentConfig::validate() const {
  if (n_agents < 1) throw ConfigError("n_agents must be at least 1");
  if (cost_min > cost_max || init_bonds_min > init_bonds_max ||
      init_cash_min > init_cash_max || breadth_min > breadth_max) {
    throw ConfigError("agent ranges must satisfy min <= max");
  }
  if (!(cost_min > 0.0)) throw ConfigError("business costs must be positive");
  if (init_bonds_min < 0.0 || init_cash_min < 0.0) {
    throw ConfigError("initial agent holdings must be non-negative");
  }
  if (breadth_min < 1) throw ConfigError("client base breadth must be at least 1");
}

std::vector<MarketMakerState> init_market_makers(const AgentConfig& cfg, GridDims grid,
                                                 RandomStream& rng) {
  cfg.validate();
  if (grid.width < 1 || grid.height < 1) throw ConfigError("empty grid");
  std::vector<MarketMakerState> mms;
  mms.reserve(static_cast<std::size_t>(cfg.n_agents));
  for (int i = 0; i < cfg.n_agents; ++i) {
    MarketMakerState mm;
    mm.id = i;
    mm.bonds_acc = rng.uniform(cfg.init_bonds_min, cfg.init_bonds_max);
    mm.cash_acc = rng.uniform(cfg.init_cash_min, cfg.init_cash_max);
    mm.bond_rate = rng.uniform(cfg.cost_min, cfg.cost_max);
    mm.cash_rate = rng.uniform(cfg.cost_min, cfg.cost_max);
    mm.breadth = static_cast<int>(rng.uniform_int(cfg.breadth_min, cfg.breadth_max));
    mm.anchor.x = static_cast<int>(rng.uniform_int(0, grid.width - 1));
    mm.anchor.y = static_cast<int>(rng.uniform_int(0, grid.height - 1));
    mms.push_back(mm);
  }
  return mms;
}

ClientBaseRegion client_base_region(const MarketMakerState& mm, GridDims grid) {
  const int radius = mm.breadth / 2;
  ClientBaseRegion r;
  r.x_min = std::max(0, mm.anchor.x - radius);
  r.x_max = std::min(grid.width - 1, mm.anchor.x + radius);
  r.y_min = std::max(0, mm.anchor.y - radius);
  r.y_max = std::min(grid.height - 1, mm.anchor.y + radius);
  return r;
}

std::vector<GridPos> client_base(const MarketMakerState& mm, GridDims grid) {
  const auto r = client_base_region(mm, grid);
  std::vector<GridPos> cells;
  cells.reserve(r.size());
  for (int y = r.y_min; y <= r.y_max; ++y)
    for (int x = r.x_min; x <= r.x_max; ++x) cells.push_back({x, y});
  return cells;
}

Metabolism apply_costs(MarketMakerState& mm, int step, CeaseRule rule) {
  if (!mm.active()) return {};
  Metabolism used;
  used.bonds = std::min(mm.bonds_acc, mm.bond_rate);
  used.cash = std::min(mm.cash_acc, mm.cash_rate);
  mm.bonds_acc = std::max(0.0, mm.bonds_acc - mm.bond_rate);
  mm.cash_acc = std::max(0.0, mm.cash_acc - mm.cash_rate);
  cease_check(mm, step, rule);
  return used;
}

bool cease_check(MarketMakerState& mm, int step, CeaseRule rule) {
  if (!mm.active()) return false;
  const bool bonds_out = mm.bonds_acc <= 0.0;
  const bool cash_out = mm.cash_acc <= 0.0;
  const bool ceases = rule == CeaseRule::EitherExhausted ? (bonds_out || cash_out)
                                                         : (bonds_out && cash_out);
  if (ceases) {
    mm.status = MmStatus::Ceased;
    mm.ceased_at_step = step;
  }
  return ceases;
}

}  // namespace tribe
