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

#include <optional>
#include <vector>

#include "tribe/rng.hpp"
#include "tribe/types.hpp"

namespace tribe {

enum class CeaseRule { EitherExhausted, BothExhausted };
enum class MmStatus { Active, Ceased };

struct AgentConfig {
  int n_agents = 4;
  double cost_min = 0.1;
  double cost_max = 0.5;
  double init_bonds_min = 1.0;
  double init_bonds_max = 5.0;
  double init_cash_min = 1.0;
  double init_cash_max = 5.0;
  int breadth_min = 1;
  int breadth_max = 50;
  CeaseRule cease_rule = CeaseRule::BothExhausted;

  void validate() const;
};

struct MarketMakerState {
  int id = 0;
  double bonds_acc = 0.0;
  double cash_acc = 0.0;
  double bond_rate = 0.0;
  double cash_rate = 0.0;
  int breadth = 1;
  GridPos anchor;
  MmStatus status = MmStatus::Active;
  std::optional<int> ceased_at_step;

  [[nodiscard]] bool active() const noexcept { return status == MmStatus::Active; }
};

// Inclusive rectangle of grid cells an agent draws its contacts from.
struct ClientBaseRegion {
  int x_min = 0, x_max = 0;
  int y_min = 0, y_max = 0;

  [[nodiscard]] std::size_t size() const noexcept {
    return static_cast<std::size_t>(x_max - x_min + 1) *
           static_cast<std::size_t>(y_max - y_min + 1);
  }
  [[nodiscard]] bool contains(GridPos p) const noexcept {
    return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
  }
};

std::vector<MarketMakerState> init_market_makers(const AgentConfig& cfg,
                                                 GridDims grid,
                                                 RandomStream& rng);

// Cells within Chebyshev distance breadth/2 of the anchor, clipped to the grid.
ClientBaseRegion client_base_region(const MarketMakerState& mm, GridDims grid);
std::vector<GridPos> client_base(const MarketMakerState& mm, GridDims grid);

// Resources actually removed by one cost application.
struct Metabolism {
  double bonds = 0.0;
  double cash = 0.0;
};

// Subtracts one step of business costs (floored at zero), then runs
// cease_check. Ceased agents are left untouched and consume nothing.
Metabolism apply_costs(MarketMakerState& mm, int step, CeaseRule rule);

// Returns true if the agent ceased at this call.
bool cease_check(MarketMakerState& mm, int step, CeaseRule rule);

}  // namespace tribe
