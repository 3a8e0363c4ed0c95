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
#include <optional>
#include <string_view>

namespace tribe {

struct GridPos {
  int x = 0;
  int y = 0;
  friend constexpr bool operator==(GridPos, GridPos) = default;
};

struct GridDims {
  int width = 0;
  int height = 0;
  [[nodiscard]] constexpr bool contains(GridPos p) const noexcept {
    return p.x >= 0 && p.y >= 0 && p.x < width && p.y < height;
  }
  [[nodiscard]] constexpr std::size_t cell_count() const noexcept {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
  friend constexpr bool operator==(GridDims, GridDims) = default;
};

enum class Direction : std::uint8_t { Buy, Sell };

enum class DecisionState : std::uint8_t { Yes, No, Error };

constexpr std::string_view to_string(Direction d) noexcept {
  return d == Direction::Buy ? "buy" : "sell";
}

constexpr std::string_view to_string(DecisionState s) noexcept {
  switch (s) {
    case DecisionState::Yes: return "yes";
    case DecisionState::No: return "no";
    case DecisionState::Error: return "error";
  }
  return "error";
}

std::optional<DecisionState> parse_decision_state(std::string_view s);

}  // namespace tribe
