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
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tribe/rng.hpp"
#include "tribe/types.hpp"

namespace tribe {

// How the (mean, std) pairs of the holdings distributions are read.
// Underlying: parameters of the normal in log space. Arithmetic: moments of
// the log-normal itself, converted to log space before sampling.
enum class LognormalParams { Underlying, Arithmetic };

struct LandscapeConfig {
  int grid_width = 50;
  int grid_height = 50;
  double bond_mu = 2.5;
  double bond_sigma = 1.0;
  double cash_mu = 1.0;
  double cash_sigma = 0.5;
  double max_bonds = 100.0;
  double max_cash = 5.0;
  double availability_p = 0.20;
  double direction_p = 0.5;  // probability of Sell
  LognormalParams lognormal_params = LognormalParams::Underlying;

  [[nodiscard]] GridDims dims() const noexcept { return {grid_width, grid_height}; }
  // Throws ConfigError.
  void validate() const;
};

struct ClientCell {
  GridPos position;
  double bonds = 0.0;
  double cash = 0.0;
  bool available_now = false;
  Direction direction_now = Direction::Buy;
  std::optional<DecisionState> desire_now;
};

// Row-major grid of clients; cell (x, y) lives at index y * width + x.
class Landscape {
 public:
  Landscape() = default;
  Landscape(GridDims dims, std::vector<ClientCell> cells);

  [[nodiscard]] GridDims dims() const noexcept { return dims_; }
  [[nodiscard]] std::size_t size() const noexcept { return cells_.size(); }

  [[nodiscard]] ClientCell& at(GridPos p) { return cells_[index(p)]; }
  [[nodiscard]] const ClientCell& at(GridPos p) const { return cells_[index(p)]; }

  [[nodiscard]] std::span<ClientCell> cells() noexcept { return cells_; }
  [[nodiscard]] std::span<const ClientCell> cells() const noexcept { return cells_; }

  [[nodiscard]] double total_bonds() const noexcept;
  [[nodiscard]] double total_cash() const noexcept;

  friend bool operator==(const Landscape& a, const Landscape& b);

 private:
  [[nodiscard]] std::size_t index(GridPos p) const noexcept {
    return static_cast<std::size_t>(p.y) * static_cast<std::size_t>(dims_.width) +
           static_cast<std::size_t>(p.x);
  }

  GridDims dims_;
  std::vector<ClientCell> cells_;
};

// exp(z) with z ~ Normal(mu, sigma^2), redrawn until the value is <= cap.
// Throws ConfigError when the cap sits so far in the left tail that rejection
// would practically never terminate.
double sample_truncated_lognormal(double mu, double sigma, double cap,
                                  RandomStream& rng);

// Log-space (mu, sigma) for a log-normal with the given arithmetic mean and
// standard deviation.
std::pair<double, double> lognormal_from_moments(double mean, double stddev);

Landscape init_landscape(const LandscapeConfig& cfg, RandomStream& rng);

// Redraws availability and direction for every client and clears desire.
// Holdings are untouched.
void roll_step_state(Landscape& grid, const LandscapeConfig& cfg,
                     RandomStream& rng);

// CSV with header `x,y,bonds,cash`.
void write_snapshot_csv(const Landscape& grid, std::ostream& out);

}  // namespace tribe
