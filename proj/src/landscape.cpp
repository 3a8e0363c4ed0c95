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

#include "tribe/landscape.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <tuple>

#include "tribe/error.hpp"

namespace tribe {

std::optional<DecisionState> parse_decision_state(std::string_view s) {
  if (s == "yes") return DecisionState::Yes;
  if (s == "no") return DecisionState::No;
  if (s == "error") return DecisionState::Error;
  return std::nullopt;
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

void LandscapeConfig::validate() const {
  require(grid_width > 0 && grid_height > 0, "grid dimensions must be positive");
  require(is_probability(availability_p), "availability_p must lie in [0, 1]");
  require(is_probability(direction_p), "direction_p must lie in [0, 1]");
  require(bond_sigma > 0.0 && cash_sigma > 0.0, "log-normal sigmas must be positive");
  require(max_bonds > 0.0 && max_cash > 0.0, "holding caps must be positive");
  if (lognormal_params == LognormalParams::Arithmetic) {
    require(bond_mu > 0.0 && cash_mu > 0.0,
            "arithmetic log-normal means must be positive");
  }
}

Landscape::Landscape(GridDims dims, std::vector<ClientCell> cells)
    : dims_(dims), cells_(std::move(cells)) {}

double Landscape::total_bonds() const noexcept {
  double total = 0.0;
  for (const auto& c : cells_) total += c.bonds;
  return total;
}

double Landscape::total_cash() const noexcept {
  double total = 0.0;
  for (const auto& c : cells_) total += c.cash;
  return total;
}

bool operator==(const Landscape& a, const Landscape& b) {
  if (a.dims_ != b.dims_ || a.cells_.size() != b.cells_.size()) return false;
  for (std::size_t i = 0; i < a.cells_.size(); ++i) {
    const auto& l = a.cells_[i];
    const auto& r = b.cells_[i];
    if (l.position != r.position || l.bonds != r.bonds || l.cash != r.cash ||
        l.available_now != r.available_now || l.direction_now != r.direction_now ||
        l.desire_now != r.desire_now) {
      return false;
    }
  }
  return true;
}

double sample_truncated_lognormal(double mu, double sigma, double cap,
                                  RandomStream& rng) {
  if (!(sigma > 0.0)) throw ConfigError("log-normal sigma must be positive");
  if (!(cap > 0.0)) throw ConfigError("log-normal cap must be positive");
  if (cap < std::exp(mu - 6.0 * sigma)) {
    throw ConfigError("log-normal cap " + std::to_string(cap) +
                      " lies below exp(mu - 6 sigma); rejection would not terminate");
  }
  for (;;) {
    const double value = std::exp(rng.normal(mu, sigma));
    if (value <= cap) return value;
  }
}

std::pair<double, double> lognormal_from_moments(double mean, double stddev) {
  const double var_log = std::log1p((stddev * stddev) / (mean * mean));
  return {std::log(mean) - 0.5 * var_log, std::sqrt(var_log)};
}

Landscape init_landscape(const LandscapeConfig& cfg, RandomStream& rng) {
  cfg.validate();
  double bond_mu = cfg.bond_mu, bond_sigma = cfg.bond_sigma;
  double cash_mu = cfg.cash_mu, cash_sigma = cfg.cash_sigma;
  if (cfg.lognormal_params == LognormalParams::Arithmetic) {
    std::tie(bond_mu, bond_sigma) = lognormal_from_moments(cfg.bond_mu, cfg.bond_sigma);
    std::tie(cash_mu, cash_sigma) = lognormal_from_moments(cfg.cash_mu, cfg.cash_sigma);
  }

  const GridDims dims = cfg.dims();
  std::vector<ClientCell> cells;
  cells.reserve(dims.cell_count());
  for (int y = 0; y < dims.height; ++y) {
    for (int x = 0; x < dims.width; ++x) {
      ClientCell cell;
      cell.position = {x, y};
      cell.bonds = sample_truncated_lognormal(bond_mu, bond_sigma, cfg.max_bonds, rng);
      cell.cash = sample_truncated_lognormal(cash_mu, cash_sigma, cfg.max_cash, rng);
      cells.push_back(cell);
    }
  }
  return Landscape(dims, std::move(cells));
}

void roll_step_state(Landscape& grid, const LandscapeConfig& cfg, RandomStream& rng) {
  for (auto& cell : grid.cells()) {
    cell.available_now = rng.bernoulli(cfg.availability_p);
    cell.direction_now = rng.bernoulli(cfg.direction_p) ? Direction::Sell : Direction::Buy;
    cell.desire_now.reset();
  }
}

void write_snapshot_csv(const Landscape& grid, std::ostream& out) {
  out << "x,y,bonds,cash\n";
  char buf[96];
  for (const auto& c : grid.cells()) {
    std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g\n", c.position.x, c.position.y,
                  c.bonds, c.cash);
    out << buf;
  }
}

}  // namespace tribe
