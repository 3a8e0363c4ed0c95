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

#include "tribe/calibration.hpp"

#include <cmath>
#include <limits>

#include "tribe/decision.hpp"
#include "tribe/metrics.hpp"
#include "tribe/rng.hpp"

namespace tribe {

BurstyStats simulate_bursty(double stay_yes, double stay_no, std::size_t draws,
                            std::size_t window, std::uint64_t seed) {
  SyntheticBurstyProvider provider(stay_yes, stay_no);
  RandomStream rng(seed, "calibration");
  std::vector<DecisionState> outcomes;
  outcomes.reserve(draws);
  DesireQuery q;
  for (std::size_t i = 0; i < draws; ++i) {
    q.sequence_no = i;
    outcomes.push_back(provider.decide(q, rng).state);
  }
  const auto series = yes_ratio_series(outcomes, window);
  BurstyStats stats;
  stats.yes_fraction = series.cumulative.empty() ? 0.0 : series.cumulative.back();
  if (!series.rolling.empty()) {
    const auto d = describe(series.rolling);
    stats.rolling_std = d.std;
    stats.rolling_min = d.min;
    stats.rolling_max = d.max;
  }
  return stats;
}

BurstyFit calibrate_bursty(const BurstyTargets& targets, double lo, double hi,
                           double step, int replicates, std::uint64_t seed) {
  BurstyFit best;
  best.loss = std::numeric_limits<double>::infinity();
  const int n = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
  for (int i = 0; i < n; ++i) {
    const double a = lo + step * i;
    for (int j = 0; j < n; ++j) {
      const double b = lo + step * j;
      double yf = 0.0;
      double sd = 0.0;
      int extremes = 0;
      for (int r = 0; r < replicates; ++r) {
        const auto s = simulate_bursty(a, b, targets.draws, targets.window,
                                       derive_sim_seed(seed, static_cast<std::uint64_t>(r)));
        yf += s.yes_fraction;
        sd += s.rolling_std;
        if (s.rolling_min == 0.0 && s.rolling_max == 1.0) ++extremes;
      }
      if (extremes != replicates) continue;
      yf /= replicates;
      sd /= replicates;
      const double dy = (yf - targets.yes_fraction) / targets.yes_scale;
      const double ds = (sd - targets.rolling_std) / targets.std_scale;
      const double loss = dy * dy + ds * ds;
      if (loss < best.loss) {
        best = {a, b, yf, sd, 1.0, loss};
      }
    }
  }
  return best;
}

}  // namespace tribe
