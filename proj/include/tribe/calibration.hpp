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
#include <vector>

namespace tribe {

struct BurstyTargets {
  double yes_fraction = 0.57;
  double rolling_std = 0.16;
  std::size_t window = 10;
  std::size_t draws = 10000;
  // Distances are scaled by these before squaring.
  double yes_scale = 0.03;
  double std_scale = 0.05;
};

struct BurstyFit {
  double stay_yes = 0.0;
  double stay_no = 0.0;
  double yes_fraction = 0.0;   // mean over replicates
  double rolling_std = 0.0;    // mean over replicates
  double extremes_rate = 0.0;  // share of replicates where rolling hit both 0 and 1
  double loss = 0.0;
};

struct BurstyStats {
  double yes_fraction = 0.0;
  double rolling_std = 0.0;
  double rolling_min = 0.0;
  double rolling_max = 0.0;
};

// Statistics of `draws` outputs of a SyntheticBursty provider.
BurstyStats simulate_bursty(double stay_yes, double stay_no, std::size_t draws,
                            std::size_t window, std::uint64_t seed);

// Grid search over (stay_yes, stay_no) in [lo, hi] with step `step`.
// Candidates whose replicates do not all reach a 0 and a 1 rolling window are
// discarded; among the rest the scaled squared distance to the targets is minimized.
BurstyFit calibrate_bursty(const BurstyTargets& targets, double lo, double hi,
                           double step, int replicates, std::uint64_t seed);

}  // namespace tribe
