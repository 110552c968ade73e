// Copyright 2026 The dpscomp Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPSCOMP_SUM_POWER_H_
#define DPSCOMP_SUM_POWER_H_

#include <string>
#include <vector>

#include "dpscomp/duality_core.h"
#include "dpscomp/scenario.h"

namespace dpscomp {

enum class SolveStatus { kOptimal, kInfeasible, kIndeterminate };

const char* ToString(SolveStatus status);

struct Solution {
  SolveStatus status = SolveStatus::kIndeterminate;
  std::vector<int> association;  // serving BS per MS
  BeamformerSet beamformers;
  RVector delta;                 // per-MS transmit power (W)
  RVector per_bs_power;          // W
  RVector lambda;                // uplink dual powers at the fixed point
  double objective = 0.0;        // sum_q w_q p_q (W)
  double dual_value = 0.0;       // sigma^2 sum_i lambda_i (W)
  int iterations = 0;
  std::string detail;            // reason for a non-optimal status
};

// Minimum weighted sum power with dynamic association over each Q_i.
// The served BS is the minimizer of f_iq at the fixed point; BSs whose f_iq
// agree with the minimum to 1e-12 relative are tied and the lowest index wins.
Solution SolveDpsSumPower(const ProblemInstance& instance,
                          const FixedPointOptions& options = {});

// The same pipeline with each Q_i replaced by {association[i]}.
Solution SolveCscbFixed(const ProblemInstance& instance,
                        const std::vector<int>& association,
                        const FixedPointOptions& options = {});

struct ParetoPoint {
  double w1 = 0.0;
  double w2 = 0.0;
  Solution solution;
};

// For Q = 2: one solve per w1 on the uniform grid over [epsilon, 1 - epsilon]
// (w2 = 1 - w1), ordered by w1. Throws ConfigError unless Q == 2 and
// grid_points >= 2.
std::vector<ParetoPoint> ParetoSweep(const ProblemInstance& instance,
                                     int grid_points, double epsilon = 1e-3,
                                     const FixedPointOptions& options = {});

}  // namespace dpscomp

#endif  // DPSCOMP_SUM_POWER_H_
