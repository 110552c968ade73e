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

#include "dpscomp/sum_power.h"

#include "dpscomp/errors.h"

namespace dpscomp {

const char* ToString(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kInfeasible:
      return "infeasible";
    case SolveStatus::kIndeterminate:
      return "indeterminate";
  }
  return "unknown";
}

namespace {

RVector ToVector(const std::vector<double>& values) {
  return Eigen::Map<const RVector>(values.data(), values.size());
}

}  // namespace

Solution SolveDpsSumPower(const ProblemInstance& instance,
                          const FixedPointOptions& options) {
  instance.Validate();
  const RVector weights = ToVector(instance.weights);
  Solution solution;
  const FixedPointOutcome outcome = FixedPointSolve(instance, weights, options);
  solution.lambda = outcome.state.lambda;
  solution.iterations = outcome.state.iterations;
  solution.dual_value = outcome.dual_value;
  if (outcome.status == FixedPointStatus::kInfeasible) {
    solution.status = SolveStatus::kInfeasible;
    solution.detail = outcome.divergence_witness;
    return solution;
  }
  if (outcome.status == FixedPointStatus::kIterationLimit) {
    solution.status = SolveStatus::kIndeterminate;
    solution.detail = "fixed point iteration limit reached";
    return solution;
  }
  solution.association = ArgminAssociation(instance, solution.lambda, weights);
  try {
    DownlinkDesign design = RecoverDownlink(instance, solution.lambda, weights,
                                            solution.association);
    solution.beamformers = std::move(design.beamformers);
    solution.delta = std::move(design.delta);
    solution.per_bs_power = std::move(design.per_bs_power);
  } catch (const Error& e) {
    solution.status = SolveStatus::kIndeterminate;
    solution.detail = e.what();
    return solution;
  }
  solution.objective = weights.dot(solution.per_bs_power);
  solution.status = SolveStatus::kOptimal;
  return solution;
}

Solution SolveCscbFixed(const ProblemInstance& instance,
                        const std::vector<int>& association,
                        const FixedPointOptions& options) {
  return SolveDpsSumPower(RestrictToAssociation(instance, association),
                          options);
}

std::vector<ParetoPoint> ParetoSweep(const ProblemInstance& instance,
                                     int grid_points, double epsilon,
                                     const FixedPointOptions& options) {
  if (instance.num_bs() != 2) {
    throw ConfigError("the weight sweep needs exactly two BSs");
  }
  if (grid_points < 2) throw ConfigError("the weight grid needs two points");
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    throw ConfigError("grid margin epsilon must lie in (0, 0.5)");
  }
  std::vector<ParetoPoint> points;
  ProblemInstance weighted = instance;
  for (int k = 0; k < grid_points; ++k) {
    const double w1 =
        epsilon + (1.0 - 2.0 * epsilon) * k / static_cast<double>(grid_points - 1);
    weighted.weights = {w1, 1.0 - w1};
    points.push_back({w1, 1.0 - w1, SolveDpsSumPower(weighted, options)});
  }
  return points;
}

}  // namespace dpscomp
