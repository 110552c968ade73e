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

#ifndef DPSCOMP_ORACLE_H_
#define DPSCOMP_ORACLE_H_

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dpscomp/duality_core.h"
#include "dpscomp/scenario.h"
#include "dpscomp/sum_power.h"

namespace dpscomp {

inline constexpr double kEnumerationGuard = 1e6;

// Number of complete profiles, prod_i |Q_i|.
double CountAssociations(const Clustering& clustering);

// Calls `visit` on every profile in lexicographic order (MS 1 most
// significant). Throws EnumerationGuardError above kEnumerationGuard.
void ForEachAssociation(const Clustering& clustering,
                        const std::function<void(const std::vector<int>&)>& visit);

std::vector<std::vector<int>> EnumerateAssociations(const Clustering& clustering);

struct OracleResult {
  bool feasible = false;
  std::vector<int> association;
  double value = 0.0;  // sum power (W) or margin alpha
  int profiles = 0;
  int infeasible_profiles = 0;
  int undecided_profiles = 0;  // profiles whose solve did not settle
};

// Minimum of SolveCscbFixed over every profile; the first profile reaching
// the minimum wins.
OracleResult BruteForceSumPower(const ProblemInstance& instance,
                                const FixedPointOptions& options = {});

struct FixedMarginBounds {
  bool feasible = false;
  double lower = 0.0;
  double upper = 0.0;
};

// Margin of one fixed association by bisection on alpha. Each trial alpha is
// settled by a certificate: a design with p_q <= alpha P_q at some noise
// weights mu proves feasibility, and phi(mu) > alpha mu^T P proves
// infeasibility by weak duality. Stops when upper - lower <= tolerance * upper.
// When `cutoff` is given and alpha = cutoff is certified infeasible, returns
// early with lower > cutoff.
FixedMarginBounds BisectFixedMargin(const ProblemInstance& instance,
                                    const std::vector<int>& association,
                                    double tolerance = 1e-8,
                                    std::optional<double> cutoff = std::nullopt);

// Minimum over profiles of BisectFixedMargin's upper bound.
OracleResult BruteForceMargin(const ProblemInstance& instance,
                              double tolerance = 1e-8);

struct VerificationCheck {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
};

struct VerificationReport {
  std::vector<VerificationCheck> checks;
  bool passed() const;
};

struct VerifyOptions {
  bool require_tight_sinr = true;  // SINR_i = gamma_i, not only >=
  double sinr_tolerance = 1e-8;
  double power_tolerance = 1e-10;
  double duality_tolerance = 1e-6;
};

// Recomputes SINRs, per-BS powers and the weighted objective with plain
// loops over std::complex values, independent of the solver's linear algebra.
// `dual_value` enables the duality-gap check.
VerificationReport VerifyDesign(const ProblemInstance& instance,
                                const std::vector<int>& association,
                                const BeamformerSet& beamformers,
                                const RVector& claimed_per_bs_power,
                                std::optional<double> claimed_objective,
                                std::optional<double> dual_value,
                                const VerifyOptions& options = {});

VerificationReport VerifySolution(const ProblemInstance& instance,
                                  const Solution& solution,
                                  const VerifyOptions& options = {});

}  // namespace dpscomp

#endif  // DPSCOMP_ORACLE_H_
