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

#ifndef DPSCOMP_HARNESS_H_
#define DPSCOMP_HARNESS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "dpscomp/config.h"
#include "dpscomp/duality_core.h"
#include "dpscomp/margin.h"

namespace dpscomp {

// dps: dynamic association over the configured clusters.
// cscb_channel / cscb_location: fixed association inside the configured
//   clusters, then coordinated beamforming.
// dps_3cell / dps_universal: dynamic association with the seven-cell
//   three-cluster grouping or with every BS a candidate.
inline const std::vector<std::string> kAllSchemes = {
    "dps", "cscb_channel", "cscb_location", "dps_3cell", "dps_universal"};

struct CampaignConfig {
  ScenarioConfig scenario;
  std::vector<std::string> schemes = kAllSchemes;
  std::vector<double> gammas_db;
  int trials = 500;
  uint64_t seed_base = 1;
  bool with_margin = false;
  int workers = 0;  // 0: one per hardware thread
  FixedPointOptions fixed_point;
  MarginOptions margin;
};

struct TrialRow {
  double gamma_db = 0.0;
  int trial = 0;
  uint64_t seed = 0;
  std::string scheme;
  std::string status;  // optimal | infeasible | indeterminate | error
  double objective = 0.0;     // weighted sum power (W)
  double margin = 0.0;        // alpha_upper for dps schemes, exact otherwise
  double margin_lower = 0.0;  // alpha_lower (dps schemes) or dual bound
  int iterations = 0;
  std::string detail;
};

struct AggregateRow {
  double gamma_db = 0.0;
  std::string scheme;
  double feasibility_rate = 0.0;
  // Over trials feasible under every scheme of the campaign; NaN if none.
  double mean_sum_power_dbw = 0.0;
  double mean_margin_db = 0.0;  // NaN when margins were not computed
  int trials = 0;
  int common_trials = 0;
};

struct ExperimentReport {
  uint64_t seed_base = 0;
  int trial_count = 0;
  std::vector<std::string> schemes;
  std::vector<double> gammas_db;
  std::vector<AggregateRow> aggregates;  // gamma-major, scheme order
  std::vector<TrialRow> rows;            // gamma, trial, scheme order
};

// Throws ConfigError for unknown schemes, trials < 1, or dps_3cell without
// the seven-cell layout.
ExperimentReport RunCampaign(const CampaignConfig& config);

// Writes aggregate.csv and trials.csv into `directory` (created if missing).
// Throws Error when the files cannot be written.
void EmitCsv(const ExperimentReport& report, const std::string& directory);

std::string AggregateCsv(const ExperimentReport& report);
std::string TrialsCsv(const ExperimentReport& report);

// Parses "a:b:step" (inclusive of b up to rounding) or a single value.
std::vector<double> ParseGammaGrid(const std::string& text);

}  // namespace dpscomp

#endif  // DPSCOMP_HARNESS_H_
