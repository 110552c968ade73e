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

#ifndef DPSCOMP_CONFIG_H_
#define DPSCOMP_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dpscomp/linalg.h"
#include "dpscomp/scenario.h"

namespace dpscomp {

// A channel vector given verbatim in the config file (0-based indices).
struct ExplicitChannel {
  int ms = 0;
  int bs = 0;
  CVector h;
};

// Parsed scenario file. Keys:
//   layout: two_cell | seven_cell | {bs: [[x, y], ...], ms: [[x, y], ...]}
//   Q: BS count when no layout is given
//   K: MS count (implied by an explicit ms list)
//   M or antennas: antennas per BS
//   pathloss_exponent, noise_psd (W)
//   gamma_db: scalar or one value per MS
//   weights, power_caps: scalar or one value per BS (default 1)
//   clustering: universal | {grouped: [[1, 2, 3], ...]} |
//               {candidates: [[1, 2], [2], ...]} (one-based BS numbers)
//   channels: [{ms: 1, bs: 1, h: [[re, im], ...] or [re, ...]}, ...]
//   seed
struct ScenarioConfig {
  std::vector<Point2> bs_positions;
  std::optional<std::vector<Point2>> ms_positions;
  int num_bs = 0;
  int num_ms = 0;
  int antennas = 1;
  double pathloss_exponent = 4.0;
  double noise_psd = 0.01;
  std::vector<double> gamma_db = {0.0};
  std::vector<double> weights;
  std::vector<double> power_caps;
  ClusterMode cluster_mode;
  std::optional<std::vector<std::vector<int>>> candidate_sets;
  std::vector<ExplicitChannel> channels;
  uint64_t seed = 1;

  bool has_layout() const { return !bs_positions.empty(); }
};

// Throws ConfigError with a readable message on any malformed input.
ScenarioConfig ParseConfig(const std::string& yaml_text);
ScenarioConfig LoadConfig(const std::string& path);

// Geometry for one trial: the configured BSs plus the explicit mobiles or, if
// none are given, mobiles placed from `seed`. Empty without a layout.
std::optional<Geometry> BuildGeometry(const ScenarioConfig& config,
                                      uint64_t seed);

// The instance for one trial. Random parts (placement, fading) derive from
// `seed`; explicit channels replace the random ones.
ProblemInstance BuildInstance(const ScenarioConfig& config, uint64_t seed);

// Same trial with every SINR target set to gamma_db.
ProblemInstance WithCommonTarget(ProblemInstance instance, double gamma_db);

}  // namespace dpscomp

#endif  // DPSCOMP_CONFIG_H_
