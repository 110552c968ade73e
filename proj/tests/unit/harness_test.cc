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

#include "dpscomp/harness.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "dpscomp/config.h"
#include "dpscomp/errors.h"
#include "gtest/gtest.h"

namespace dpscomp {
namespace {

constexpr char kSingleLink[] = R"(
Q: 1
K: 1
M: 1
noise_psd: 0.01
weights: [1]
power_caps: [1]
channels:
  - {ms: 1, bs: 1, h: [0.5]}
)";

std::string ConfigPath(const std::string& name) {
  return std::string(DPSCOMP_CONFIG_DIR) + "/" + name;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

int CountLines(const std::string& text) {
  int n = 0;
  for (char c : text) n += c == '\n';
  return n;
}

TEST(ParseGammaGridTest, RangesAndSingleValues) {
  EXPECT_EQ(ParseGammaGrid("0:10:5"), (std::vector<double>{0.0, 5.0, 10.0}));
  EXPECT_EQ(ParseGammaGrid("4"), std::vector<double>{4.0});
  const auto fine = ParseGammaGrid("0:1:0.1");
  ASSERT_EQ(fine.size(), 11u);
  EXPECT_NEAR(fine.back(), 1.0, 1e-12);
  EXPECT_EQ(ParseGammaGrid("-2:2:4"), (std::vector<double>{-2.0, 2.0}));
}

TEST(ParseGammaGridTest, RejectsMalformed) {
  EXPECT_THROW(ParseGammaGrid("0:10"), ConfigError);
  EXPECT_THROW(ParseGammaGrid("0:10:0"), ConfigError);
  EXPECT_THROW(ParseGammaGrid("10:0:1"), ConfigError);
  EXPECT_THROW(ParseGammaGrid("a:b:c"), ConfigError);
  EXPECT_THROW(ParseGammaGrid("1x"), ConfigError);
}

TEST(RunCampaignTest, SingleLinkIsAlwaysFeasible) {
  CampaignConfig config;
  config.scenario = ParseConfig(kSingleLink);
  config.schemes = {"dps", "cscb_channel"};
  config.gammas_db = {0.0, 5.0, 10.0};
  config.trials = 4;
  config.with_margin = true;
  const ExperimentReport report = RunCampaign(config);
  ASSERT_EQ(report.aggregates.size(), 6u);
  ASSERT_EQ(report.rows.size(), 24u);
  for (const auto& a : report.aggregates) {
    EXPECT_EQ(a.feasibility_rate, 1.0);
    EXPECT_EQ(a.common_trials, 4);
    const double expected = 0.01 * LinearFromDb(a.gamma_db) / 0.25;
    EXPECT_NEAR(a.mean_sum_power_dbw, DbFromLinear(expected), 1e-9);
    EXPECT_NEAR(a.mean_margin_db, DbFromLinear(expected), 1e-6);
  }
}

TEST(RunCampaignTest, IndependentOfWorkerCount) {
  CampaignConfig config;
  config.scenario = LoadConfig(ConfigPath("three_cell.yaml"));
  config.schemes = {"dps", "cscb_channel", "cscb_location"};
  config.gammas_db = {0.0, 6.0};
  config.trials = 6;
  config.workers = 1;
  const ExperimentReport serial = RunCampaign(config);
  config.workers = 3;
  const ExperimentReport parallel = RunCampaign(config);
  EXPECT_EQ(TrialsCsv(serial), TrialsCsv(parallel));
  EXPECT_EQ(AggregateCsv(serial), AggregateCsv(parallel));
}

TEST(RunCampaignTest, EmittedFilesAreReproducible) {
  CampaignConfig config;
  config.scenario = LoadConfig(ConfigPath("three_cell.yaml"));
  config.schemes = {"dps", "cscb_channel"};
  config.gammas_db = {3.0};
  config.trials = 3;
  const auto root = std::filesystem::temp_directory_path() / "dpscomp_harness_test";
  std::filesystem::remove_all(root);
  EmitCsv(RunCampaign(config), (root / "a").string());
  EmitCsv(RunCampaign(config), (root / "b").string());
  for (const char* name : {"aggregate.csv", "trials.csv"}) {
    const std::string a = ReadFile(root / "a" / name);
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, ReadFile(root / "b" / name)) << name;
  }
  std::filesystem::remove_all(root);
}

TEST(RunCampaignTest, EmptyGridGivesHeadersOnly) {
  CampaignConfig config;
  config.scenario = ParseConfig(kSingleLink);
  config.schemes = {"dps"};
  config.trials = 2;
  const ExperimentReport report = RunCampaign(config);
  EXPECT_TRUE(report.rows.empty());
  EXPECT_EQ(CountLines(AggregateCsv(report)), 1);
  EXPECT_EQ(CountLines(TrialsCsv(report)), 1);
}

TEST(RunCampaignTest, OnePointOneScheme) {
  CampaignConfig config;
  config.scenario = ParseConfig(kSingleLink);
  config.schemes = {"dps"};
  config.gammas_db = {0.0};
  config.trials = 1;
  const ExperimentReport report = RunCampaign(config);
  EXPECT_EQ(CountLines(AggregateCsv(report)), 2);
  EXPECT_EQ(CountLines(TrialsCsv(report)), 2);
}

TEST(RunCampaignTest, DynamicSelectionDominatesPerTrial) {
  CampaignConfig config;
  config.scenario = LoadConfig(ConfigPath("three_cell.yaml"));
  config.schemes = {"dps", "cscb_channel", "cscb_location"};
  config.gammas_db = {0.0, 6.0};
  config.trials = 8;
  const ExperimentReport report = RunCampaign(config);
  const size_t schemes = config.schemes.size();
  for (size_t k = 0; k < report.rows.size(); k += schemes) {
    const TrialRow& dps = report.rows[k];
    ASSERT_EQ(dps.scheme, "dps");
    for (size_t s = 1; s < schemes; ++s) {
      const TrialRow& other = report.rows[k + s];
      if (other.status != "optimal") continue;
      EXPECT_EQ(dps.status, "optimal");
      EXPECT_LE(dps.objective, other.objective * (1.0 + 1e-6));
    }
  }
}

TEST(RunCampaignTest, RejectsBadSetups) {
  CampaignConfig config;
  config.scenario = ParseConfig(kSingleLink);
  config.gammas_db = {0.0};
  config.schemes = {"nope"};
  EXPECT_THROW(RunCampaign(config), ConfigError);
  config.schemes = {"cscb_location"};
  EXPECT_THROW(RunCampaign(config), ConfigError);
  config.schemes = {"dps"};
  config.trials = 0;
  EXPECT_THROW(RunCampaign(config), ConfigError);
}

}  // namespace
}  // namespace dpscomp
