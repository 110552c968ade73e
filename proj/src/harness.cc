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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "dpscomp/errors.h"
#include "dpscomp/sum_power.h"

namespace dpscomp {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string Format(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

struct SchemeInstances {
  ProblemInstance configured;
  std::optional<ProblemInstance> three_cell;
  ProblemInstance universal;
};

TrialRow SolveScheme(const std::string& scheme, const ProblemInstance& base,
                     const SchemeInstances& variants, const CampaignConfig& config) {
  TrialRow row;
  row.scheme = scheme;
  try {
    const bool dynamic = scheme.rfind("dps", 0) == 0;
    const ProblemInstance* instance = &base;
    ProblemInstance regrouped;
    if (scheme == "dps_3cell" || scheme == "dps_universal") {
      regrouped = base;
      regrouped.clustering = scheme == "dps_3cell" ? variants.three_cell->clustering
                                                   : variants.universal.clustering;
      instance = &regrouped;
    }
    Solution solution;
    std::vector<int> association;
    if (dynamic) {
      solution = SolveDpsSumPower(*instance, config.fixed_point);
    } else {
      association = FixedAssociation(*instance, ParseAssociationScheme(scheme));
      solution = SolveCscbFixed(*instance, association, config.fixed_point);
    }
    row.status = ToString(solution.status);
    row.iterations = solution.iterations;
    row.detail = solution.detail;
    if (solution.status != SolveStatus::kOptimal) return row;
    row.objective = solution.objective;
    if (config.with_margin) {
      if (dynamic) {
        const MarginSolution m = SolveDpsMargin(*instance, config.margin);
        row.margin = m.alpha_upper;
        row.margin_lower = m.alpha_lower;
        if (m.status != MarginStatus::kSolved) row.margin = row.margin_lower = kNaN;
      } else {
        const FixedMarginResult m =
            SolveMarginFixed(*instance, association, config.margin);
        row.margin = m.alpha;
        row.margin_lower = m.alpha_lower;
        if (m.status != MarginStatus::kSolved) row.margin = row.margin_lower = kNaN;
      }
    }
  } catch (const Error& e) {
    row.status = "error";
    row.detail = e.what();
  }
  return row;
}

}  // namespace

std::vector<double> ParseGammaGrid(const std::string& text) {
  std::vector<double> parts;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ':')) {
    try {
      size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("bad gamma grid '" + text + "', expected a:b:step");
    }
  }
  if (parts.size() == 1) return parts;
  if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0]) {
    throw ConfigError("bad gamma grid '" + text + "', expected a:b:step");
  }
  std::vector<double> grid;
  const int steps =
      static_cast<int>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
  for (int k = 0; k <= steps; ++k) grid.push_back(parts[0] + k * parts[2]);
  return grid;
}

ExperimentReport RunCampaign(const CampaignConfig& config) {
  if (config.trials < 1) throw ConfigError("trials must be at least 1");
  for (const auto& s : config.schemes) {
    if (std::find(kAllSchemes.begin(), kAllSchemes.end(), s) == kAllSchemes.end()) {
      throw ConfigError("unknown scheme '" + s + "'");
    }
    if (s == "dps_3cell" && config.scenario.num_bs != 7) {
      throw ConfigError("dps_3cell needs the seven-cell layout");
    }
    if (s == "cscb_location" && !config.scenario.has_layout()) {
      throw ConfigError("cscb_location needs node positions");
    }
  }
  if (std::find(config.schemes.begin(), config.schemes.end(), "dps_3cell") !=
          config.schemes.end() &&
      !config.scenario.has_layout()) {
    throw ConfigError("dps_3cell needs node positions");
  }

  ExperimentReport report;
  report.seed_base = config.seed_base;
  report.trial_count = config.trials;
  report.schemes = config.schemes;
  report.gammas_db = config.gammas_db;
  const size_t num_gammas = config.gammas_db.size();
  const size_t num_schemes = config.schemes.size();
  const size_t trials = static_cast<size_t>(config.trials);
  std::vector<TrialRow> slots(num_gammas * trials * num_schemes);

  auto run_trial = [&](size_t t) {
    const uint64_t seed = config.seed_base + t;
    std::vector<TrialRow> local;
    std::optional<SchemeInstances> variants;
    std::string error;
    try {
      const ProblemInstance base = BuildInstance(config.scenario, seed);
      variants = SchemeInstances{base, std::nullopt, base};
      variants->universal.clustering =
          Clustering::Universal(base.num_bs(), base.num_ms());
      if (base.geometry && base.num_bs() == 7) {
        variants->three_cell = base;
        variants->three_cell->clustering =
            BuildClusters(*base.geometry, SevenCellThreeClusters());
      }
    } catch (const Error& e) {
      error = e.what();
    }
    for (size_t g = 0; g < num_gammas; ++g) {
      for (size_t s = 0; s < num_schemes; ++s) {
        TrialRow row;
        if (variants) {
          const ProblemInstance instance =
              WithCommonTarget(variants->configured, config.gammas_db[g]);
          row = SolveScheme(config.schemes[s], instance, *variants, config);
        } else {
          row.scheme = config.schemes[s];
          row.status = "error";
          row.detail = error;
        }
        row.gamma_db = config.gammas_db[g];
        row.trial = static_cast<int>(t);
        row.seed = seed;
        slots[(g * trials + t) * num_schemes + s] = std::move(row);
      }
    }
  };

  int workers = config.workers > 0
                    ? config.workers
                    : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min<int>(workers, config.trials);
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t t = next++; t < trials; t = next++) run_trial(t);
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  report.rows = std::move(slots);

  for (size_t g = 0; g < num_gammas; ++g) {
    std::vector<bool> common(trials, true);
    for (size_t t = 0; t < trials; ++t) {
      for (size_t s = 0; s < num_schemes; ++s) {
        const TrialRow& row = report.rows[(g * trials + t) * num_schemes + s];
        if (row.status != "optimal") common[t] = false;
        if (config.with_margin && std::isnan(row.margin)) common[t] = false;
      }
    }
    for (size_t s = 0; s < num_schemes; ++s) {
      AggregateRow agg;
      agg.gamma_db = config.gammas_db[g];
      agg.scheme = config.schemes[s];
      agg.trials = config.trials;
      int feasible = 0;
      double power_sum = 0.0;
      double margin_sum = 0.0;
      for (size_t t = 0; t < trials; ++t) {
        const TrialRow& row = report.rows[(g * trials + t) * num_schemes + s];
        if (row.status == "optimal") ++feasible;
        if (common[t]) {
          ++agg.common_trials;
          power_sum += row.objective;
          margin_sum += row.margin;
        }
      }
      agg.feasibility_rate = static_cast<double>(feasible) / config.trials;
      agg.mean_sum_power_dbw =
          agg.common_trials > 0 ? DbFromLinear(power_sum / agg.common_trials) : kNaN;
      agg.mean_margin_db = config.with_margin && agg.common_trials > 0
                               ? DbFromLinear(margin_sum / agg.common_trials)
                               : kNaN;
      report.aggregates.push_back(agg);
    }
  }
  return report;
}

std::string AggregateCsv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "gamma_db,scheme,feasibility_rate,mean_sum_power_dbw,mean_margin_db,"
         "trials\n";
  for (const auto& a : report.aggregates) {
    out << Format(a.gamma_db) << ',' << a.scheme << ','
        << Format(a.feasibility_rate) << ',' << Format(a.mean_sum_power_dbw)
        << ',' << Format(a.mean_margin_db) << ',' << a.trials << '\n';
  }
  return out.str();
}

std::string TrialsCsv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "gamma_db,trial,seed,scheme,status,objective_w,sum_power_dbw,margin,"
         "margin_lower,iterations\n";
  for (const auto& r : report.rows) {
    const bool ok = r.status == "optimal";
    out << Format(r.gamma_db) << ',' << r.trial << ',' << r.seed << ','
        << r.scheme << ',' << r.status << ',' << Format(ok ? r.objective : kNaN)
        << ',' << Format(ok ? DbFromLinear(r.objective) : kNaN) << ','
        << Format(ok && r.margin > 0.0 ? r.margin : kNaN) << ','
        << Format(ok && r.margin_lower > 0.0 ? r.margin_lower : kNaN) << ','
        << r.iterations << '\n';
  }
  return out.str();
}

void EmitCsv(const ExperimentReport& report, const std::string& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw Error("cannot create output directory '" + directory + "'");
  const auto write = [&](const std::string& name, const std::string& body) {
    const std::string path = (std::filesystem::path(directory) / name).string();
    std::ofstream out(path, std::ios::binary);
    out << body;
    if (!out) throw Error("cannot write '" + path + "'");
  };
  write("aggregate.csv", AggregateCsv(report));
  write("trials.csv", TrialsCsv(report));
}

}  // namespace dpscomp
