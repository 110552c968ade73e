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

#include "dpscomp/cli.h"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dpscomp/config.h"
#include "dpscomp/errors.h"
#include "dpscomp/harness.h"
#include "dpscomp/margin.h"
#include "dpscomp/oracle.h"
#include "dpscomp/report.h"
#include "dpscomp/sum_power.h"

namespace dpscomp {
namespace {

struct GlobalFlags {
  std::optional<uint64_t> seed;
  std::optional<double> tol;
};

FixedPointOptions FixedPointFrom(const GlobalFlags& flags) {
  FixedPointOptions opts;
  if (flags.tol) opts.tolerance = *flags.tol;
  return opts;
}

uint64_t SeedFrom(const GlobalFlags& flags, const ScenarioConfig& config) {
  return flags.seed.value_or(config.seed);
}

void WriteOrPrint(const std::string& path, const std::string& body,
                  std::ostream& out) {
  if (path.empty()) {
    out << body;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  file << body;
  if (!file) throw Error("cannot write '" + path + "'");
}

int RunSolve(const std::string& path, const std::string& scheme,
             const GlobalFlags& flags, std::ostream& out) {
  const ScenarioConfig config = LoadConfig(path);
  const ProblemInstance instance = BuildInstance(config, SeedFrom(flags, config));
  Solution solution;
  if (scheme == "dps") {
    solution = SolveDpsSumPower(instance, FixedPointFrom(flags));
  } else {
    const auto association =
        FixedAssociation(instance, ParseAssociationScheme(scheme));
    solution = SolveCscbFixed(instance, association, FixedPointFrom(flags));
  }
  out << FormatSolution(solution);
  if (solution.status == SolveStatus::kOptimal) {
    out << "verification:\n" << FormatVerification(VerifySolution(instance, solution));
  }
  return kExitOk;
}

int RunMargin(const std::string& path, const GlobalFlags& flags,
              std::ostream& out) {
  const ScenarioConfig config = LoadConfig(path);
  const ProblemInstance instance = BuildInstance(config, SeedFrom(flags, config));
  out << FormatMarginSolution(instance, SolveDpsMargin(instance));
  return kExitOk;
}

int RunSweep(const std::string& path, int grid, const std::string& out_path,
             const GlobalFlags& flags, std::ostream& out) {
  const ScenarioConfig config = LoadConfig(path);
  const ProblemInstance instance = BuildInstance(config, SeedFrom(flags, config));
  const auto points = ParetoSweep(instance, grid, 1e-3, FixedPointFrom(flags));
  WriteOrPrint(out_path, FormatParetoCsv(points), out);
  return kExitOk;
}

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

int RunCampaignCommand(const std::string& path, const std::string& gammas,
                       int trials, const std::string& out_dir,
                       const std::string& schemes, bool margin, int workers,
                       const GlobalFlags& flags, std::ostream& out) {
  CampaignConfig campaign;
  campaign.scenario = LoadConfig(path);
  campaign.gammas_db = ParseGammaGrid(gammas);
  campaign.trials = trials;
  campaign.seed_base = SeedFrom(flags, campaign.scenario);
  campaign.with_margin = margin;
  campaign.workers = workers;
  campaign.fixed_point = FixedPointFrom(flags);
  if (!schemes.empty()) campaign.schemes = SplitList(schemes);
  const ExperimentReport report = RunCampaign(campaign);
  EmitCsv(report, out_dir);
  out << AggregateCsv(report);
  return kExitOk;
}

int RunOracleCheck(const std::string& path, int instances, bool margin,
                   const GlobalFlags& flags, std::ostream& out) {
  const ScenarioConfig config = LoadConfig(path);
  const uint64_t base = SeedFrom(flags, config);
  int mismatches = 0;
  int feasible = 0;
  for (int n = 0; n < instances; ++n) {
    const uint64_t seed = base + static_cast<uint64_t>(n);
    const ProblemInstance instance = BuildInstance(config, seed);
    const Solution dps = SolveDpsSumPower(instance, FixedPointFrom(flags));
    const OracleResult oracle = BruteForceSumPower(instance, FixedPointFrom(flags));
    std::ostringstream line;
    line << "seed " << seed << ": ";
    bool ok = true;
    if (dps.status == SolveStatus::kIndeterminate || oracle.undecided_profiles > 0) {
      ok = false;
      line << "undecided";
    } else if ((dps.status == SolveStatus::kOptimal) != oracle.feasible) {
      ok = false;
      line << "feasibility mismatch (solver " << ToString(dps.status)
           << ", oracle " << (oracle.feasible ? "feasible" : "infeasible") << ")";
    } else if (!oracle.feasible) {
      line << "infeasible (agreed)";
    } else {
      ++feasible;
      const double rel =
          std::abs(dps.objective - oracle.value) / std::abs(oracle.value);
      const VerificationReport verify = VerifySolution(instance, dps);
      ok = rel <= 1e-6 && verify.passed();
      line << "objective " << dps.objective << " oracle " << oracle.value
           << " rel " << rel << (verify.passed() ? "" : " verification FAIL");
      if (margin) {
        const MarginSolution m = SolveDpsMargin(instance);
        const OracleResult alpha = BruteForceMargin(instance);
        const bool sandwich = m.status == MarginStatus::kSolved && alpha.feasible &&
                              m.alpha_lower <= alpha.value + 1e-6 &&
                              alpha.value <= m.alpha_upper + 1e-6;
        ok = ok && sandwich;
        line << " margin [" << m.alpha_lower << ", " << m.alpha_upper
             << "] oracle " << alpha.value << (sandwich ? "" : " sandwich FAIL");
      }
    }
    if (!ok) ++mismatches;
    out << line.str() << (ok ? " ok" : " MISMATCH") << '\n';
  }
  out << "instances: " << instances << " feasible: " << feasible
      << " mismatches: " << mismatches << '\n';
  return mismatches == 0 ? kExitOk : kExitMismatch;
}

int RunTrace(const std::string& path, const std::string& out_path,
             const GlobalFlags& flags, std::ostream& out) {
  const ScenarioConfig config = LoadConfig(path);
  const ProblemInstance instance = BuildInstance(config, SeedFrom(flags, config));
  FixedPointOptions opts = FixedPointFrom(flags);
  opts.record_trace = true;
  const RVector weights =
      Eigen::Map<const RVector>(instance.weights.data(), instance.num_bs());
  const FixedPointOutcome outcome = FixedPointSolve(instance, weights, opts);
  WriteOrPrint(out_path, FormatTraceCsv(outcome.state), out);
  return kExitOk;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Joint BS association and beamforming for CoMP dynamic point "
               "selection"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalFlags flags;
  uint64_t seed = 0;
  double tol = 0.0;
  auto* seed_opt = app.add_option("--seed", seed, "override the config seed");
  auto* tol_opt = app.add_option("--tol", tol, "fixed-point tolerance")
                      ->check(CLI::PositiveNumber);

  std::string config_path;
  std::string scheme = "dps";
  auto* solve = app.add_subcommand("solve", "solve one instance (sum power)");
  solve->add_option("config", config_path, "scenario file")->required();
  solve->add_option("--scheme", scheme, "dps, cscb_channel or cscb_location")
      ->check(CLI::IsMember({"dps", "cscb_channel", "cscb_location"}));

  auto* margin = app.add_subcommand("margin", "minimize the per-BS power margin");
  margin->add_option("config", config_path, "scenario file")->required();

  int grid = 21;
  std::string out_path;
  auto* sweep = app.add_subcommand("sweep-weights", "Pareto sweep for two BSs");
  sweep->add_option("config", config_path, "scenario file")->required();
  sweep->add_option("--grid", grid, "number of w1 points")
      ->check(CLI::Range(2, 1000000));
  sweep->add_option("--out", out_path, "CSV output file");

  std::string gammas;
  int trials = 500;
  std::string out_dir;
  std::string schemes;
  bool with_margin = false;
  int workers = 0;
  auto* campaign = app.add_subcommand("campaign", "Monte Carlo campaign");
  campaign->add_option("config", config_path, "scenario file")->required();
  campaign->add_option("--gammas", gammas, "SINR grid a:b:step in dB")->required();
  campaign->add_option("--trials", trials, "trials per SINR point")
      ->check(CLI::PositiveNumber);
  campaign->add_option("--out", out_dir, "output directory")->required();
  campaign->add_option("--schemes", schemes, "comma-separated scheme list");
  campaign->add_flag("--margin", with_margin, "also compute power margins");
  campaign->add_option("--workers", workers, "worker threads (0: all cores)")
      ->check(CLI::NonNegativeNumber);

  int instances = 100;
  bool oracle_margin = false;
  auto* oracle = app.add_subcommand("oracle-check", "certify against brute force");
  oracle->add_option("config", config_path, "scenario file")->required();
  oracle->add_option("--instances", instances, "number of seeded instances")
      ->check(CLI::PositiveNumber);
  oracle->add_flag("--margin", oracle_margin, "also check the margin sandwich");

  auto* trace = app.add_subcommand("trace", "fixed-point residue trace as CSV");
  trace->add_option("config", config_path, "scenario file")->required();
  trace->add_option("--out", out_path, "CSV output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return kExitUsage;
  }
  if (*seed_opt) flags.seed = seed;
  if (*tol_opt) flags.tol = tol;

  try {
    if (*solve) return RunSolve(config_path, scheme, flags, out);
    if (*margin) return RunMargin(config_path, flags, out);
    if (*sweep) return RunSweep(config_path, grid, out_path, flags, out);
    if (*campaign) {
      return RunCampaignCommand(config_path, gammas, trials, out_dir, schemes,
                                with_margin, workers, flags, out);
    }
    if (*oracle) return RunOracleCheck(config_path, instances, oracle_margin, flags, out);
    if (*trace) return RunTrace(config_path, out_path, flags, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitMismatch;
  }
  return kExitUsage;
}

}  // namespace dpscomp
