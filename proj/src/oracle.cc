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

#include "dpscomp/oracle.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "dpscomp/errors.h"

namespace dpscomp {

double CountAssociations(const Clustering& clustering) {
  double count = 1.0;
  for (const auto& set : clustering.candidate_sets()) count *= set.size();
  return count;
}

void ForEachAssociation(
    const Clustering& clustering,
    const std::function<void(const std::vector<int>&)>& visit) {
  const double count = CountAssociations(clustering);
  if (count > kEnumerationGuard) {
    throw EnumerationGuardError("refusing to enumerate " +
                                std::to_string(count) +
                                " association profiles");
  }
  const int num_ms = clustering.num_ms();
  std::vector<size_t> digit(num_ms, 0);
  std::vector<int> profile(num_ms);
  while (true) {
    for (int i = 0; i < num_ms; ++i) {
      profile[i] = clustering.candidates(i)[digit[i]];
    }
    visit(profile);
    int i = num_ms - 1;
    while (i >= 0 && ++digit[i] == clustering.candidates(i).size()) {
      digit[i] = 0;
      --i;
    }
    if (i < 0) return;
  }
}

std::vector<std::vector<int>> EnumerateAssociations(const Clustering& clustering) {
  std::vector<std::vector<int>> profiles;
  ForEachAssociation(clustering, [&](const std::vector<int>& p) {
    profiles.push_back(p);
  });
  return profiles;
}

OracleResult BruteForceSumPower(const ProblemInstance& instance,
                                const FixedPointOptions& options) {
  OracleResult result;
  result.value = std::numeric_limits<double>::infinity();
  // Unsettled profiles keep their dual bound: iterating up from zero never
  // overshoots, so sigma^2 sum(lambda_n) is below the profile's optimum.
  std::vector<double> unsettled_bounds;
  ForEachAssociation(instance.clustering, [&](const std::vector<int>& profile) {
    ++result.profiles;
    const Solution s = SolveCscbFixed(instance, profile, options);
    if (s.status == SolveStatus::kInfeasible) {
      ++result.infeasible_profiles;
      return;
    }
    if (s.status != SolveStatus::kOptimal) {
      unsettled_bounds.push_back(options.initial_lambda ? 0.0 : s.dual_value);
      return;
    }
    if (s.objective < result.value) {
      result.value = s.objective;
      result.association = profile;
      result.feasible = true;
    }
  });
  for (double bound : unsettled_bounds) {
    if (!(result.feasible && bound > result.value)) ++result.undecided_profiles;
  }
  if (!result.feasible) result.value = 0.0;
  return result;
}

namespace {

constexpr int kMaxUpdatesPerTest = 4000;
// Near-singular profiles contract slowly; the oracle waits them out.
constexpr int kCertifierMaxIter = 1000000;
constexpr double kMinStep = 1e-12;

// Noise-weight state of the certificate search for one fixed association.
class MarginCertifier {
 public:
  MarginCertifier(const ProblemInstance& restricted,
                  const std::vector<int>& association)
      : instance_(restricted), association_(association) {
    const int num_bs = restricted.num_bs();
    caps_ = Eigen::Map<const RVector>(restricted.power_caps.data(), num_bs);
    mu_ = RVector::Zero(num_bs);
    for (int q = 0; q < num_bs; ++q) {
      if (!restricted.clustering.served(q).empty()) {
        active_.push_back(q);
        mu_(q) = 1.0;
      }
    }
    mu_ *= caps_.sum() / caps_.dot(mu_);
  }

  // Evaluates the current weights; false when the SINR targets cannot be met
  // at all (or the inner iteration did not settle, see `settled`).
  bool Evaluate() {
    FixedPointOptions fp;
    fp.tolerance = 1e-12;
    fp.max_iter = kCertifierMaxIter;
    if (lambda_.size() > 0) fp.initial_lambda = lambda_;
    const FixedPointOutcome out = FixedPointSolve(instance_, mu_, fp);
    settled_ = out.status != FixedPointStatus::kIterationLimit;
    if (!settled_ && lambda_.size() == 0) {
      // Started from zero, so the truncated iterate still bounds phi below.
      lower_ = std::max(lower_, out.dual_value / caps_.dot(mu_));
    }
    if (out.status != FixedPointStatus::kConverged) return false;
    RVector power;
    try {
      power = RecoverDownlink(instance_, out.state.lambda, mu_, association_)
                  .per_bs_power;
    } catch (const Error&) {
      settled_ = false;
      return false;
    }
    lambda_ = out.state.lambda;
    phi_ = out.dual_value;
    power_ = std::move(power);
    lower_ = std::max(lower_, phi_ / caps_.dot(mu_));
    double worst = 0.0;
    for (int q : active_) worst = std::max(worst, power_(q) / caps_(q));
    upper_ = std::min(upper_, worst);
    return true;
  }

  bool settled() const { return settled_; }

  // Best phi(mu) / mu^T P seen: every alpha below it is infeasible.
  double LowerCertificate() const { return lower_; }

  // Best max_q p_q / P_q seen: every alpha above it is feasible.
  double UpperCertificate() const { return upper_; }

  // One backtracking step of mu_q *= (p_q / P_q)^step from the current
  // weights. The step is kept if it tightens either certificate. False once
  // the step has collapsed or an evaluation failed.
  bool Advance() {
    while (step_ > kMinStep) {
      const RVector base_mu = mu_;
      const RVector base_lambda = lambda_;
      const RVector base_power = power_;
      const double base_phi = phi_;
      const double base_lower = lower_;
      const double base_upper = upper_;
      double peak = 0.0;
      for (int q : active_) {
        const double r = std::max(power_(q) / caps_(q), 1e-300);
        mu_(q) *= std::pow(r / upper_bound_ratio(), step_);
        peak = std::max(peak, mu_(q));
      }
      for (int q : active_) mu_(q) = std::max(mu_(q), 1e-12 * peak);
      mu_ *= caps_.sum() / caps_.dot(mu_);
      if (!Evaluate()) return false;
      if (lower_ > base_lower || upper_ < base_upper) {
        step_ = std::min(1.0, 2.0 * step_);
        return true;
      }
      mu_ = base_mu;
      lambda_ = base_lambda;
      power_ = base_power;
      phi_ = base_phi;
      step_ *= 0.5;
    }
    return false;
  }

 private:
  const ProblemInstance& instance_;
  const std::vector<int>& association_;
  RVector caps_;
  RVector mu_;
  RVector lambda_;
  RVector power_;
  double phi_ = 0.0;
  std::vector<int> active_;
  double lower_ = 0.0;
  double upper_ = std::numeric_limits<double>::infinity();
  double step_ = 1.0;
  bool settled_ = true;

  double upper_bound_ratio() const {
    double worst = 0.0;
    for (int q : active_) worst = std::max(worst, power_(q) / caps_(q));
    return worst;
  }
};

double InitialBracket(const ProblemInstance& instance) {
  double gamma_sum = 0.0;
  for (double g : instance.gamma) gamma_sum += g;
  double weakest = 0.0;
  for (int i = 0; i < instance.num_ms(); ++i) {
    for (int q : instance.clustering.candidates(i)) {
      const double n2 = instance.channels.at(i, q).squaredNorm();
      weakest = std::max(weakest, n2 > 0.0 ? 1.0 / n2 : 0.0);
    }
  }
  const double min_cap =
      *std::min_element(instance.power_caps.begin(), instance.power_caps.end());
  return 10.0 * gamma_sum * instance.noise_power() * weakest / min_cap;
}

}  // namespace

FixedMarginBounds BisectFixedMargin(const ProblemInstance& instance,
                                    const std::vector<int>& association,
                                    double tolerance,
                                    std::optional<double> cutoff) {
  const ProblemInstance restricted = RestrictToAssociation(instance, association);
  FixedMarginBounds bounds;
  MarginCertifier certifier(restricted, association);
  if (!certifier.Evaluate()) {
    if (!certifier.settled()) {
      bounds.feasible = true;  // undecided: report the open bracket
      bounds.lower = certifier.LowerCertificate();
      bounds.upper = std::numeric_limits<double>::infinity();
    }
    return bounds;
  }
  bounds.feasible = true;
  double lo = 0.0;
  double hi = InitialBracket(restricted);
  for (int widen = 0; widen < 3 && certifier.UpperCertificate() > hi; ++widen) {
    hi *= 10.0;
  }
  hi = std::min(hi, certifier.UpperCertificate());
  lo = std::max(lo, certifier.LowerCertificate());
  bool cutoff_pending = cutoff.has_value();
  int updates = 0;
  while (hi - lo > tolerance * hi) {
    double mid = 0.5 * (lo + hi);
    if (cutoff_pending) {
      cutoff_pending = false;
      if (*cutoff <= lo) break;
      if (*cutoff < hi) mid = *cutoff;
    }
    // Refine the weights until one certificate settles `mid`.
    while (lo < mid && mid < hi) {
      if (++updates > kMaxUpdatesPerTest) break;
      if (!certifier.Advance()) break;
      hi = std::min(hi, certifier.UpperCertificate());
      lo = std::max(lo, certifier.LowerCertificate());
    }
    if (lo < mid && mid < hi) break;  // weights stopped improving
    if (cutoff && lo > *cutoff) break;
  }
  bounds.lower = lo;
  bounds.upper = hi;
  return bounds;
}

OracleResult BruteForceMargin(const ProblemInstance& instance,
                              double tolerance) {
  OracleResult result;
  result.value = std::numeric_limits<double>::infinity();
  std::vector<FixedMarginBounds> open;
  ForEachAssociation(instance.clustering, [&](const std::vector<int>& profile) {
    ++result.profiles;
    std::optional<double> cutoff;
    if (result.feasible) cutoff = result.value;
    const FixedMarginBounds b =
        BisectFixedMargin(instance, profile, tolerance, cutoff);
    if (!b.feasible) {
      ++result.infeasible_profiles;
      return;
    }
    if (b.upper - b.lower > tolerance * b.upper) open.push_back(b);
    if (b.upper < result.value) {
      result.value = b.upper;
      result.association = profile;
      result.feasible = true;
    }
  });
  // A wide bracket matters only if it could still hold the minimum.
  for (const auto& b : open) {
    if (!(result.feasible && b.lower > result.value)) ++result.undecided_profiles;
  }
  if (!result.feasible) result.value = 0.0;
  return result;
}

bool VerificationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const VerificationCheck& c) { return c.passed; });
}

namespace {

using Cx = std::complex<double>;

// |a^H b|^2 by an explicit loop.
double NaiveGain(const CVector& a, const CVector& b) {
  Cx acc(0.0, 0.0);
  for (int m = 0; m < a.size(); ++m) acc += std::conj(a(m)) * b(m);
  return std::norm(acc);
}

double NaiveNorm2(const CVector& a) {
  double acc = 0.0;
  for (int m = 0; m < a.size(); ++m) acc += std::norm(a(m));
  return acc;
}

}  // namespace

VerificationReport VerifyDesign(const ProblemInstance& instance,
                                const std::vector<int>& association,
                                const BeamformerSet& beamformers,
                                const RVector& claimed_per_bs_power,
                                std::optional<double> claimed_objective,
                                std::optional<double> dual_value,
                                const VerifyOptions& options) {
  const int num_ms = instance.num_ms();
  const int num_bs = instance.num_bs();
  const double sigma2 = instance.noise_power();
  auto beam = [&](int i, int q) -> const CVector* {
    if (beamformers.w.empty()) return nullptr;
    const CVector& w = beamformers.at(i, q);
    return w.size() > 0 ? &w : nullptr;
  };

  VerificationReport report;
  double worst_deficit = std::numeric_limits<double>::infinity();
  double worst_deviation = 0.0;
  for (int i = 0; i < num_ms; ++i) {
    double signal = 0.0;
    double interference = sigma2;
    for (int j = 0; j < num_ms; ++j) {
      for (int r = 0; r < num_bs; ++r) {
        const CVector* w = beam(j, r);
        if (w == nullptr) continue;
        const double g = NaiveGain(instance.channels.at(i, r), *w);
        if (j != i) {
          interference += g;
        } else if (instance.clustering.IsCandidate(i, r)) {
          signal += g;
        }
      }
    }
    const double slack = (signal / interference - instance.gamma[i]) /
                         instance.gamma[i];
    worst_deficit = std::min(worst_deficit, slack);
    worst_deviation = std::max(worst_deviation, std::abs(slack));
  }
  report.checks.push_back({"sinr_feasible", worst_deficit >= -options.sinr_tolerance,
                           worst_deficit, options.sinr_tolerance});
  if (options.require_tight_sinr) {
    report.checks.push_back({"sinr_tight",
                             worst_deviation <= options.sinr_tolerance,
                             worst_deviation, options.sinr_tolerance});
  }

  int bad_links = 0;
  for (int i = 0; i < num_ms; ++i) {
    int nonzero = 0;
    bool at_assigned = false;
    for (int q = 0; q < num_bs; ++q) {
      const CVector* w = beam(i, q);
      if (w != nullptr && NaiveNorm2(*w) > 0.0) {
        ++nonzero;
        at_assigned = static_cast<int>(association.size()) > i &&
                      association[i] == q && instance.clustering.IsCandidate(i, q);
      }
    }
    if (nonzero != 1 || !at_assigned) ++bad_links;
  }
  report.checks.push_back({"one_bs_per_ms", bad_links == 0,
                           static_cast<double>(bad_links), 0.0});

  std::vector<double> power(num_bs, 0.0);
  for (int i = 0; i < num_ms; ++i) {
    for (int q = 0; q < num_bs; ++q) {
      if (const CVector* w = beam(i, q)) power[q] += NaiveNorm2(*w);
    }
  }
  double worst_power = 0.0;
  for (int q = 0; q < num_bs; ++q) {
    const double claimed =
        q < claimed_per_bs_power.size() ? claimed_per_bs_power(q) : 0.0;
    worst_power = std::max(worst_power,
                           std::abs(power[q] - claimed) / (1.0 + std::abs(claimed)));
  }
  report.checks.push_back({"power_accounting",
                           worst_power <= options.power_tolerance, worst_power,
                           options.power_tolerance});

  double objective = 0.0;
  for (int q = 0; q < num_bs; ++q) objective += instance.weights[q] * power[q];
  if (claimed_objective) {
    const double err =
        std::abs(objective - *claimed_objective) / (1.0 + std::abs(objective));
    report.checks.push_back({"objective", err <= options.power_tolerance, err,
                             options.power_tolerance});
  }
  if (dual_value) {
    const double gap = std::abs(objective - *dual_value) / (1.0 + objective);
    report.checks.push_back({"duality_gap", gap <= options.duality_tolerance, gap,
                             options.duality_tolerance});
  }
  return report;
}

VerificationReport VerifySolution(const ProblemInstance& instance,
                                  const Solution& solution,
                                  const VerifyOptions& options) {
  return VerifyDesign(instance, solution.association, solution.beamformers,
                      solution.per_bs_power, solution.objective,
                      solution.dual_value, options);
}

}  // namespace dpscomp
