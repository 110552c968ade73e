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

#include "dpscomp/margin.h"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dpscomp/errors.h"

namespace dpscomp {

const char* ToString(MarginStatus status) {
  switch (status) {
    case MarginStatus::kSolved:
      return "solved";
    case MarginStatus::kInfeasible:
      return "infeasible";
    case MarginStatus::kIndeterminate:
      return "indeterminate";
  }
  return "unknown";
}

namespace {

// Weights below this fraction of the largest are held at that floor so that
// every Sigma_q stays positive definite.
constexpr double kMuFloor = 1e-12;
// Floors tried in turn when the inner iteration stalls near a face of the
// budget simplex. The resulting cut still separates while the gap exceeds them.
constexpr double kRetryFloors[] = {1e-8, 1e-5, 1e-3};
// A weight this close to the floor is treated as sitting on the boundary.
constexpr double kBoundary = 1e-9;
constexpr double kFiniteDifference = 1e-6;
// Relative gap between the cutting-plane bound and the best dual value at
// which the maximization counts as certified.
constexpr double kCertifiedGap = 1e-11;

struct Point {
  FixedPointStatus status = FixedPointStatus::kIterationLimit;
  RVector mu;
  RVector lambda;
  double phi = -std::numeric_limits<double>::infinity();
  std::vector<int> association;
  RVector power;  // per-BS power of the argmin design; empty if unavailable
  bool ok() const { return status == FixedPointStatus::kConverged; }
  bool has_power() const { return power.size() > 0; }
};

// Solves max sum(w) s.t. a w <= 1, w >= 0 for a nonnegative a (rows: BSs,
// columns: cuts) by the tableau simplex method, and returns the row duals y
// (sum(y) = sum(w) at the optimum).
RVector CutGameDuals(const RMatrix& a) {
  const int rows = static_cast<int>(a.rows());
  const int cols = static_cast<int>(a.cols());
  const int width = cols + rows + 1;
  RMatrix t = RMatrix::Zero(rows + 1, width);
  t.block(0, 0, rows, cols) = a;
  t.block(0, cols, rows, rows).setIdentity();
  t.block(0, width - 1, rows, 1).setOnes();
  t.row(rows).head(cols).setConstant(-1.0);
  std::vector<int> basis(rows);
  for (int r = 0; r < rows; ++r) basis[r] = cols + r;
  const double eps = 1e-13 * std::max(1.0, a.maxCoeff());
  for (int pivots = 0; pivots < 50 * (rows + cols); ++pivots) {
    int enter = -1;
    double most = -1e-12;
    for (int j = 0; j < width - 1; ++j) {
      if (t(rows, j) < most) {
        most = t(rows, j);
        enter = j;
      }
    }
    if (enter < 0) break;
    int leave = -1;
    double ratio = std::numeric_limits<double>::infinity();
    for (int r = 0; r < rows; ++r) {
      if (t(r, enter) > eps) {
        const double q = t(r, width - 1) / t(r, enter);
        if (q < ratio) {
          ratio = q;
          leave = r;
        }
      }
    }
    if (leave < 0) break;  // unbounded; cannot happen for positive columns
    t.row(leave) /= t(leave, enter);
    for (int r = 0; r <= rows; ++r) {
      if (r != leave && t(r, enter) != 0.0) {
        t.row(r) -= t(r, enter) * t.row(leave);
      }
    }
    basis[leave] = enter;
  }
  return t.row(rows).segment(cols, rows).transpose().cwiseMax(0.0);
}

class MarginProblem {
 public:
  MarginProblem(const ProblemInstance& instance, const MarginOptions& options)
      : instance_(instance), options_(options) {
    const int num_bs = instance.num_bs();
    caps_ = Eigen::Map<const RVector>(instance.power_caps.data(), num_bs);
    budget_ = caps_.sum();
    for (int q = 0; q < num_bs; ++q) {
      if (!instance.clustering.served(q).empty()) active_.push_back(q);
    }
  }

  double budget() const { return budget_; }
  const std::vector<int>& active() const { return active_; }

  // Zero on idle BSs, floored, and rescaled so that sum mu_q P_q = sum P_q.
  RVector Normalize(const RVector& raw, double floor = kMuFloor) const {
    RVector mu = RVector::Zero(instance_.num_bs());
    double peak = 0.0;
    for (int q : active_) peak = std::max(peak, raw(q));
    if (!(peak > 0.0) || !std::isfinite(peak)) peak = 1.0;
    for (int q : active_) {
      mu(q) = std::isfinite(raw(q)) ? std::max(raw(q), floor * peak)
                                    : floor * peak;
    }
    return mu * (budget_ / caps_.dot(mu));
  }

  Point Evaluate(const RVector& mu, const RVector* warm) const {
    Point point;
    point.mu = mu;
    FixedPointOptions fp;
    fp.tolerance = options_.inner_tolerance;
    if (warm != nullptr) fp.initial_lambda = *warm;
    const FixedPointOutcome outcome = FixedPointSolve(instance_, mu, fp);
    point.status = outcome.status;
    point.lambda = outcome.state.lambda;
    if (!point.ok()) return point;
    point.phi = outcome.dual_value;
    point.association = ArgminAssociation(instance_, point.lambda, mu);
    try {
      point.power = RecoverDownlink(instance_, point.lambda, mu,
                                    point.association)
                        .per_bs_power;
    } catch (const Error&) {
      point.power.resize(0);
    }
    return point;
  }

  // r_q = p_q / (alpha P_q) with alpha = phi / sum(mu_q P_q).
  RVector Ratios(const Point& point) const {
    const double alpha = point.phi / caps_.dot(point.mu);
    RVector r = RVector::Ones(instance_.num_bs());
    for (int q : active_) r(q) = point.power(q) / (alpha * caps_(q));
    return r;
  }

  bool OnBoundary(const Point& point, int q) const {
    return point.mu(q) <= kBoundary * point.mu.maxCoeff();
  }

  // Worst violation of the balance conditions: r_q = 1 on interior BSs and
  // r_q <= 1 on boundary BSs.
  double Imbalance(const Point& point) const {
    const RVector r = Ratios(point);
    double worst = 0.0;
    for (int q : active_) {
      const double v = OnBoundary(point, q) ? std::max(r(q) - 1.0, 0.0)
                                            : std::abs(r(q) - 1.0);
      worst = std::max(worst, v);
    }
    return worst;
  }

  // Newton step on r_q(mu) = 1 over the interior BSs, with a finite-difference
  // Jacobian. r is homogeneous of degree 0, so the budget row fixes the scale.
  std::optional<Point> NewtonStep(const Point& current) const {
    std::vector<int> free;
    for (int q : active_) {
      if (!OnBoundary(current, q)) free.push_back(q);
    }
    const int m = static_cast<int>(free.size());
    if (m < 2) return std::nullopt;
    const RVector r0 = Ratios(current);
    RMatrix jac(m + 1, m);
    RVector rhs(m + 1);
    for (int a = 0; a < m; ++a) rhs(a) = 1.0 - r0(free[a]);
    rhs(m) = 0.0;
    for (int b = 0; b < m; ++b) {
      RVector mu = current.mu;
      const double step = kFiniteDifference * mu(free[b]);
      mu(free[b]) += step;
      const Point probe = Evaluate(mu, &current.lambda);
      if (!probe.ok() || !probe.has_power() ||
          probe.association != current.association) {
        return std::nullopt;
      }
      const RVector r = Ratios(probe);
      for (int a = 0; a < m; ++a) {
        jac(a, b) = (r(free[a]) - r0(free[a])) / step;
      }
      jac(m, b) = caps_(free[b]) / budget_;
    }
    const RVector delta = jac.completeOrthogonalDecomposition().solve(rhs);
    if (!delta.allFinite()) return std::nullopt;
    double scale = 1.0;
    for (int a = 0; a < m; ++a) {
      const double mu_a = current.mu(free[a]);
      if (mu_a + delta(a) < 0.1 * mu_a) {
        scale = std::min(scale, 0.9 * mu_a / -delta(a));
      }
    }
    RVector mu = current.mu;
    for (int a = 0; a < m; ++a) mu(free[a]) += scale * delta(a);
    Point next = Evaluate(Normalize(mu), &current.lambda);
    if (!next.ok() || !next.has_power()) return std::nullopt;
    return next;
  }

  // Records the power profile of `point` as the cut phi(mu) <= p^T mu, valid
  // for every mu because phi is the minimum of mu^T p over feasible designs.
  void AddCut(const Point& point) {
    if (!point.has_power()) return;
    cuts_.push_back(point.power);
  }

  // Maximizes min over cuts of p_k^T mu on the budget set. Returns the maximizer
  // and the optimal value, an upper bound on max phi.
  std::pair<RVector, double> CuttingPlaneStep() const {
    const int rows = static_cast<int>(active_.size());
    RMatrix a(rows, cuts_.size());
    for (size_t k = 0; k < cuts_.size(); ++k) {
      for (int r = 0; r < rows; ++r) {
        const int q = active_[r];
        a(r, k) = budget_ * cuts_[k](q) / caps_(q);
      }
    }
    const RVector y = CutGameDuals(a);
    const double total = y.sum();
    RVector mu = RVector::Zero(instance_.num_bs());
    if (!(total > 0.0)) return {mu, std::numeric_limits<double>::infinity()};
    for (int r = 0; r < rows; ++r) {
      const int q = active_[r];
      mu(q) = budget_ * (y(r) / total) / caps_(q);
    }
    return {mu, 1.0 / total};
  }

 private:
  const ProblemInstance& instance_;
  const MarginOptions& options_;
  RVector caps_;
  double budget_ = 0.0;
  std::vector<int> active_;
  std::vector<RVector> cuts_;
};

}  // namespace

std::optional<double> MarginDualValue(const ProblemInstance& instance,
                                      const RVector& mu,
                                      double inner_tolerance) {
  FixedPointOptions fp;
  fp.tolerance = inner_tolerance;
  const FixedPointOutcome outcome = FixedPointSolve(instance, mu, fp);
  if (outcome.status != FixedPointStatus::kConverged) return std::nullopt;
  return outcome.dual_value;
}

MarginDual SolveMarginDual(const ProblemInstance& instance,
                           const MarginOptions& options) {
  instance.Validate();
  MarginProblem problem(instance, options);
  MarginDual result;
  const RVector start =
      options.initial_mu.value_or(RVector::Ones(instance.num_bs()));
  if (start.size() != instance.num_bs()) {
    throw ConfigError("initial noise weights need one entry per BS");
  }
  Point current = problem.Evaluate(problem.Normalize(start), nullptr);
  if (!current.ok()) {
    result.status = current.status == FixedPointStatus::kInfeasible
                        ? MarginStatus::kInfeasible
                        : MarginStatus::kIndeterminate;
    result.detail = current.status == FixedPointStatus::kInfeasible
                        ? "SINR targets are not supportable at any power"
                        : "inner fixed point iteration limit reached";
    result.mu = current.mu;
    result.lambda = current.lambda;
    return result;
  }

  problem.AddCut(current);
  Point best = std::move(current);
  std::vector<double> best_history = {best.phi};
  bool polish = true;
  int n = 0;
  for (n = 1; n <= options.outer_max_iter; ++n) {
    if (best.has_power() && problem.Imbalance(best) <= options.balance_tolerance) {
      result.balanced = true;
      result.phi_upper = best.phi;
      break;
    }
    // Newton polish from the best point while it keeps improving.
    if (polish && best.has_power()) {
      polish = false;
      if (auto newton = problem.NewtonStep(best)) {
        problem.AddCut(*newton);
        if (newton->phi > best.phi) {
          best = std::move(*newton);
          polish = true;
        }
      }
    }
    const auto [mu, upper] = problem.CuttingPlaneStep();
    result.phi_upper = upper;
    if (upper - best.phi <= kCertifiedGap * best.phi) {
      result.certified = true;
      break;
    }
    Point next = problem.Evaluate(problem.Normalize(mu), &best.lambda);
    for (double floor : kRetryFloors) {
      if (next.ok()) break;
      next = problem.Evaluate(problem.Normalize(mu, floor), &best.lambda);
    }
    if (!next.ok()) {
      result.detail = "inner fixed point failed at a cutting-plane point";
      break;
    }
    problem.AddCut(next);
    if (next.phi > best.phi) {
      best = std::move(next);
      polish = true;
    }
    best_history.push_back(best.phi);
    if (options.record_trace) result.phi_trace.push_back(best.phi);
    const int window = options.stall_window;
    if (static_cast<int>(best_history.size()) > window) {
      const double old = best_history[best_history.size() - 1 - window];
      if (best.phi - old <= options.outer_tolerance * std::abs(best.phi)) break;
    }
  }
  const Point& chosen = best;
  result.status = MarginStatus::kSolved;
  result.outer_iterations = std::min(n, options.outer_max_iter);
  result.mu = chosen.mu;
  result.lambda = chosen.lambda;
  result.phi = chosen.phi;
  result.alpha_lower = chosen.phi / problem.budget();
  return result;
}

MarginAssociation ExtractAssociationMargin(const ProblemInstance& instance,
                                           const RVector& lambda,
                                           const RVector& mu) {
  MarginAssociation out;
  out.minimizing_sets = MinimizingStations(instance, lambda, mu);
  out.association.resize(instance.num_ms());
  out.single_minimizers = true;
  const ReceiverSet receivers = MmseReceivers(instance, lambda, mu);
  for (int i = 0; i < instance.num_ms(); ++i) {
    const auto& set = out.minimizing_sets[i];
    if (set.empty()) {
      throw ConsistencyError("no minimizing BS for MS " + std::to_string(i + 1));
    }
    if (set.size() > 1) out.single_minimizers = false;
    int chosen = set.front();
    double best = -1.0;
    for (int q : set) {
      const double g = GainSquared(instance.channels.at(i, q), receivers.at(i, q));
      if (g > best) {
        best = g;
        chosen = q;
      }
    }
    out.association[i] = chosen;
  }
  return out;
}

FixedMarginResult SolveMarginFixed(const ProblemInstance& instance,
                                   const std::vector<int>& association,
                                   const MarginOptions& options) {
  const ProblemInstance restricted = RestrictToAssociation(instance, association);
  FixedMarginResult result;
  const MarginDual dual = SolveMarginDual(restricted, options);
  result.status = dual.status;
  result.detail = dual.detail;
  result.mu = dual.mu;
  result.lambda = dual.lambda;
  if (dual.status != MarginStatus::kSolved) return result;
  result.alpha_lower = dual.alpha_lower;
  try {
    result.design = RecoverDownlink(restricted, dual.lambda, dual.mu, association);
  } catch (const Error& e) {
    result.status = MarginStatus::kIndeterminate;
    result.detail = e.what();
    return result;
  }
  double alpha = 0.0;
  for (int q = 0; q < instance.num_bs(); ++q) {
    alpha = std::max(alpha, result.design.per_bs_power(q) / instance.power_caps[q]);
  }
  result.alpha = alpha;
  return result;
}

MarginSolution SolveDpsMargin(const ProblemInstance& instance,
                              const MarginOptions& options) {
  MarginSolution solution;
  const MarginDual dual = SolveMarginDual(instance, options);
  solution.status = dual.status;
  solution.detail = dual.detail;
  solution.mu = dual.mu;
  solution.lambda = dual.lambda;
  solution.outer_iterations = dual.outer_iterations;
  if (dual.status != MarginStatus::kSolved) return solution;
  solution.alpha_lower = dual.alpha_lower;

  const MarginAssociation extracted =
      ExtractAssociationMargin(instance, dual.lambda, dual.mu);
  solution.association = extracted.association;
  solution.minimizing_sets = extracted.minimizing_sets;

  MarginOptions fixed_options = options;
  fixed_options.initial_mu = dual.mu;
  const FixedMarginResult fixed =
      SolveMarginFixed(instance, extracted.association, fixed_options);
  if (fixed.status != MarginStatus::kSolved) {
    solution.status = MarginStatus::kIndeterminate;
    solution.detail = "fixed-association margin failed: " + fixed.detail;
    return solution;
  }
  solution.alpha_upper = fixed.alpha;
  solution.design = fixed.design;
  solution.tight = extracted.single_minimizers &&
                   solution.alpha_upper - solution.alpha_lower <=
                       1e-6 * (1.0 + solution.alpha_lower);
  return solution;
}

}  // namespace dpscomp
