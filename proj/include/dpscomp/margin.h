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

#ifndef DPSCOMP_MARGIN_H_
#define DPSCOMP_MARGIN_H_

#include <optional>
#include <string>
#include <vector>

#include "dpscomp/duality_core.h"
#include "dpscomp/scenario.h"

namespace dpscomp {

struct MarginOptions {
  // Stop when the running best dual value improved by less than this
  // (relative) over the last stall_window iterations.
  double outer_tolerance = 1e-7;
  int outer_max_iter = 5000;
  int stall_window = 50;
  // Tolerance of every inner fixed-point solve.
  double inner_tolerance = 1e-12;
  // Stop when per-BS powers are balanced, |p_q / (alpha P_q) - 1| <= this on
  // every BS with a positive weight.
  double balance_tolerance = 1e-9;
  // Starting noise weights; defaults to all ones. Rescaled onto the budget.
  std::optional<RVector> initial_mu;
  bool record_trace = false;
};

enum class MarginStatus { kSolved, kInfeasible, kIndeterminate };

const char* ToString(MarginStatus status);

struct MarginDual {
  MarginStatus status = MarginStatus::kIndeterminate;
  RVector lambda;
  RVector mu;  // zero on BSs that serve nobody
  double phi = 0.0;          // sigma^2 sum(lambda) at mu
  double alpha_lower = 0.0;  // phi / sum(P)
  int outer_iterations = 0;
  bool balanced = false;     // stopped on the balance test
  // Cutting-plane upper bound on max phi; equals phi when certified.
  double phi_upper = 0.0;
  bool certified = false;    // phi_upper - phi <= 1e-11 phi
  std::vector<double> phi_trace;
  std::string detail;
};

// Maximizes phi(mu) = sigma^2 sum(lambda(mu)) over {mu >= 0, sum mu_q P_q <=
// sum P_q}. Every iterate is budget feasible, so alpha_lower is a valid lower
// bound on the margin even when the ascent stops early.
MarginDual SolveMarginDual(const ProblemInstance& instance,
                           const MarginOptions& options = {});

// phi(mu); empty when the inner iteration does not converge.
std::optional<double> MarginDualValue(const ProblemInstance& instance,
                                      const RVector& mu,
                                      double inner_tolerance = 1e-12);

struct MarginAssociation {
  std::vector<int> association;                   // q_i^+
  std::vector<std::vector<int>> minimizing_sets;  // Q-hat_i
  bool single_minimizers = false;                 // |Q-hat_i| == 1 for all i
};

// Q-hat_i = {q : f_iq(lambda, mu) <= (1 + 1e-6) lambda_i}. With a single
// minimizer q_i^+ is that BS; otherwise q_i^+ maximizes |h_iq^H w-hat_iq| over
// Q-hat_i with the MMSE directions at (lambda, mu), ties to the lowest index.
// Throws ConsistencyError when some Q-hat_i is empty.
MarginAssociation ExtractAssociationMargin(const ProblemInstance& instance,
                                           const RVector& lambda,
                                           const RVector& mu);

struct FixedMarginResult {
  MarginStatus status = MarginStatus::kIndeterminate;
  double alpha = 0.0;        // max_q p_q / P_q of the returned design
  double alpha_lower = 0.0;  // dual bound for this association
  DownlinkDesign design;
  RVector mu;
  RVector lambda;
  std::string detail;
};

// Minimum margin for a fixed association.
FixedMarginResult SolveMarginFixed(const ProblemInstance& instance,
                                   const std::vector<int>& association,
                                   const MarginOptions& options = {});

struct MarginSolution {
  MarginStatus status = MarginStatus::kIndeterminate;
  double alpha_lower = 0.0;
  double alpha_upper = 0.0;
  std::vector<int> association;  // q_i^+
  DownlinkDesign design;         // the alpha_upper design
  RVector mu;
  RVector lambda;
  std::vector<std::vector<int>> minimizing_sets;
  // Every Q-hat_i is a singleton and the two bounds agree to
  // 1e-6 (1 + alpha_lower).
  bool tight = false;
  int outer_iterations = 0;
  std::string detail;
};

MarginSolution SolveDpsMargin(const ProblemInstance& instance,
                              const MarginOptions& options = {});

}  // namespace dpscomp

#endif  // DPSCOMP_MARGIN_H_
