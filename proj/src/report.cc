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

#include "dpscomp/report.h"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace dpscomp {
namespace {

std::string Num(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

template <typename F>
std::string List(int n, F item) {
  std::string out = "[";
  for (int k = 0; k < n; ++k) {
    if (k > 0) out += ", ";
    out += item(k);
  }
  return out + "]";
}

std::string Association(const std::vector<int>& association) {
  return List(static_cast<int>(association.size()),
              [&](int i) { return std::to_string(association[i] + 1); });
}

std::string Dbw(double watts) {
  return watts > 0.0 ? Num(10.0 * std::log10(watts)) : "-inf";
}

}  // namespace

std::string FormatSolution(const Solution& solution) {
  std::ostringstream out;
  out << "status: " << ToString(solution.status) << '\n';
  if (!solution.detail.empty()) out << "detail: " << solution.detail << '\n';
  out << "iterations: " << solution.iterations << '\n';
  if (solution.status == SolveStatus::kOptimal) {
    const RVector& p = solution.per_bs_power;
    out << "association: " << Association(solution.association) << '\n';
    out << "per_bs_power_w: "
        << List(static_cast<int>(p.size()), [&](int q) { return Num(p(q)); })
        << '\n';
    out << "per_bs_power_dbw: "
        << List(static_cast<int>(p.size()), [&](int q) { return Dbw(p(q)); })
        << '\n';
    out << "objective_w: " << Num(solution.objective) << '\n';
    out << "objective_dbw: " << Dbw(solution.objective) << '\n';
  }
  out << "dual_value_w: " << Num(solution.dual_value) << '\n';
  return out.str();
}

std::string FormatMarginSolution(const ProblemInstance& instance,
                                 const MarginSolution& solution) {
  std::ostringstream out;
  out << "status: " << ToString(solution.status) << '\n';
  if (!solution.detail.empty()) out << "detail: " << solution.detail << '\n';
  if (solution.status != MarginStatus::kSolved) return out.str();
  out << "alpha_lower: " << Num(solution.alpha_lower) << '\n';
  out << "alpha_lower_db: " << Dbw(solution.alpha_lower) << '\n';
  out << "alpha_upper: " << Num(solution.alpha_upper) << '\n';
  out << "alpha_upper_db: " << Dbw(solution.alpha_upper) << '\n';
  out << "tight: " << (solution.tight ? "true" : "false") << '\n';
  out << "association: " << Association(solution.association) << '\n';
  const RVector& p = solution.design.per_bs_power;
  out << "per_bs_power_w: "
      << List(static_cast<int>(p.size()), [&](int q) { return Num(p(q)); })
      << '\n';
  out << "utilization: "
      << List(static_cast<int>(p.size()),
              [&](int q) { return Num(p(q) / instance.power_caps[q]); })
      << '\n';
  out << "mu: "
      << List(static_cast<int>(solution.mu.size()),
              [&](int q) { return Num(solution.mu(q)); })
      << '\n';
  out << "outer_iterations: " << solution.outer_iterations << '\n';
  return out.str();
}

std::string FormatVerification(const VerificationReport& report) {
  std::ostringstream out;
  for (const auto& c : report.checks) {
    out << c.name << ' ' << (c.passed ? "pass" : "FAIL") << " measured="
        << Num(c.measured) << " tolerance=" << Num(c.tolerance) << '\n';
  }
  return out.str();
}

std::string FormatParetoCsv(const std::vector<ParetoPoint>& points) {
  std::ostringstream out;
  out << "w1,w2,status,power_bs1_w,power_bs2_w,association\n";
  for (const auto& pt : points) {
    const bool ok = pt.solution.status == SolveStatus::kOptimal;
    out << Num(pt.w1) << ',' << Num(pt.w2) << ','
        << ToString(pt.solution.status) << ','
        << (ok ? Num(pt.solution.per_bs_power(0)) : "nan") << ','
        << (ok ? Num(pt.solution.per_bs_power(1)) : "nan") << ',';
    if (ok) {
      for (size_t i = 0; i < pt.solution.association.size(); ++i) {
        out << (i ? " " : "") << pt.solution.association[i] + 1;
      }
    }
    out << '\n';
  }
  return out.str();
}

std::string FormatTraceCsv(const DualState& state) {
  std::ostringstream out;
  out << "iteration,lambda_inf_norm,residue\n";
  for (size_t n = 0; n < state.residue_trace.size(); ++n) {
    out << n + 1 << ',' << Num(state.lambda_norm_trace[n]) << ','
        << Num(state.residue_trace[n]) << '\n';
  }
  return out.str();
}

}  // namespace dpscomp
