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

#ifndef DPSCOMP_REPORT_H_
#define DPSCOMP_REPORT_H_

#include <string>
#include <vector>

#include "dpscomp/duality_core.h"
#include "dpscomp/margin.h"
#include "dpscomp/oracle.h"
#include "dpscomp/sum_power.h"

namespace dpscomp {

// Structured text records, one "key: value" per line. BS numbers are
// one-based.
std::string FormatSolution(const Solution& solution);
std::string FormatMarginSolution(const ProblemInstance& instance,
                                 const MarginSolution& solution);
std::string FormatVerification(const VerificationReport& report);
std::string FormatParetoCsv(const std::vector<ParetoPoint>& points);
// iteration, lambda_inf_norm, residue
std::string FormatTraceCsv(const DualState& state);

}  // namespace dpscomp

#endif  // DPSCOMP_REPORT_H_
