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

#ifndef DPSCOMP_DUALITY_CORE_H_
#define DPSCOMP_DUALITY_CORE_H_

#include <optional>
#include <vector>

#include "dpscomp/linalg.h"
#include "dpscomp/scenario.h"

namespace dpscomp {

struct FixedPointOptions {
  // Relative infinity-norm stopping rule:
  // ||lambda(n+1) - lambda(n)|| <= tolerance * (1 + ||lambda(n)||).
  double tolerance = 1e-9;
  int max_iter = 10000;
  // Defaults to 1e12 * max(gamma) / sigma^2.
  std::optional<double> divergence_cap;
  // Defaults to all zeros.
  std::optional<RVector> initial_lambda;
  bool record_trace = false;
};

enum class FixedPointStatus { kConverged, kInfeasible, kIterationLimit };

const char* ToString(FixedPointStatus status);

struct DualState {
  RVector lambda;
  RVector mu;  // per-BS noise weights the iteration ran with
  int iterations = 0;
  std::vector<double> residue_trace;      // ||lambda(n) - lambda(n-1)||_inf
  std::vector<double> lambda_norm_trace;  // ||lambda(n)||_inf
};

struct FixedPointOutcome {
  FixedPointStatus status = FixedPointStatus::kIterationLimit;
  DualState state;
  double dual_value = 0.0;  // sigma^2 * sum(lambda)
  // Why the run was declared infeasible; empty otherwise.
  std::string divergence_witness;
};

// Sigma_q = sum_j lambda_j h_jq h_jq^H + weight_q I, over every MS j.
CMatrix UplinkCovariance(const ProblemInstance& instance, const RVector& lambda,
                         double weight, int q);

// (gamma_i / (1 + gamma_i)) / (h_iq^H Sigma_q^-1 h_iq).
double Fiq(const ProblemInstance& instance, const RVector& lambda,
           const RVector& weights, int i, int q);

// T(lambda)_i = min over q in Q_i of f_iq(lambda).
RVector IterationMap(const ProblemInstance& instance, const RVector& lambda,
                     const RVector& weights);

// Q-hat_i: every q in Q_i with f_iq(lambda) <= (1 + rel_tol) lambda_i, in
// increasing BS order.
std::vector<std::vector<int>> MinimizingStations(const ProblemInstance& instance,
                                                 const RVector& lambda,
                                                 const RVector& weights,
                                                 double rel_tol = 1e-6);

// Per MS, the lowest-index q in Q_i whose f_iq(lambda) is within tie_rel
// (relative) of the minimum.
std::vector<int> ArgminAssociation(const ProblemInstance& instance,
                                   const RVector& lambda,
                                   const RVector& weights,
                                   double tie_rel = 1e-12);

// Runs lambda <- T(lambda) from lambda = 0. Infeasibility is declared when
// lambda passes the divergence cap or when a noise-free growth certificate
// shows that no finite fixed point exists.
FixedPointOutcome FixedPointSolve(const ProblemInstance& instance,
                                  const RVector& weights,
                                  const FixedPointOptions& options = {});

// Unit-norm uplink MMSE directions normalize(Sigma_q^-1 h_iq), indexed
// i * Q + q. Entries for q outside Q_i are empty.
struct ReceiverSet {
  int num_bs = 0;
  std::vector<CVector> w_hat;
  const CVector& at(int i, int q) const { return w_hat[i * num_bs + q]; }
};

ReceiverSet MmseReceivers(const ProblemInstance& instance,
                          const RVector& lambda, const RVector& weights);

// G_ii = |h_{i,q_i}^H w_i|^2 / gamma_i and G_ij = -|h_{i,q_j}^H w_j|^2 where
// w_j = receivers.at(j, q_j). Throws DegenerateAssociationError on a zero
// diagonal entry.
RMatrix ScalingMatrixG(const ProblemInstance& instance,
                       const std::vector<int>& association,
                       const ReceiverSet& receivers);

// delta = G^-1 1 sigma^2. Throws InfeasibleScalingError when G is singular or
// some delta_i <= 0.
RVector SolveDownlinkScaling(const RMatrix& g, double noise_power);

// Per-user power updates delta_i <- (gamma_i / SINR_i(delta)) delta_i from
// delta = sigma^2. Throws InfeasibleScalingError on divergence or when the
// iteration limit is reached.
RVector FoschiniMiljanicScaling(const ProblemInstance& instance,
                                const std::vector<int>& association,
                                const ReceiverSet& directions,
                                double tolerance = 1e-13,
                                int max_iter = 1000000);

// Beamformer w_iq for every MS-BS pair, indexed i * Q + q. An empty vector
// stands for a zero beamformer.
struct BeamformerSet {
  int num_bs = 0;
  int antennas = 0;
  std::vector<CVector> w;

  BeamformerSet() = default;
  BeamformerSet(int num_ms, int num_bs, int antennas)
      : num_bs(num_bs), antennas(antennas),
        w(static_cast<size_t>(num_ms) * num_bs) {}
  const CVector& at(int i, int q) const { return w[i * num_bs + q]; }
  CVector& at(int i, int q) { return w[i * num_bs + q]; }
};

// Useful signal sum_{q in Q_i} |h_iq^H w_iq|^2 over interference from every
// other MS's beamformers plus sigma^2.
RVector DownlinkSinr(const ProblemInstance& instance,
                     const BeamformerSet& beamformers);

struct DownlinkDesign {
  std::vector<int> association;
  BeamformerSet beamformers;
  RVector delta;          // per-MS transmit power
  RVector per_bs_power;   // W
};

// MMSE directions at lambda, G-solve, and w_i = sqrt(delta_i) w-hat_i with the
// phase chosen so that h_{i,q_i}^H w_i is real and nonnegative.
DownlinkDesign RecoverDownlink(const ProblemInstance& instance,
                               const RVector& lambda, const RVector& weights,
                               const std::vector<int>& association);

// Builds beamformers from given unit directions and powers.
BeamformerSet BuildBeamformers(const ProblemInstance& instance,
                               const std::vector<int>& association,
                               const ReceiverSet& directions,
                               const RVector& delta);

RVector PerBsPower(const BeamformerSet& beamformers, int num_ms);

}  // namespace dpscomp

#endif  // DPSCOMP_DUALITY_CORE_H_
