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

#include "dpscomp/duality_core.h"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "dpscomp/errors.h"

namespace dpscomp {
namespace {

// The growth certificate is tried every this many iterations once the
// iteration has had time to settle.
constexpr int kCertificatePeriod = 10;
constexpr int kCertificateStart = 20;
// Relative slack in the certificate comparison T0(v) >= v.
constexpr double kCertificateSlack = 1e-9;
// Every this many iterations the certificate also power-iterates T0.
constexpr int kDeepCertificatePeriod = 1000;
constexpr int kPowerSteps = 200;
// Eigenvalues below this fraction of the largest are treated as zero.
constexpr double kNullEigenvalue = 1e-10;

double Gain(double gamma) { return gamma / (1.0 + gamma); }

// Returns true when `q` serves at least one MS.
bool IsActive(const ProblemInstance& instance, int q) {
  return !instance.clustering.served(q).empty();
}

// Lower bound on the noise-free map T0(v)_i restricted to the MSs in `v`'s
// support. Directions outside the range of Sigma0_q count as free, which gives
// f = 0 and keeps the bound conservative.
RVector NoiseFreeMapLowerBound(const ProblemInstance& instance,
                               const RVector& v) {
  const int num_ms = instance.num_ms();
  RVector out = RVector::Constant(num_ms,
                                  std::numeric_limits<double>::infinity());
  for (int q = 0; q < instance.num_bs(); ++q) {
    if (!IsActive(instance, q)) continue;
    const CMatrix sigma = UplinkCovariance(instance, v, 0.0, q);
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(sigma);
    const RVector& values = eig.eigenvalues();
    const double largest = values.cwiseAbs().maxCoeff();
    const double floor = kNullEigenvalue * largest;
    for (int i : instance.clustering.served(q)) {
      const CVector proj = eig.eigenvectors().adjoint() * instance.channels.at(i, q);
      double quad = 0.0;
      bool leaks = false;
      const double h_norm2 = instance.channels.at(i, q).squaredNorm();
      for (int k = 0; k < values.size(); ++k) {
        const double c = std::norm(proj(k));
        if (values(k) <= floor) {
          if (c > 1e-20 * h_norm2) leaks = true;
        } else {
          quad += c / values(k);
        }
      }
      const double f = leaks || largest == 0.0
                           ? 0.0
                           : Gain(instance.gamma[i]) / quad;
      out(i) = std::min(out(i), f);
    }
  }
  return out;
}

// Searches for a nonzero v <= lambda with T0(v) >= v, which rules out any
// finite fixed point. Returns a description of the witness when found.
std::optional<std::string> GrowthCertificate(const ProblemInstance& instance,
                                             const RVector& lambda) {
  RVector v = lambda;
  while (true) {
    int support = 0;
    for (int i = 0; i < v.size(); ++i) support += v(i) > 0.0;
    if (support == 0) return std::nullopt;
    const RVector t0 = NoiseFreeMapLowerBound(instance, v);
    bool shrunk = false;
    for (int i = 0; i < v.size(); ++i) {
      if (v(i) > 0.0 && t0(i) < (1.0 - kCertificateSlack) * v(i)) {
        v(i) = 0.0;
        shrunk = true;
      }
    }
    if (!shrunk) {
      std::ostringstream os;
      os << "noise-free map does not contract on MS set {";
      bool first = true;
      for (int i = 0; i < v.size(); ++i) {
        if (v(i) > 0.0) {
          os << (first ? "" : ",") << i + 1;
          first = false;
        }
      }
      os << "}";
      return os.str();
    }
  }
}

// The MSs pinned to a BS must keep sum gamma/(1+gamma) below its antenna
// count: summing the SINR equalities through the trace of
// Sigma_q^-1 (Sigma_q - w_q I) gives M - w_q tr(Sigma_q^-1) < M.
std::optional<std::string> DimensionCertificate(const ProblemInstance& instance,
                                                const RVector& weights) {
  const int antennas = instance.channels.antennas();
  for (int q = 0; q < instance.num_bs(); ++q) {
    if (!(weights(q) > 0.0)) continue;
    double load = 0.0;
    for (int i : instance.clustering.served(q)) {
      if (instance.clustering.candidates(i).size() == 1) load += Gain(instance.gamma[i]);
    }
    if (load >= antennas * (1.0 - 1e-12)) {
      std::ostringstream os;
      os << "BS " << q + 1 << " carries sum gamma/(1+gamma) = " << load
         << " on " << antennas << " antennas";
      return os.str();
    }
  }
  return std::nullopt;
}

// Power-iterates the noise-free map from `lambda` and tries the certificate
// along the way. Catches the boundary case where T0 has a fixed direction and
// lambda only grows linearly.
std::optional<std::string> DeepGrowthCertificate(const ProblemInstance& instance,
                                                 const RVector& lambda) {
  RVector v = lambda;
  for (int k = 0; k < kPowerSteps; ++k) {
    const double norm = v.maxCoeff();
    if (!(norm > 0.0) || !std::isfinite(norm)) return std::nullopt;
    v /= norm;
    if (auto witness = GrowthCertificate(instance, v)) return witness;
    RVector next = NoiseFreeMapLowerBound(instance, v);
    for (int i = 0; i < next.size(); ++i) {
      if (v(i) <= 0.0 || !std::isfinite(next(i))) next(i) = 0.0;
    }
    v = next;
  }
  return std::nullopt;
}

}  // namespace

const char* ToString(FixedPointStatus status) {
  switch (status) {
    case FixedPointStatus::kConverged:
      return "converged";
    case FixedPointStatus::kInfeasible:
      return "infeasible";
    case FixedPointStatus::kIterationLimit:
      return "iteration_limit";
  }
  return "unknown";
}

CMatrix UplinkCovariance(const ProblemInstance& instance, const RVector& lambda,
                         double weight, int q) {
  const int m = instance.antennas();
  CMatrix sigma = CMatrix::Identity(m, m) * weight;
  for (int j = 0; j < instance.num_ms(); ++j) {
    if (lambda(j) == 0.0) continue;
    const CVector& h = instance.channels.at(j, q);
    sigma.noalias() += lambda(j) * h * h.adjoint();
  }
  return sigma;
}

double Fiq(const ProblemInstance& instance, const RVector& lambda,
           const RVector& weights, int i, int q) {
  const CMatrix sigma = UplinkCovariance(instance, lambda, weights(q), q);
  const CVector& h = instance.channels.at(i, q);
  const double quad = h.dot(sigma.llt().solve(h)).real();
  return Gain(instance.gamma[i]) / quad;
}

namespace {

// f_iq for every candidate pair, indexed i * Q + q (infinity elsewhere).
std::vector<double> AllFiq(const ProblemInstance& instance,
                           const RVector& lambda, const RVector& weights) {
  const int num_bs = instance.num_bs();
  std::vector<double> f(static_cast<size_t>(instance.num_ms()) * num_bs,
                        std::numeric_limits<double>::infinity());
  for (int q = 0; q < num_bs; ++q) {
    if (!IsActive(instance, q)) continue;
    const Eigen::LLT<CMatrix> llt(
        UplinkCovariance(instance, lambda, weights(q), q));
    for (int i : instance.clustering.served(q)) {
      const CVector& h = instance.channels.at(i, q);
      const double quad = h.dot(llt.solve(h)).real();
      f[i * num_bs + q] = Gain(instance.gamma[i]) / quad;
    }
  }
  return f;
}

}  // namespace

RVector IterationMap(const ProblemInstance& instance, const RVector& lambda,
                     const RVector& weights) {
  const int num_bs = instance.num_bs();
  const std::vector<double> f = AllFiq(instance, lambda, weights);
  RVector out(instance.num_ms());
  for (int i = 0; i < instance.num_ms(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (int q : instance.clustering.candidates(i)) {
      best = std::min(best, f[i * num_bs + q]);
    }
    out(i) = best;
  }
  return out;
}

std::vector<std::vector<int>> MinimizingStations(const ProblemInstance& instance,
                                                 const RVector& lambda,
                                                 const RVector& weights,
                                                 double rel_tol) {
  const int num_bs = instance.num_bs();
  const std::vector<double> f = AllFiq(instance, lambda, weights);
  std::vector<std::vector<int>> sets(instance.num_ms());
  for (int i = 0; i < instance.num_ms(); ++i) {
    for (int q : instance.clustering.candidates(i)) {
      if (f[i * num_bs + q] <= (1.0 + rel_tol) * lambda(i)) sets[i].push_back(q);
    }
  }
  return sets;
}

std::vector<int> ArgminAssociation(const ProblemInstance& instance,
                                   const RVector& lambda,
                                   const RVector& weights, double tie_rel) {
  const int num_bs = instance.num_bs();
  const std::vector<double> f = AllFiq(instance, lambda, weights);
  std::vector<int> association(instance.num_ms());
  for (int i = 0; i < instance.num_ms(); ++i) {
    const auto& candidates = instance.clustering.candidates(i);
    double best = std::numeric_limits<double>::infinity();
    for (int q : candidates) best = std::min(best, f[i * num_bs + q]);
    for (int q : candidates) {
      if (f[i * num_bs + q] <= best * (1.0 + tie_rel)) {
        association[i] = q;
        break;
      }
    }
  }
  return association;
}

FixedPointOutcome FixedPointSolve(const ProblemInstance& instance,
                                  const RVector& weights,
                                  const FixedPointOptions& options) {
  const int num_ms = instance.num_ms();
  const double max_gamma =
      *std::max_element(instance.gamma.begin(), instance.gamma.end());
  const double cap = options.divergence_cap.value_or(
      1e12 * max_gamma / instance.noise_power());

  FixedPointOutcome outcome;
  DualState& state = outcome.state;
  state.mu = weights;
  state.lambda = options.initial_lambda.value_or(RVector::Zero(num_ms));
  auto finish = [&](FixedPointStatus status) {
    outcome.status = status;
    outcome.dual_value = instance.noise_power() * state.lambda.sum();
    return outcome;
  };

  if (auto witness = DimensionCertificate(instance, weights)) {
    outcome.divergence_witness = *witness;
    return finish(FixedPointStatus::kInfeasible);
  }
  for (int n = 1; n <= options.max_iter; ++n) {
    const RVector next = IterationMap(instance, state.lambda, weights);
    const double residue = (next - state.lambda).cwiseAbs().maxCoeff();
    const double scale = 1.0 + state.lambda.cwiseAbs().maxCoeff();
    state.lambda = next;
    state.iterations = n;
    if (options.record_trace) {
      state.residue_trace.push_back(residue);
      state.lambda_norm_trace.push_back(next.cwiseAbs().maxCoeff());
    }
    if (residue <= options.tolerance * scale) {
      return finish(FixedPointStatus::kConverged);
    }
    const double norm = next.cwiseAbs().maxCoeff();
    if (!std::isfinite(norm) || norm > cap) {
      std::ostringstream os;
      os << "lambda reached " << norm << " above the divergence cap " << cap;
      outcome.divergence_witness = os.str();
      return finish(FixedPointStatus::kInfeasible);
    }
    if (n >= kCertificateStart && n % kCertificatePeriod == 0) {
      if (auto witness = GrowthCertificate(instance, state.lambda)) {
        outcome.divergence_witness = *witness;
        return finish(FixedPointStatus::kInfeasible);
      }
    }
    if (n % kDeepCertificatePeriod == 0) {
      if (auto witness = DeepGrowthCertificate(instance, state.lambda)) {
        outcome.divergence_witness = *witness;
        return finish(FixedPointStatus::kInfeasible);
      }
    }
  }
  return finish(FixedPointStatus::kIterationLimit);
}

ReceiverSet MmseReceivers(const ProblemInstance& instance,
                          const RVector& lambda, const RVector& weights) {
  const int num_bs = instance.num_bs();
  ReceiverSet receivers;
  receivers.num_bs = num_bs;
  receivers.w_hat.resize(static_cast<size_t>(instance.num_ms()) * num_bs);
  for (int q = 0; q < num_bs; ++q) {
    if (!IsActive(instance, q)) continue;
    const Eigen::LLT<CMatrix> llt(
        UplinkCovariance(instance, lambda, weights(q), q));
    for (int i : instance.clustering.served(q)) {
      CVector w = llt.solve(instance.channels.at(i, q));
      const double norm = w.norm();
      if (norm > 0.0) w /= norm;
      receivers.w_hat[i * num_bs + q] = std::move(w);
    }
  }
  return receivers;
}

RMatrix ScalingMatrixG(const ProblemInstance& instance,
                       const std::vector<int>& association,
                       const ReceiverSet& receivers) {
  const int num_ms = instance.num_ms();
  RMatrix g(num_ms, num_ms);
  for (int i = 0; i < num_ms; ++i) {
    for (int j = 0; j < num_ms; ++j) {
      const int q = association[j];
      const double gain =
          GainSquared(instance.channels.at(i, q), receivers.at(j, q));
      g(i, j) = i == j ? gain / instance.gamma[i] : -gain;
    }
    if (!(g(i, i) > 0.0)) {
      throw DegenerateAssociationError(
          "MS " + std::to_string(i + 1) + " has zero gain towards BS " +
          std::to_string(association[i] + 1));
    }
  }
  return g;
}

RVector SolveDownlinkScaling(const RMatrix& g, double noise_power) {
  const Eigen::FullPivLU<RMatrix> lu(g);
  if (!lu.isInvertible()) {
    throw InfeasibleScalingError("scaling matrix G is singular");
  }
  const RVector delta =
      lu.solve(RVector::Constant(g.rows(), noise_power));
  for (int i = 0; i < delta.size(); ++i) {
    if (!(delta(i) > 0.0)) {
      throw InfeasibleScalingError("scaling solve gave nonpositive power for MS " +
                                   std::to_string(i + 1));
    }
  }
  return delta;
}

RVector FoschiniMiljanicScaling(const ProblemInstance& instance,
                                const std::vector<int>& association,
                                const ReceiverSet& directions,
                                double tolerance, int max_iter) {
  const int num_ms = instance.num_ms();
  const double sigma2 = instance.noise_power();
  RMatrix gain(num_ms, num_ms);
  for (int i = 0; i < num_ms; ++i) {
    for (int j = 0; j < num_ms; ++j) {
      const int q = association[j];
      gain(i, j) = GainSquared(instance.channels.at(i, q), directions.at(j, q));
    }
    if (!(gain(i, i) > 0.0)) {
      throw DegenerateAssociationError("MS " + std::to_string(i + 1) +
                                       " has zero direct gain");
    }
  }
  RVector delta = RVector::Constant(num_ms, sigma2);
  const double cap = 1e30 * sigma2;
  for (int n = 0; n < max_iter; ++n) {
    RVector next(num_ms);
    for (int i = 0; i < num_ms; ++i) {
      double interference = sigma2;
      for (int j = 0; j < num_ms; ++j) {
        if (j != i) interference += gain(i, j) * delta(j);
      }
      // gamma_i / SINR_i * delta_i with SINR_i = g_ii delta_i / interference.
      next(i) = instance.gamma[i] * interference / gain(i, i);
    }
    const double change =
        ((next - delta).array().abs() / next.array()).maxCoeff();
    delta = next;
    if (!std::isfinite(delta.maxCoeff()) || delta.maxCoeff() > cap) {
      throw InfeasibleScalingError("per-user power updates diverge");
    }
    if (change <= tolerance) return delta;
  }
  throw InfeasibleScalingError("per-user power updates did not settle");
}

BeamformerSet BuildBeamformers(const ProblemInstance& instance,
                               const std::vector<int>& association,
                               const ReceiverSet& directions,
                               const RVector& delta) {
  BeamformerSet beams(instance.num_ms(), instance.num_bs(),
                      instance.antennas());
  for (int i = 0; i < instance.num_ms(); ++i) {
    const int q = association[i];
    const CVector& dir = directions.at(i, q);
    const Complex response = instance.channels.at(i, q).dot(dir);
    const Complex phase =
        std::abs(response) > 0.0 ? std::conj(response) / std::abs(response)
                                 : Complex(1.0, 0.0);
    beams.at(i, q) = std::sqrt(delta(i)) * phase * dir;
  }
  return beams;
}

RVector PerBsPower(const BeamformerSet& beamformers, int num_ms) {
  RVector power = RVector::Zero(beamformers.num_bs);
  for (int i = 0; i < num_ms; ++i) {
    for (int q = 0; q < beamformers.num_bs; ++q) {
      const CVector& w = beamformers.at(i, q);
      if (w.size() > 0) power(q) += w.squaredNorm();
    }
  }
  return power;
}

RVector DownlinkSinr(const ProblemInstance& instance,
                     const BeamformerSet& beamformers) {
  const int num_ms = instance.num_ms();
  const int num_bs = instance.num_bs();
  RVector sinr(num_ms);
  for (int i = 0; i < num_ms; ++i) {
    double signal = 0.0;
    double interference = instance.noise_power();
    for (int j = 0; j < num_ms; ++j) {
      for (int r = 0; r < num_bs; ++r) {
        const CVector& w = beamformers.at(j, r);
        if (w.size() == 0) continue;
        const double g = GainSquared(instance.channels.at(i, r), w);
        if (j != i) {
          interference += g;
        } else if (instance.clustering.IsCandidate(i, r)) {
          signal += g;
        }
      }
    }
    sinr(i) = signal / interference;
  }
  return sinr;
}

DownlinkDesign RecoverDownlink(const ProblemInstance& instance,
                               const RVector& lambda, const RVector& weights,
                               const std::vector<int>& association) {
  DownlinkDesign design;
  design.association = association;
  const ReceiverSet receivers = MmseReceivers(instance, lambda, weights);
  const RMatrix g = ScalingMatrixG(instance, association, receivers);
  design.delta = SolveDownlinkScaling(g, instance.noise_power());
  design.beamformers =
      BuildBeamformers(instance, association, receivers, design.delta);
  design.per_bs_power = PerBsPower(design.beamformers, instance.num_ms());
  return design;
}

}  // namespace dpscomp
