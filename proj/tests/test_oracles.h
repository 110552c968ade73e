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

// Test-side reference computations. Nothing here calls into the solver's
// linear algebra: matrices are plain nested std::vector values and every
// product, inverse and determinant is an explicit loop.

#ifndef DPSCOMP_TESTS_TEST_ORACLES_H_
#define DPSCOMP_TESTS_TEST_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dpscomp/config.h"
#include "dpscomp/scenario.h"

namespace dpscomp::oracle_test {

using Cx = std::complex<double>;
using CxVec = std::vector<Cx>;
using CxMat = std::vector<CxVec>;
using RealMat = std::vector<std::vector<double>>;

inline CxVec ToStd(const CVector& v) {
  CxVec out(v.size());
  for (int m = 0; m < v.size(); ++m) out[m] = v(m);
  return out;
}

// a^H b
inline Cx Inner(const CxVec& a, const CxVec& b) {
  Cx acc(0.0, 0.0);
  for (size_t m = 0; m < a.size(); ++m) acc += std::conj(a[m]) * b[m];
  return acc;
}

inline double Norm2(const CxVec& a) { return std::real(Inner(a, a)); }

// Sigma_q accumulated term by term.
inline CxMat NaiveCovariance(const ProblemInstance& instance,
                             const std::vector<double>& lambda, double weight,
                             int q) {
  const int m = instance.antennas();
  CxMat sigma(m, CxVec(m, Cx(0.0, 0.0)));
  for (int r = 0; r < m; ++r) sigma[r][r] = weight;
  for (int j = 0; j < instance.num_ms(); ++j) {
    const CxVec h = ToStd(instance.channels.at(j, q));
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < m; ++c) sigma[r][c] += lambda[j] * h[r] * std::conj(h[c]);
    }
  }
  return sigma;
}

// Gauss-Jordan elimination with partial pivoting.
inline CxMat GaussJordanInverse(CxMat a) {
  const int n = static_cast<int>(a.size());
  CxMat inv(n, CxVec(n, Cx(0.0, 0.0)));
  for (int r = 0; r < n; ++r) inv[r][r] = 1.0;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (std::abs(a[pivot][col]) == 0.0) throw std::runtime_error("singular");
    std::swap(a[pivot], a[col]);
    std::swap(inv[pivot], inv[col]);
    const Cx scale = 1.0 / a[col][col];
    for (int c = 0; c < n; ++c) {
      a[col][c] *= scale;
      inv[col][c] *= scale;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const Cx factor = a[r][col];
      for (int c = 0; c < n; ++c) {
        a[r][c] -= factor * a[col][c];
        inv[r][c] -= factor * inv[col][c];
      }
    }
  }
  return inv;
}

// Explicit adjugate formula for a 2x2 complex matrix.
inline CxMat CofactorInverse2(const CxMat& a) {
  const Cx det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
  return {{a[1][1] / det, -a[0][1] / det}, {-a[1][0] / det, a[0][0] / det}};
}

inline CxVec Apply(const CxMat& a, const CxVec& x) {
  CxVec y(a.size(), Cx(0.0, 0.0));
  for (size_t r = 0; r < a.size(); ++r) {
    for (size_t c = 0; c < x.size(); ++c) y[r] += a[r][c] * x[c];
  }
  return y;
}

// (gamma/(1+gamma)) / (h^H Sigma^-1 h) with the inverse from Gauss-Jordan, or
// from cofactors when M == 2 and `use_cofactors` is set.
inline double NaiveFiq(const ProblemInstance& instance,
                       const std::vector<double>& lambda,
                       const std::vector<double>& weights, int i, int q,
                       bool use_cofactors = false) {
  const CxMat sigma = NaiveCovariance(instance, lambda, weights[q], q);
  const CxMat inv = use_cofactors ? CofactorInverse2(sigma) : GaussJordanInverse(sigma);
  const CxVec h = ToStd(instance.channels.at(i, q));
  const double quad = std::real(Inner(h, Apply(inv, h)));
  const double g = instance.gamma[i];
  return (g / (1.0 + g)) / quad;
}

inline std::vector<double> NaiveMap(const ProblemInstance& instance,
                                    const std::vector<double>& lambda,
                                    const std::vector<double>& weights) {
  std::vector<double> out(instance.num_ms());
  for (int i = 0; i < instance.num_ms(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (int q : instance.clustering.candidates(i)) {
      best = std::min(best, NaiveFiq(instance, lambda, weights, i, q));
    }
    out[i] = best;
  }
  return out;
}

// Real determinant by cofactor expansion along the first row.
inline double CofactorDeterminant(const RealMat& a) {
  const size_t n = a.size();
  if (n == 1) return a[0][0];
  double det = 0.0;
  for (size_t c = 0; c < n; ++c) {
    RealMat minor;
    for (size_t r = 1; r < n; ++r) {
      std::vector<double> row;
      for (size_t k = 0; k < n; ++k) {
        if (k != c) row.push_back(a[r][k]);
      }
      minor.push_back(std::move(row));
    }
    det += ((c % 2 == 0) ? 1.0 : -1.0) * a[0][c] * CofactorDeterminant(minor);
  }
  return det;
}

// x = A^-1 b by Cramer's rule.
inline std::vector<double> CramerSolve(const RealMat& a,
                                       const std::vector<double>& b) {
  const double det = CofactorDeterminant(a);
  std::vector<double> x(a.size());
  for (size_t c = 0; c < a.size(); ++c) {
    RealMat replaced = a;
    for (size_t r = 0; r < a.size(); ++r) replaced[r][c] = b[r];
    x[c] = CofactorDeterminant(replaced) / det;
  }
  return x;
}

// Single-antenna instance with the given per-(MS, BS) complex gains.
inline ProblemInstance ScalarInstance(const std::vector<std::vector<Cx>>& gains,
                                      std::vector<double> gamma,
                                      double noise_power = 0.01) {
  const int k = static_cast<int>(gains.size());
  const int q = static_cast<int>(gains.front().size());
  ProblemInstance instance;
  instance.channels = ChannelSet(k, q, 1, noise_power);
  for (int i = 0; i < k; ++i) {
    for (int b = 0; b < q; ++b) {
      CVector h(1);
      h(0) = gains[i][b];
      instance.channels.at(i, b) = h;
    }
  }
  instance.clustering = Clustering::Universal(q, k);
  instance.gamma = std::move(gamma);
  instance.weights.assign(q, 1.0);
  instance.power_caps.assign(q, 1.0);
  return instance;
}

// Random layout-based instance. Q = 1 uses a single BS at the origin, Q = 2
// the two-cell pair, Q = 3 an equilateral triangle, Q = 7 the seven-cell
// hexagon.
inline ProblemInstance SeededInstance(int num_bs, int num_ms, int antennas,
                                      double gamma_db, uint64_t seed) {
  ScenarioConfig config;
  switch (num_bs) {
    case 1:
      config.bs_positions = {{0.0, 0.0}};
      break;
    case 2:
      config.bs_positions = TwoCellLayout();
      break;
    case 3:
      config.bs_positions = {{0.0, 0.0}, {1.0, 0.0}, {0.5, std::sqrt(3.0) / 2.0}};
      break;
    case 7:
      config.bs_positions = SevenCellLayout();
      break;
    default:
      throw std::invalid_argument("unsupported BS count");
  }
  config.num_bs = num_bs;
  config.num_ms = num_ms;
  config.antennas = antennas;
  config.gamma_db = {gamma_db};
  config.weights.assign(num_bs, 1.0);
  config.power_caps.assign(num_bs, 1.0);
  config.seed = seed;
  return BuildInstance(config, seed);
}

}  // namespace dpscomp::oracle_test

#endif  // DPSCOMP_TESTS_TEST_ORACLES_H_
