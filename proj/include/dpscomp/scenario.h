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

#ifndef DPSCOMP_SCENARIO_H_
#define DPSCOMP_SCENARIO_H_

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "dpscomp/linalg.h"

namespace dpscomp {

// All indices (MS and BS) are zero-based inside the library. Text outputs and
// config files use one-based BS numbers.

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

double Distance(const Point2& a, const Point2& b);

// Node placement. Lengths are in units of the nearest inter-BS distance.
struct Geometry {
  std::vector<Point2> bs_positions;
  std::vector<Point2> ms_positions;

  int num_bs() const { return static_cast<int>(bs_positions.size()); }
  int num_ms() const { return static_cast<int>(ms_positions.size()); }
  double distance(int ms, int bs) const {
    return Distance(ms_positions[ms], bs_positions[bs]);
  }
  // Throws ConfigError on empty node sets or non-finite coordinates.
  void Validate() const;
};

// BS 0 at the origin, BS 1 at (1, 0).
std::vector<Point2> TwoCellLayout();
// BS 0 at the origin and BSs 1..6 on the unit hexagon, counter-clockwise
// from angle 0, so that neighbouring BSs are exactly distance 1 apart.
std::vector<Point2> SevenCellLayout();

// Minimum distance kept between any MS and any BS during random placement.
inline constexpr double kExclusionRadius = 0.01;

// Draws `num_ms` mobiles uniformly inside the convex hull of `bs_positions`
// (a segment for two BSs, the unit disk for a single BS), rejecting draws
// closer than kExclusionRadius to any BS.
std::vector<Point2> PlaceMobiles(const std::vector<Point2>& bs_positions,
                                 int num_ms, uint64_t seed);

// Candidate BS sets Q_i and the inverse serving sets K_q.
class Clustering {
 public:
  Clustering() = default;
  // Each candidate set must be nonempty with indices in [0, num_bs). Sets are
  // stored sorted and deduplicated. Throws ConfigError otherwise.
  Clustering(int num_bs, std::vector<std::vector<int>> candidate_sets);

  static Clustering Universal(int num_bs, int num_ms);

  int num_bs() const { return num_bs_; }
  int num_ms() const { return static_cast<int>(candidate_sets_.size()); }
  const std::vector<int>& candidates(int ms) const {
    return candidate_sets_[ms];
  }
  const std::vector<int>& served(int bs) const { return serving_sets_[bs]; }
  const std::vector<std::vector<int>>& candidate_sets() const {
    return candidate_sets_;
  }
  const std::vector<std::vector<int>>& serving_sets() const {
    return serving_sets_;
  }
  bool IsCandidate(int ms, int bs) const;

 private:
  int num_bs_ = 0;
  std::vector<std::vector<int>> candidate_sets_;
  std::vector<std::vector<int>> serving_sets_;
};

struct ClusterMode {
  enum class Kind { kUniversal, kGrouped };
  Kind kind = Kind::kUniversal;
  // BS index lists, used when kind == kGrouped.
  std::vector<std::vector<int>> groups;

  static ClusterMode Universal() { return {}; }
  static ClusterMode Grouped(std::vector<std::vector<int>> groups) {
    return {Kind::kGrouped, std::move(groups)};
  }
};

// The three 3-cell clusters of the seven-cell layout: {0,1,2}, {0,3,4},
// {0,5,6}.
ClusterMode SevenCellThreeClusters();

// Universal: every MS may use every BS. Grouped: each MS takes the BS set of
// the group whose centroid is nearest, ties to the lowest group index.
Clustering BuildClusters(const Geometry& geometry, const ClusterMode& mode);

// Channel vectors h_iq for every MS-BS pair (not only candidates: every BS
// interferes with every MS).
class ChannelSet {
 public:
  ChannelSet() = default;
  ChannelSet(int num_ms, int num_bs, int antennas, double noise_power);

  int num_ms() const { return num_ms_; }
  int num_bs() const { return num_bs_; }
  int antennas() const { return antennas_; }
  double noise_power() const { return noise_power_; }
  void set_noise_power(double value) { noise_power_ = value; }

  const CVector& at(int ms, int bs) const { return h_[ms * num_bs_ + bs]; }
  CVector& at(int ms, int bs) { return h_[ms * num_bs_ + bs]; }

  bool operator==(const ChannelSet& other) const;

 private:
  int num_ms_ = 0;
  int num_bs_ = 0;
  int antennas_ = 0;
  double noise_power_ = 0.0;
  std::vector<CVector> h_;
};

// Rayleigh fading with power-law path loss: each entry of h_iq is CN(0,
// d_iq^-pathloss_exponent). A pure function of its arguments.
// Throws DegenerateGeometryError when some d_iq == 0 and ConfigError on bad
// parameters.
ChannelSet GenerateChannels(const Geometry& geometry, int antennas,
                            double pathloss_exponent, double noise_power,
                            uint64_t seed);

struct ProblemInstance {
  ChannelSet channels;
  Clustering clustering;
  std::vector<double> gamma;       // linear SINR targets, per MS
  std::vector<double> weights;     // sum-power weights w_q, per BS
  std::vector<double> power_caps;  // P_q in W, per BS
  std::optional<Geometry> geometry;

  int num_ms() const { return channels.num_ms(); }
  int num_bs() const { return channels.num_bs(); }
  int antennas() const { return channels.antennas(); }
  double noise_power() const { return channels.noise_power(); }

  // Throws ConfigError when sizes disagree or any gamma/weight/cap <= 0.
  void Validate() const;
};

// Copy of `instance` with every candidate set replaced by {association[i]}.
ProblemInstance RestrictToAssociation(const ProblemInstance& instance,
                                      const std::vector<int>& association);

enum class AssociationScheme { kChannelBased, kLocationBased };

// Parses "channel_based" / "location_based" (and the cscb_ prefixed forms).
AssociationScheme ParseAssociationScheme(std::string_view name);

// channel_based: argmax_{q in Q_i} ||h_iq||^2. location_based: argmin_{q in
// Q_i} d_iq (needs instance.geometry). Ties go to the lowest BS index.
std::vector<int> FixedAssociation(const ProblemInstance& instance,
                                  AssociationScheme scheme);

double LinearFromDb(double db);
double DbFromLinear(double linear);

}  // namespace dpscomp

#endif  // DPSCOMP_SCENARIO_H_
