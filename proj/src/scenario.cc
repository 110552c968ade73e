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

#include "dpscomp/scenario.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "dpscomp/errors.h"
#include "dpscomp/rng.h"

namespace dpscomp {
namespace {

constexpr uint64_t kPlacementStream = 1;
constexpr uint64_t kChannelStream = 2;

double Cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Andrew's monotone chain; returns the hull counter-clockwise without
// repeating the first point. Collinear points are dropped.
std::vector<Point2> ConvexHull(std::vector<Point2> points) {
  std::sort(points.begin(), points.end(), [](const Point2& a, const Point2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  points.erase(std::unique(points.begin(), points.end(),
                           [](const Point2& a, const Point2& b) {
                             return a.x == b.x && a.y == b.y;
                           }),
               points.end());
  if (points.size() < 3) return points;
  std::vector<Point2> hull(2 * points.size());
  size_t k = 0;
  for (const Point2& p : points) {
    while (k >= 2 && Cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (size_t i = points.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && Cross(hull[k - 2], hull[k - 1], points[i]) <= 0) --k;
    hull[k++] = points[i];
  }
  hull.resize(k - 1);
  return hull;
}

// Sampler for a point uniformly distributed over the hull of the BSs.
class HullSampler {
 public:
  explicit HullSampler(const std::vector<Point2>& bs) {
    hull_ = ConvexHull(bs);
    if (hull_.size() >= 3) {
      double total = 0.0;
      for (size_t t = 1; t + 1 < hull_.size(); ++t) {
        total += 0.5 * Cross(hull_[0], hull_[t], hull_[t + 1]);
        cumulative_area_.push_back(total);
      }
      if (total <= 1e-12) cumulative_area_.clear();
    }
    if (cumulative_area_.empty() && hull_.size() >= 2) {
      // Collinear BSs: the hull is the segment between the extreme points.
      segment_ = {hull_.front(), hull_.back()};
    }
  }

  Point2 Sample(CounterRng& rng) const {
    if (!cumulative_area_.empty()) {
      const double target = rng.Uniform() * cumulative_area_.back();
      const size_t t =
          std::lower_bound(cumulative_area_.begin(), cumulative_area_.end(),
                           target) -
          cumulative_area_.begin();
      const Point2& a = hull_[0];
      const Point2& b = hull_[t + 1];
      const Point2& c = hull_[t + 2];
      const double r1 = std::sqrt(rng.Uniform());
      const double r2 = rng.Uniform();
      return {(1 - r1) * a.x + r1 * (1 - r2) * b.x + r1 * r2 * c.x,
              (1 - r1) * a.y + r1 * (1 - r2) * b.y + r1 * r2 * c.y};
    }
    if (segment_) {
      const double u = rng.Uniform();
      return {segment_->first.x + u * (segment_->second.x - segment_->first.x),
              segment_->first.y + u * (segment_->second.y - segment_->first.y)};
    }
    // Single BS: unit disk around it.
    const double radius = std::sqrt(rng.Uniform());
    const double angle = 2.0 * std::numbers::pi * rng.Uniform();
    return {hull_[0].x + radius * std::cos(angle),
            hull_[0].y + radius * std::sin(angle)};
  }

 private:
  std::vector<Point2> hull_;
  std::vector<double> cumulative_area_;
  std::optional<std::pair<Point2, Point2>> segment_;
};

}  // namespace

double Distance(const Point2& a, const Point2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

void Geometry::Validate() const {
  if (bs_positions.empty()) throw ConfigError("geometry has no base stations");
  if (ms_positions.empty()) throw ConfigError("geometry has no mobiles");
  auto finite = [](const Point2& p) {
    return std::isfinite(p.x) && std::isfinite(p.y);
  };
  if (!std::all_of(bs_positions.begin(), bs_positions.end(), finite) ||
      !std::all_of(ms_positions.begin(), ms_positions.end(), finite)) {
    throw ConfigError("geometry has non-finite coordinates");
  }
}

std::vector<Point2> TwoCellLayout() { return {{0.0, 0.0}, {1.0, 0.0}}; }

std::vector<Point2> SevenCellLayout() {
  std::vector<Point2> layout = {{0.0, 0.0}};
  for (int k = 0; k < 6; ++k) {
    const double angle = k * std::numbers::pi / 3.0;
    layout.push_back({std::cos(angle), std::sin(angle)});
  }
  return layout;
}

std::vector<Point2> PlaceMobiles(const std::vector<Point2>& bs_positions,
                                 int num_ms, uint64_t seed) {
  if (bs_positions.empty()) throw ConfigError("no base stations to place around");
  if (num_ms < 1) throw ConfigError("K must be at least 1");
  const HullSampler sampler(bs_positions);
  CounterRng rng(seed, kPlacementStream);
  std::vector<Point2> mobiles;
  mobiles.reserve(num_ms);
  while (static_cast<int>(mobiles.size()) < num_ms) {
    const Point2 p = sampler.Sample(rng);
    const bool clear = std::all_of(
        bs_positions.begin(), bs_positions.end(),
        [&](const Point2& bs) { return Distance(p, bs) >= kExclusionRadius; });
    if (clear) mobiles.push_back(p);
  }
  return mobiles;
}

Clustering::Clustering(int num_bs, std::vector<std::vector<int>> candidate_sets)
    : num_bs_(num_bs), candidate_sets_(std::move(candidate_sets)) {
  if (num_bs_ < 1) throw ConfigError("Q must be at least 1");
  if (candidate_sets_.empty()) throw ConfigError("K must be at least 1");
  serving_sets_.assign(num_bs_, {});
  for (size_t i = 0; i < candidate_sets_.size(); ++i) {
    auto& set = candidate_sets_[i];
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    if (set.empty()) {
      throw ConfigError("MS " + std::to_string(i + 1) +
                        " has an empty candidate set");
    }
    if (set.front() < 0 || set.back() >= num_bs_) {
      throw ConfigError("MS " + std::to_string(i + 1) +
                        " has a candidate BS outside 1.." +
                        std::to_string(num_bs_));
    }
    for (int q : set) serving_sets_[q].push_back(static_cast<int>(i));
  }
}

Clustering Clustering::Universal(int num_bs, int num_ms) {
  std::vector<int> all(num_bs);
  std::iota(all.begin(), all.end(), 0);
  return Clustering(num_bs, std::vector<std::vector<int>>(num_ms, all));
}

bool Clustering::IsCandidate(int ms, int bs) const {
  const auto& set = candidate_sets_[ms];
  return std::binary_search(set.begin(), set.end(), bs);
}

ClusterMode SevenCellThreeClusters() {
  return ClusterMode::Grouped({{0, 1, 2}, {0, 3, 4}, {0, 5, 6}});
}

Clustering BuildClusters(const Geometry& geometry, const ClusterMode& mode) {
  geometry.Validate();
  const int num_bs = geometry.num_bs();
  const int num_ms = geometry.num_ms();
  if (mode.kind == ClusterMode::Kind::kUniversal) {
    return Clustering::Universal(num_bs, num_ms);
  }
  if (mode.groups.empty()) throw ConfigError("grouped clustering has no groups");
  std::vector<Point2> centroids;
  for (size_t g = 0; g < mode.groups.size(); ++g) {
    const auto& group = mode.groups[g];
    if (group.empty()) {
      throw ConfigError("cluster " + std::to_string(g + 1) + " is empty");
    }
    Point2 c;
    for (int q : group) {
      if (q < 0 || q >= num_bs) {
        throw ConfigError("cluster " + std::to_string(g + 1) +
                          " names a BS outside 1.." + std::to_string(num_bs));
      }
      c.x += geometry.bs_positions[q].x;
      c.y += geometry.bs_positions[q].y;
    }
    c.x /= group.size();
    c.y /= group.size();
    centroids.push_back(c);
  }
  std::vector<std::vector<int>> candidates(num_ms);
  for (int i = 0; i < num_ms; ++i) {
    size_t best = 0;
    double best_distance = std::numeric_limits<double>::infinity();
    for (size_t g = 0; g < centroids.size(); ++g) {
      // Near-ties go to the lower cluster index.
      const double d = Distance(geometry.ms_positions[i], centroids[g]);
      if (d < best_distance * (1.0 - 1e-12)) {
        best_distance = d;
        best = g;
      }
    }
    candidates[i] = mode.groups[best];
  }
  return Clustering(num_bs, std::move(candidates));
}

ChannelSet::ChannelSet(int num_ms, int num_bs, int antennas,
                       double noise_power)
    : num_ms_(num_ms),
      num_bs_(num_bs),
      antennas_(antennas),
      noise_power_(noise_power),
      h_(static_cast<size_t>(num_ms) * num_bs, CVector::Zero(antennas)) {}

bool ChannelSet::operator==(const ChannelSet& other) const {
  if (num_ms_ != other.num_ms_ || num_bs_ != other.num_bs_ ||
      antennas_ != other.antennas_ || noise_power_ != other.noise_power_) {
    return false;
  }
  for (size_t k = 0; k < h_.size(); ++k) {
    if (h_[k] != other.h_[k]) return false;
  }
  return true;
}

ChannelSet GenerateChannels(const Geometry& geometry, int antennas,
                            double pathloss_exponent, double noise_power,
                            uint64_t seed) {
  geometry.Validate();
  if (antennas < 1) throw ConfigError("antenna count M must be at least 1");
  if (!(pathloss_exponent > 0.0)) {
    throw ConfigError("pathloss exponent must be positive");
  }
  if (!(noise_power > 0.0)) throw ConfigError("noise power must be positive");
  ChannelSet channels(geometry.num_ms(), geometry.num_bs(), antennas,
                      noise_power);
  CounterRng rng(seed, kChannelStream);
  for (int i = 0; i < geometry.num_ms(); ++i) {
    for (int q = 0; q < geometry.num_bs(); ++q) {
      const double d = geometry.distance(i, q);
      if (d == 0.0) {
        throw DegenerateGeometryError("MS " + std::to_string(i + 1) +
                                      " is co-located with BS " +
                                      std::to_string(q + 1));
      }
      const double component_std =
          std::sqrt(0.5 * std::pow(d, -pathloss_exponent));
      CVector& h = channels.at(i, q);
      for (int m = 0; m < antennas; ++m) {
        const double re = rng.Normal();
        const double im = rng.Normal();
        h(m) = Complex(component_std * re, component_std * im);
      }
    }
  }
  return channels;
}

void ProblemInstance::Validate() const {
  const int k = num_ms();
  const int q = num_bs();
  if (k < 1 || q < 1 || antennas() < 1) {
    throw ConfigError("instance needs K >= 1, Q >= 1 and M >= 1");
  }
  if (!(noise_power() > 0.0)) throw ConfigError("noise power must be positive");
  if (clustering.num_ms() != k || clustering.num_bs() != q) {
    throw ConfigError("clustering does not match the channel dimensions");
  }
  if (static_cast<int>(gamma.size()) != k) {
    throw ConfigError("need one SINR target per MS");
  }
  if (static_cast<int>(weights.size()) != q ||
      static_cast<int>(power_caps.size()) != q) {
    throw ConfigError("need one weight and one power cap per BS");
  }
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!std::all_of(gamma.begin(), gamma.end(), positive)) {
    throw ConfigError("SINR targets must be positive");
  }
  if (!std::all_of(weights.begin(), weights.end(), positive)) {
    throw ConfigError("BS weights must be positive");
  }
  if (!std::all_of(power_caps.begin(), power_caps.end(), positive)) {
    throw ConfigError("BS power caps must be positive");
  }
  for (int i = 0; i < k; ++i) {
    for (int b = 0; b < q; ++b) {
      if (!channels.at(i, b).allFinite()) {
        throw ConfigError("channel entries must be finite");
      }
    }
  }
}

ProblemInstance RestrictToAssociation(const ProblemInstance& instance,
                                      const std::vector<int>& association) {
  if (static_cast<int>(association.size()) != instance.num_ms()) {
    throw ConfigError("association must name one BS per MS");
  }
  std::vector<std::vector<int>> singletons;
  singletons.reserve(association.size());
  for (size_t i = 0; i < association.size(); ++i) {
    if (!instance.clustering.IsCandidate(static_cast<int>(i), association[i])) {
      throw ConfigError("MS " + std::to_string(i + 1) +
                        " is associated with a BS outside its candidate set");
    }
    singletons.push_back({association[i]});
  }
  ProblemInstance restricted = instance;
  restricted.clustering = Clustering(instance.num_bs(), std::move(singletons));
  return restricted;
}

AssociationScheme ParseAssociationScheme(std::string_view name) {
  if (name == "channel_based" || name == "cscb_channel") {
    return AssociationScheme::kChannelBased;
  }
  if (name == "location_based" || name == "cscb_location") {
    return AssociationScheme::kLocationBased;
  }
  throw ConfigError("unknown association scheme '" + std::string(name) + "'");
}

std::vector<int> FixedAssociation(const ProblemInstance& instance,
                                  AssociationScheme scheme) {
  if (scheme == AssociationScheme::kLocationBased && !instance.geometry) {
    throw ConfigError("location-based association needs node positions");
  }
  std::vector<int> association(instance.num_ms());
  for (int i = 0; i < instance.num_ms(); ++i) {
    int best = -1;
    double best_score = 0.0;
    for (int q : instance.clustering.candidates(i)) {
      // Maximize the score; strict comparison keeps the lowest index on ties.
      const double score =
          scheme == AssociationScheme::kChannelBased
              ? instance.channels.at(i, q).squaredNorm()
              : -instance.geometry->distance(i, q);
      if (best < 0 || score > best_score) {
        best = q;
        best_score = score;
      }
    }
    association[i] = best;
  }
  return association;
}

double LinearFromDb(double db) { return std::pow(10.0, db / 10.0); }
double DbFromLinear(double linear) { return 10.0 * std::log10(linear); }

}  // namespace dpscomp
