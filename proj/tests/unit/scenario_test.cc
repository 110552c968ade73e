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
#include <vector>

#include "dpscomp/errors.h"
#include "gtest/gtest.h"

namespace dpscomp {
namespace {

Geometry PairGeometry(std::vector<Point2> ms) {
  Geometry g;
  g.bs_positions = TwoCellLayout();
  g.ms_positions = std::move(ms);
  return g;
}

// Signed area test: p strictly left of or on the directed edge a -> b.
bool LeftOf(const Point2& a, const Point2& b, const Point2& p) {
  return (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x) >= -1e-12;
}

TEST(LayoutTest, SevenCellNeighboursAtUnitDistance) {
  const auto bs = SevenCellLayout();
  ASSERT_EQ(bs.size(), 7u);
  EXPECT_DOUBLE_EQ(bs[0].x, 0.0);
  EXPECT_DOUBLE_EQ(bs[0].y, 0.0);
  double nearest = 1e9;
  for (size_t a = 0; a < bs.size(); ++a) {
    for (size_t b = a + 1; b < bs.size(); ++b) {
      nearest = std::min(nearest, Distance(bs[a], bs[b]));
    }
  }
  EXPECT_NEAR(nearest, 1.0, 1e-12);
  for (int q = 1; q < 7; ++q) {
    EXPECT_NEAR(Distance(bs[0], bs[q]), 1.0, 1e-12);
    EXPECT_NEAR(Distance(bs[q], bs[q % 6 + 1]), 1.0, 1e-12);
  }
}

TEST(PlaceMobilesTest, InsideHexagonAndOutsideExclusion) {
  const auto bs = SevenCellLayout();
  const auto ms = PlaceMobiles(bs, 2000, 9);
  ASSERT_EQ(ms.size(), 2000u);
  for (const Point2& p : ms) {
    for (int q = 1; q < 7; ++q) {
      ASSERT_TRUE(LeftOf(bs[q], bs[q % 6 + 1], p));
    }
    for (const Point2& b : bs) ASSERT_GE(Distance(p, b), kExclusionRadius);
  }
}

TEST(PlaceMobilesTest, TwoBsDrawsLieOnSegment) {
  const auto ms = PlaceMobiles(TwoCellLayout(), 500, 3);
  for (const Point2& p : ms) {
    EXPECT_DOUBLE_EQ(p.y, 0.0);
    EXPECT_GE(p.x, kExclusionRadius);
    EXPECT_LE(p.x, 1.0 - kExclusionRadius);
  }
}

TEST(PlaceMobilesTest, SingleBsDrawsLieInUnitDisk) {
  const auto ms = PlaceMobiles({{0.0, 0.0}}, 500, 3);
  for (const Point2& p : ms) {
    const double r = std::hypot(p.x, p.y);
    EXPECT_LE(r, 1.0);
    EXPECT_GE(r, kExclusionRadius);
  }
}

TEST(PlaceMobilesTest, DeterministicPerSeed) {
  const auto bs = SevenCellLayout();
  const auto a = PlaceMobiles(bs, 10, 77);
  const auto b = PlaceMobiles(bs, 10, 77);
  const auto c = PlaceMobiles(bs, 10, 78);
  bool differs = false;
  for (int i = 0; i < 10; ++i) {
    EXPECT_EQ(a[i].x, b[i].x);
    EXPECT_EQ(a[i].y, b[i].y);
    differs |= a[i].x != c[i].x;
  }
  EXPECT_TRUE(differs);
}

TEST(ClusteringTest, SevenCellGroupsAllContainCentralBs) {
  Geometry g;
  g.bs_positions = SevenCellLayout();
  g.ms_positions = PlaceMobiles(g.bs_positions, 50, 4);
  const Clustering c = BuildClusters(g, SevenCellThreeClusters());
  for (int i = 0; i < c.num_ms(); ++i) {
    ASSERT_EQ(c.candidates(i).size(), 3u);
    EXPECT_EQ(c.candidates(i).front(), 0);
  }
}

TEST(ClusteringTest, UniversalOffersEveryBs) {
  const Clustering c = Clustering::Universal(7, 4);
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(c.candidates(i), (std::vector<int>{0, 1, 2, 3, 4, 5, 6}));
  }
}

TEST(ClusteringTest, EquidistantMobileTakesLowestCluster) {
  Geometry g;
  g.bs_positions = SevenCellLayout();
  g.ms_positions = {{0.0, 0.0}};
  const Clustering c = BuildClusters(g, SevenCellThreeClusters());
  EXPECT_EQ(c.candidates(0), (std::vector<int>{0, 1, 2}));
}

TEST(ClusteringTest, MobileJoinsNearestCentroid) {
  Geometry g;
  g.bs_positions = SevenCellLayout();
  // Close to BS 5 (index 4, angle 180 degrees).
  g.ms_positions = {{-0.8, -0.1}};
  const Clustering c = BuildClusters(g, SevenCellThreeClusters());
  EXPECT_EQ(c.candidates(0), (std::vector<int>{0, 3, 4}));
}

TEST(ClusteringTest, InverseMapIsExact) {
  const Clustering c(4, {{0, 2}, {1}, {3, 2, 0}, {1, 3}, {2}});
  for (int i = 0; i < c.num_ms(); ++i) {
    for (int q = 0; q < c.num_bs(); ++q) {
      const auto& served = c.served(q);
      const bool in_k = std::find(served.begin(), served.end(), i) != served.end();
      EXPECT_EQ(in_k, c.IsCandidate(i, q)) << "ms " << i << " bs " << q;
    }
  }
  EXPECT_EQ(c.candidates(2), (std::vector<int>{0, 2, 3}));
}

TEST(ClusteringTest, RejectsBadSets) {
  EXPECT_THROW(Clustering(2, {{}}), ConfigError);
  EXPECT_THROW(Clustering(2, {{2}}), ConfigError);
  Geometry g = PairGeometry({{0.5, 0.0}});
  EXPECT_THROW(BuildClusters(g, ClusterMode::Grouped({{0}, {}})), ConfigError);
  EXPECT_THROW(BuildClusters(g, ClusterMode::Grouped({})), ConfigError);
}

TEST(GenerateChannelsTest, PerEntryVarianceFollowsPathLoss) {
  // MS 0 at distance 1 from BS 0, MS 1 at distance 2 from BS 0.
  Geometry g;
  g.bs_positions = {{0.0, 0.0}};
  g.ms_positions = {{1.0, 0.0}, {0.0, 2.0}};
  constexpr int kAntennas = 1000;
  constexpr int kSeeds = 100;
  double power[2] = {0.0, 0.0};
  for (int s = 0; s < kSeeds; ++s) {
    const ChannelSet h = GenerateChannels(g, kAntennas, 4.0, 0.01, s);
    for (int i = 0; i < 2; ++i) power[i] += h.at(i, 0).squaredNorm();
  }
  constexpr double kN = static_cast<double>(kAntennas) * kSeeds;
  // |h|^2 of a CN(0, v) entry is exponential with mean v and deviation v.
  const double expected[2] = {1.0, 1.0 / 16.0};
  for (int i = 0; i < 2; ++i) {
    const double mean = power[i] / kN;
    EXPECT_NEAR(mean, expected[i], 3.0 * expected[i] / std::sqrt(kN));
  }
}

TEST(GenerateChannelsTest, CircularSymmetry) {
  Geometry g;
  g.bs_positions = {{0.0, 0.0}};
  g.ms_positions = {{1.0, 0.0}};
  const ChannelSet h = GenerateChannels(g, 100000, 4.0, 0.01, 21);
  double re2 = 0.0;
  double im2 = 0.0;
  double cross = 0.0;
  for (int m = 0; m < 100000; ++m) {
    const Complex z = h.at(0, 0)(m);
    re2 += z.real() * z.real();
    im2 += z.imag() * z.imag();
    cross += z.real() * z.imag();
  }
  EXPECT_NEAR(re2 / 1e5, 0.5, 0.01);
  EXPECT_NEAR(im2 / 1e5, 0.5, 0.01);
  EXPECT_NEAR(cross / 1e5, 0.0, 0.01);
}

TEST(GenerateChannelsTest, PureFunctionOfSeed) {
  const Geometry g = PairGeometry({{0.3, 0.0}, {0.7, 0.0}});
  const ChannelSet a = GenerateChannels(g, 4, 4.0, 0.01, 5);
  const ChannelSet b = GenerateChannels(g, 4, 4.0, 0.01, 5);
  const ChannelSet c = GenerateChannels(g, 4, 4.0, 0.01, 6);
  EXPECT_TRUE(a == b);
  EXPECT_FALSE(a == c);
}

TEST(GenerateChannelsTest, CoLocatedMobileIsRejected) {
  const Geometry g = PairGeometry({{1.0, 0.0}});
  EXPECT_THROW(GenerateChannels(g, 2, 4.0, 0.01, 1), DegenerateGeometryError);
}

TEST(GenerateChannelsTest, RejectsBadParameters) {
  const Geometry g = PairGeometry({{0.5, 0.0}});
  EXPECT_THROW(GenerateChannels(g, 0, 4.0, 0.01, 1), ConfigError);
  EXPECT_THROW(GenerateChannels(g, 2, 0.0, 0.01, 1), ConfigError);
  EXPECT_THROW(GenerateChannels(g, 2, 4.0, 0.0, 1), ConfigError);
}

ProblemInstance TwoBsSingleMs(double g1, double g2) {
  ProblemInstance instance;
  instance.channels = ChannelSet(1, 2, 1, 0.01);
  instance.channels.at(0, 0) = CVector::Constant(1, Complex(g1, 0.0));
  instance.channels.at(0, 1) = CVector::Constant(1, Complex(g2, 0.0));
  instance.clustering = Clustering::Universal(2, 1);
  instance.gamma = {1.0};
  instance.weights = {1.0, 1.0};
  instance.power_caps = {1.0, 1.0};
  return instance;
}

TEST(FixedAssociationTest, ChannelBasedPicksStrongest) {
  const ProblemInstance instance = TwoBsSingleMs(2.0, 1.0);
  EXPECT_EQ(FixedAssociation(instance, AssociationScheme::kChannelBased),
            std::vector<int>{0});
  const ProblemInstance tied = TwoBsSingleMs(1.0, 1.0);
  EXPECT_EQ(FixedAssociation(tied, AssociationScheme::kChannelBased),
            std::vector<int>{0});
}

TEST(FixedAssociationTest, LocationBasedPicksClosest) {
  ProblemInstance instance = TwoBsSingleMs(0.1, 5.0);
  instance.geometry = PairGeometry({{0.4, 0.0}});
  // d = 0.4 to BS 1 and 0.6 to BS 2.
  EXPECT_EQ(FixedAssociation(instance, AssociationScheme::kLocationBased),
            std::vector<int>{0});
  instance.geometry->bs_positions = {{0.0, 0.0}, {1.3, 0.0}};
  // d = 0.4 and 0.9.
  EXPECT_EQ(FixedAssociation(instance, AssociationScheme::kLocationBased),
            std::vector<int>{0});
}

TEST(FixedAssociationTest, SchemesDisagreeUnderFading) {
  bool disagreement = false;
  for (uint64_t seed = 0; seed < 200 && !disagreement; ++seed) {
    ProblemInstance instance;
    Geometry g = PairGeometry(PlaceMobiles(TwoCellLayout(), 1, seed));
    instance.channels = GenerateChannels(g, 1, 4.0, 0.01, seed);
    instance.clustering = Clustering::Universal(2, 1);
    instance.gamma = {1.0};
    instance.weights = {1.0, 1.0};
    instance.power_caps = {1.0, 1.0};
    instance.geometry = g;
    disagreement =
        FixedAssociation(instance, AssociationScheme::kChannelBased) !=
        FixedAssociation(instance, AssociationScheme::kLocationBased);
  }
  EXPECT_TRUE(disagreement);
}

TEST(FixedAssociationTest, ParsesSchemeNames) {
  EXPECT_EQ(ParseAssociationScheme("channel_based"), AssociationScheme::kChannelBased);
  EXPECT_EQ(ParseAssociationScheme("cscb_location"), AssociationScheme::kLocationBased);
  EXPECT_THROW(ParseAssociationScheme("random"), ConfigError);
}

TEST(ProblemInstanceTest, ValidateRejectsNonPositiveTargets) {
  ProblemInstance instance = TwoBsSingleMs(1.0, 1.0);
  instance.Validate();
  instance.gamma = {0.0};
  EXPECT_THROW(instance.Validate(), ConfigError);
  instance.gamma = {1.0};
  instance.power_caps = {1.0};
  EXPECT_THROW(instance.Validate(), ConfigError);
}

TEST(ProblemInstanceTest, RestrictToAssociationMakesSingletons) {
  const ProblemInstance instance = TwoBsSingleMs(1.0, 2.0);
  const ProblemInstance r = RestrictToAssociation(instance, {1});
  EXPECT_EQ(r.clustering.candidates(0), std::vector<int>{1});
  EXPECT_TRUE(r.clustering.served(0).empty());
  EXPECT_TRUE(r.channels == instance.channels);
}

TEST(DecibelTest, RoundTrip) {
  EXPECT_DOUBLE_EQ(LinearFromDb(10.0), 10.0);
  EXPECT_NEAR(LinearFromDb(3.0), 1.9952623149688795, 1e-15);
  EXPECT_NEAR(DbFromLinear(LinearFromDb(-7.25)), -7.25, 1e-12);
}

}  // namespace
}  // namespace dpscomp
