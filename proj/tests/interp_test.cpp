// SPDX-License-Identifier: Apache-2.0

#include "rangeseg/interp.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

namespace rangeseg {
namespace {

FeatureMap random_map(int h, int w, int c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> value(-5.0, 5.0);
  FeatureMap f(h, w, c);
  for (double& v : f.data) v = value(rng);
  return f;
}

// Brute force over every lattice node, no window.
std::vector<double> full_lattice(const FeatureMap& f, const Coord2& q, const InterpSpec& spec) {
  std::vector<KnownSample> known;
  for (int r = 0; r < f.height; ++r) {
    for (int c = 0; c < f.width; ++c) known.push_back({{double(r), double(c)}, f.pixel(r, c)});
  }
  return distance_interpolate(known, q, spec);
}

TEST(DistanceInterpolateTest, TwoNeighborsInOneDimension) {
  const std::vector<double> a{1.0}, b{3.0}, far{100.0};
  const std::vector<KnownSample> known{{{0, 0}, a}, {{0, 2}, b}, {{0, 9}, far}};
  InterpSpec spec;
  spec.k = 2;
  EXPECT_DOUBLE_EQ(distance_interpolate(known, {0, 1}, spec)[0], 2.0);
  EXPECT_NEAR(distance_interpolate(known, {0, 1.5}, spec)[0], 2.5, 1e-12);
}

TEST(DistanceInterpolateTest, ZeroDistanceReturnsTheKnownValue) {
  const std::vector<double> a{7.25, -1.0}, b{3.0, 3.0};
  const std::vector<KnownSample> known{{{0, 0}, a}, {{1, 1}, b}};
  InterpSpec spec;
  spec.k = 2;
  EXPECT_EQ(distance_interpolate(known, {0, 0}, spec), a);
  spec.metric = Metric::kL2;
  EXPECT_EQ(distance_interpolate(known, {1, 1}, spec), b);
}

TEST(DistanceInterpolateTest, EquidistantCornersAverage) {
  const std::vector<double> v0{2.0}, v1{4.0}, v2{6.0}, v3{8.0};
  const std::vector<KnownSample> known{{{0, 0}, v0}, {{0, 1}, v1}, {{1, 0}, v2}, {{1, 1}, v3}};
  for (Metric m : {Metric::kL1, Metric::kL2}) {
    InterpSpec spec;
    spec.metric = m;
    EXPECT_NEAR(distance_interpolate(known, {0.5, 0.5}, spec)[0], 5.0, 1e-12);
  }
}

TEST(DistanceInterpolateTest, TiesKeepInputOrder) {
  const std::vector<double> a{1.0}, b{2.0}, c{4.0};
  // b and c are equally far from the query; k = 2 takes a and b.
  const std::vector<KnownSample> known{{{0, 0}, a}, {{0, 2}, b}, {{0, -2}, c}};
  InterpSpec spec;
  spec.k = 2;
  const double wa = 1.0 / 0.5, wb = 1.0 / 1.5;
  EXPECT_NEAR(distance_interpolate(known, {0, 0.5}, spec)[0], (wa * 1.0 + wb * 2.0) / (wa + wb), 1e-12);
}

TEST(DistanceInterpolateTest, RejectsBadArguments) {
  const std::vector<double> a{1.0}, ab{1.0, 2.0};
  const std::vector<KnownSample> one{{{0, 0}, a}};
  const std::vector<KnownSample> mixed{{{0, 0}, a}, {{0, 1}, ab}};
  InterpSpec spec;
  EXPECT_THROW(distance_interpolate({}, {0, 0}, spec), std::invalid_argument);
  EXPECT_THROW(distance_interpolate(one, {0, 0}, spec), std::invalid_argument);  // k = 4 > 1
  spec.k = 1;
  EXPECT_THROW(distance_interpolate(mixed, {0, 0}, spec), std::invalid_argument);
  spec.k = 0;
  EXPECT_THROW(distance_interpolate(one, {0, 0}, spec), std::invalid_argument);
}

TEST(DistanceInterpolateTest, OutputIsConvexCombinationOfSelectedNeighbors) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> pos(-10.0, 10.0), val(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::vector<double>> values(12, std::vector<double>(3));
    std::vector<KnownSample> known;
    for (auto& v : values) {
      for (double& x : v) x = val(rng);
      known.push_back({{pos(rng), pos(rng)}, v});
    }
    InterpSpec spec;
    spec.k = 1 + trial % 12;
    spec.metric = trial % 2 ? Metric::kL2 : Metric::kL1;
    const Coord2 q{pos(rng), pos(rng)};
    const auto out = distance_interpolate(known, q, spec);

    std::vector<std::size_t> order(known.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return distance(q, known[a].position, spec.metric) < distance(q, known[b].position, spec.metric);
    });
    for (std::size_t c = 0; c < 3; ++c) {
      double lo = 1e300, hi = -1e300;
      for (int j = 0; j < spec.k; ++j) {
        lo = std::min(lo, values[order[static_cast<std::size_t>(j)]][c]);
        hi = std::max(hi, values[order[static_cast<std::size_t>(j)]][c]);
      }
      EXPECT_GE(out[c], lo - 1e-12);
      EXPECT_LE(out[c], hi + 1e-12);
    }
  }
}

TEST(DistanceInterpolateTest, TwoNeighborsMatchLinearInterpolationIn1D) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> val(-50.0, 50.0), t(0.0, 15.0);
  std::vector<std::vector<double>> values(16, std::vector<double>(1));
  std::vector<KnownSample> known;
  for (int i = 0; i < 16; ++i) {
    values[static_cast<std::size_t>(i)][0] = val(rng);
    known.push_back({{0.0, double(i)}, values[static_cast<std::size_t>(i)]});
  }
  InterpSpec spec;
  spec.k = 2;
  for (int q = 0; q < 1000; ++q) {
    const double x = t(rng);
    const int lo = std::min(static_cast<int>(x), 14);
    const double f = x - lo;
    const double linear = (1 - f) * values[static_cast<std::size_t>(lo)][0] +
                          f * values[static_cast<std::size_t>(lo + 1)][0];
    ASSERT_NEAR(distance_interpolate(known, {0.0, x}, spec)[0], linear, 1e-9) << x;
  }
}

TEST(LatticeInterpolateTest, WindowedSearchMatchesFullLattice) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 60; ++trial) {
    const int h = 1 + static_cast<int>(rng() % 9), w = 1 + static_cast<int>(rng() % 9);
    const FeatureMap f = random_map(h, w, 2, rng());
    InterpSpec spec;
    spec.k = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(std::min(h * w, 30)));
    spec.metric = trial % 2 ? Metric::kL2 : Metric::kL1;
    for (int q = 0; q < 20; ++q) {
      std::uniform_real_distribution<double> qr(0.0, h - 1.0), qc(0.0, w - 1.0);
      // Half the queries sit on half-integers to create distance ties.
      Coord2 query{qr(rng), qc(rng)};
      if (q % 2) query = {std::round(query[0] * 2) / 2, std::round(query[1] * 2) / 2};
      ASSERT_EQ(lattice_interpolate(f, query, spec), full_lattice(f, query, spec))
          << h << "x" << w << " k=" << spec.k;
    }
  }
}

TEST(LatticeInterpolateTest, RejectsQueriesOutsideTheLattice) {
  const FeatureMap f(3, 3, 1);
  EXPECT_THROW(lattice_interpolate(f, {-0.1, 1.0}, {}), std::invalid_argument);
  EXPECT_THROW(lattice_interpolate(f, {1.0, 2.5}, {}), std::invalid_argument);
}

TEST(BilinearUpsampleTest, RampIsCornerAligned) {
  FeatureMap f(1, 2, 1);
  f.at(0, 1, 0) = 10.0;
  const FeatureMap up = bilinear_upsample(f, 1, 6);
  const std::vector<double> want{0, 2, 4, 6, 8, 10};
  for (int j = 0; j < 6; ++j) EXPECT_NEAR(up.at(0, j, 0), want[static_cast<std::size_t>(j)], 1e-12);
}

TEST(BilinearUpsampleTest, ConstantsIdentityAndLinearity) {
  const FeatureMap c(3, 4, 2, 1.75);
  for (double v : bilinear_upsample(c, 7, 13).data) EXPECT_EQ(v, 1.75);

  const FeatureMap a = random_map(4, 5, 3, 1), b = random_map(4, 5, 3, 2);
  EXPECT_EQ(bilinear_upsample(a, 4, 5).data, a.data);

  FeatureMap mix(4, 5, 3);
  for (std::size_t i = 0; i < mix.data.size(); ++i) mix.data[i] = 2.0 * a.data[i] - 0.5 * b.data[i];
  const FeatureMap ua = bilinear_upsample(a, 9, 17), ub = bilinear_upsample(b, 9, 17);
  const FeatureMap um = bilinear_upsample(mix, 9, 17);
  for (std::size_t i = 0; i < um.data.size(); ++i) {
    EXPECT_NEAR(um.data[i], 2.0 * ua.data[i] - 0.5 * ub.data[i], 1e-12);
  }
}

TEST(BilinearUpsampleTest, ExactAtLatticeNodes) {
  const FeatureMap f = random_map(5, 7, 2, 3);
  const FeatureMap up = bilinear_upsample(f, 9, 13);  // every other output is a node
  for (int r = 0; r < 5; ++r) {
    for (int c = 0; c < 7; ++c) {
      for (int k = 0; k < 2; ++k) EXPECT_EQ(up.at(2 * r, 2 * c, k), f.at(r, c, k));
    }
  }
}

TEST(BilinearUpsampleTest, RejectsShrinking) {
  EXPECT_THROW(bilinear_upsample(FeatureMap(4, 4, 1), 2, 8), std::invalid_argument);
  EXPECT_THROW(bilinear_upsample(FeatureMap(0, 4, 1), 2, 8), std::invalid_argument);
}

TEST(FidConcatTest, ResNetPyramidChannelSum) {
  std::vector<FeatureMap> maps;
  const int channels[] = {64, 128, 256, 512, 1024};
  for (int s = 0; s < 5; ++s) maps.emplace_back(16 >> s, 32 >> s, channels[s], 1.0);
  const FeatureMap out = fid_concat(maps);
  EXPECT_EQ(out.channels, 1984);
  EXPECT_EQ(out.height, 16);
  EXPECT_EQ(out.width, 32);
}

TEST(FidConcatTest, SingleMapUnchangedAndConstantsStack) {
  const FeatureMap f = random_map(4, 8, 3, 11);
  EXPECT_EQ(fid_concat(std::vector<FeatureMap>{f}).data, f.data);

  const std::vector<FeatureMap> maps{FeatureMap(8, 8, 2, 1.5), FeatureMap(2, 2, 3, -4.0)};
  const FeatureMap out = fid_concat(maps);
  for (int r = 0; r < 8; ++r) {
    for (int c = 0; c < 8; ++c) {
      const auto px = out.pixel(r, c);
      EXPECT_EQ(std::vector<double>(px.begin(), px.end()),
                (std::vector<double>{1.5, 1.5, -4.0, -4.0, -4.0}));
    }
  }
}

TEST(FidConcatTest, EqualsIndependentUpsamplingThenStacking) {
  const std::vector<FeatureMap> maps{random_map(8, 16, 2, 1), random_map(4, 8, 3, 2),
                                     random_map(1, 2, 1, 3)};
  const FeatureMap out = fid_concat(maps);
  int base = 0;
  for (const FeatureMap& m : maps) {
    const FeatureMap up = bilinear_upsample(m, 8, 16);
    for (int r = 0; r < 8; ++r) {
      for (int c = 0; c < 16; ++c) {
        for (int k = 0; k < m.channels; ++k) ASSERT_EQ(out.at(r, c, base + k), up.at(r, c, k));
      }
    }
    base += m.channels;
  }
}

TEST(FidConcatTest, ErrorNamesTheOffendingMap) {
  auto message = [](const std::vector<FeatureMap>& maps) {
    try {
      fid_concat(maps);
    } catch (const std::invalid_argument& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(message({FeatureMap(8, 8, 1), FeatureMap(4, 4, 1), FeatureMap(3, 3, 1)}).find("map 2"),
            std::string::npos);
  EXPECT_NE(message({FeatureMap(8, 8, 1), FeatureMap(4, 2, 1)}).find("map 1"), std::string::npos);
  EXPECT_NE(message({FeatureMap(12, 12, 1), FeatureMap(4, 4, 1)}).find("map 1"), std::string::npos);
  EXPECT_THROW(fid_concat(std::vector<FeatureMap>{}), std::invalid_argument);
}

TEST(InterpDiscrepancyTest, UnitCellCounterexample) {
  FeatureMap f(2, 2, 1);
  f.at(0, 0, 0) = 1.0;
  const Discrepancy d = interp_discrepancy(f, 3, 2);
  // Output row 1 samples lattice row 0.5.
  EXPECT_NEAR(lattice_interpolate(f, {0.5, 0.0}, {})[0], 0.375, 1e-9);
  EXPECT_NEAR(bilinear_upsample(f, 3, 2).at(1, 0, 0), 0.5, 1e-9);
  EXPECT_NEAR(d.diff.at(1, 0, 0), -0.125, 1e-9);
  EXPECT_NEAR(d.max_abs, 0.125, 1e-9);
  EXPECT_EQ(d.diff.at(0, 0, 0), 0.0);
  EXPECT_EQ(d.diff.at(2, 1, 0), 0.0);
}

TEST(InterpDiscrepancyTest, ZeroAtLatticeNodesForRandomMaps) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int h = 2 + static_cast<int>(seed % 5), w = 2 + static_cast<int>(seed % 7);
    const FeatureMap f = random_map(h, w, 3, seed);
    const Discrepancy d = interp_discrepancy(f, 2 * h - 1, 2 * w - 1);
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        for (int k = 0; k < 3; ++k) ASSERT_LE(std::abs(d.diff.at(2 * r, 2 * c, k)), 1e-12);
      }
    }
  }
}

TEST(InterpDiscrepancyTest, ConstantInputHasNoGap) {
  const Discrepancy d = interp_discrepancy(FeatureMap(3, 5, 2, -2.5), 9, 17);
  EXPECT_LE(d.max_abs, 1e-12);
  EXPECT_LE(d.mean_abs, 1e-12);
}

}  // namespace
}  // namespace rangeseg
