#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "polardet/targets.hpp"

using namespace polardet;

namespace {

Quad square2_at(double cx, double cy) {
  return Quad{{{{cx - 1, cy - 1}, {cx + 1, cy - 1}, {cx + 1, cy + 1}, {cx - 1, cy + 1}}}};
}

std::vector<LabeledQuad> random_objects(std::mt19937_64& rng, int n, int size, int classes) {
  std::uniform_real_distribution<double> pos(0.0, size), side(6, 80), ang(-89.9, 0), u01(0, 1);
  std::vector<LabeledQuad> out;
  for (int i = 0; i < n; ++i) {
    const RotatedRect r{pos(rng), pos(rng), side(rng), side(rng), ang(rng)};
    out.push_back({rect_to_quad(r), static_cast<int>(u01(rng) * classes) % classes});
  }
  return out;
}

}  // namespace

TEST(GaussianRadius, ZeroBox) { EXPECT_EQ(gaussian_radius(0, 0), 0.0); }

TEST(GaussianRadius, MatchesBruteForce) {
  // Frozen from a 0.01-step search before the implementation existed.
  EXPECT_DOUBLE_EQ(oracle::brute_gaussian_radius(10, 10, 0.7), 0.81);
  const std::array<std::array<double, 2>, 5> boxes{{{10, 10}, {4, 20}, {30, 7.5}, {1, 1}, {200, 13}}};
  for (const auto& b : boxes) {
    const double r = gaussian_radius(b[0], b[1], 0.7);
    const double brute = oracle::brute_gaussian_radius(b[0], b[1], 0.7);
    EXPECT_GE(r, brute - 1e-12) << b[0] << "x" << b[1];
    EXPECT_LT(r, brute + 0.01) << b[0] << "x" << b[1];
  }
}

TEST(GaussianRadius, MonotoneInSize) {
  double prev = 0.0;
  for (double s = 1; s < 400; s *= 1.1) {
    const double r = gaussian_radius(s, 2 * s);
    EXPECT_GE(r, prev);
    prev = r;
  }
}

TEST(DrawGaussian, PeakAndSigmaRing) {
  Grid g(1, 9, 9);
  ASSERT_TRUE(draw_gaussian(g, 0, 4, 4, 1.0));
  EXPECT_EQ(g.at(0, 4, 4), 1.0);
  EXPECT_NEAR(g.at(0, 5, 5), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(g.at(0, 5, 5), 0.36788, 1e-5);
  EXPECT_EQ(g.at(0, 0, 0), 0.0);  // d^2 = 32 > 9 sigma^2
}

TEST(DrawGaussian, MaxComposite) {
  Grid a(1, 12, 12), b(1, 12, 12), both(1, 12, 12);
  draw_gaussian(a, 0, 4, 5, 1.2);
  draw_gaussian(b, 0, 6, 5, 0.9);
  draw_gaussian(both, 0, 4, 5, 1.2);
  draw_gaussian(both, 0, 6, 5, 0.9);
  for (std::size_t i = 0; i < both.size(); ++i) {
    EXPECT_EQ(both.data[i], std::max(a.data[i], b.data[i]));
  }
}

TEST(DrawGaussian, OffGridDrawsNothing) {
  Grid g(1, 4, 4);
  EXPECT_FALSE(draw_gaussian(g, 0, -1, 2, 1.0));
  for (double v : g.data) EXPECT_EQ(v, 0.0);
}

TEST(BuildTargets, Empty) {
  const TargetMaps t = build_targets({}, 32, 32, 2, 4);
  for (const Grid* g : {&t.heatmap, &t.offset, &t.angles, &t.shorter, &t.ratios, &t.semantic,
                        &t.valid_mask}) {
    for (double v : g->data) EXPECT_EQ(v, 0.0);
  }
  EXPECT_TRUE(t.centers.empty());
  EXPECT_EQ(t.heatmap.channels, 2u);
  EXPECT_EQ(t.heatmap.height, 8u);
}

TEST(BuildTargets, SingleSquare) {
  const std::vector<LabeledQuad> objs{{square2_at(5, 5), 1}};
  const TargetMaps t = build_targets(objs, 32, 32, 2, 4);
  EXPECT_EQ(t.heatmap.at(1, 1, 1), 1.0);
  EXPECT_EQ(t.heatmap.at(0, 1, 1), 0.0);
  EXPECT_NEAR(t.offset.at(0, 1, 1), 0.25, 1e-12);
  EXPECT_NEAR(t.offset.at(1, 1, 1), 0.25, 1e-12);
  EXPECT_NEAR(t.shorter.at(0, 1, 1), 2.0, 1e-12);
  for (std::size_t p = 0; p < 4; ++p) EXPECT_NEAR(t.ratios.at(p, 1, 1), std::numbers::sqrt2, 1e-12);
  EXPECT_EQ(t.valid_mask.at(0, 1, 1), 1.0);
  ASSERT_EQ(t.centers.size(), 1u);
  EXPECT_EQ(t.centers[0].row, 1);
  EXPECT_EQ(t.centers[0].col, 1);
}

TEST(BuildTargets, SharedCellLaterWins) {
  const Quad big = rect_to_quad({9, 9, 12, 6, 0});
  const Quad small = rect_to_quad({10, 10, 4, 2, -30});
  const std::vector<LabeledQuad> objs{{big, 0}, {small, 0}};
  const TargetMaps t = build_targets(objs, 32, 32, 1, 4);
  const TargetMaps only_small = build_targets(std::vector<LabeledQuad>{{small, 0}}, 32, 32, 1, 4);
  const TargetMaps only_big = build_targets(std::vector<LabeledQuad>{{big, 0}}, 32, 32, 1, 4);
  EXPECT_NEAR(t.shorter.at(0, 2, 2), 2.0, 1e-12);
  for (std::size_t p = 0; p < 4; ++p) EXPECT_EQ(t.ratios.at(p, 2, 2), only_small.ratios.at(p, 2, 2));
  for (std::size_t i = 0; i < t.heatmap.size(); ++i) {
    EXPECT_EQ(t.heatmap.data[i], std::max(only_small.heatmap.data[i], only_big.heatmap.data[i]));
  }
  EXPECT_EQ(t.centers.size(), 1u);
}

TEST(BuildTargets, OutsideCenterSkipped) {
  const std::vector<LabeledQuad> objs{{square2_at(40, 5), 0}};
  const TargetMaps t = build_targets(objs, 32, 32, 1, 4);
  EXPECT_EQ(t.skipped, 1u);
  EXPECT_TRUE(t.centers.empty());
}

TEST(BuildTargets, BadArguments) {
  EXPECT_THROW(build_targets({}, 30, 32, 1, 4), Error);
  EXPECT_THROW(build_targets({}, 32, 32, 0, 4), Error);
  const std::vector<LabeledQuad> objs{{square2_at(5, 5), 3}};
  EXPECT_THROW(build_targets(objs, 32, 32, 2, 4), Error);
}

TEST(BuildTargets, ArgmaxIsCenterCell) {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 200; ++i) {
    const auto objs = random_objects(rng, 1, 256, 3);
    const TargetMaps t = build_targets(objs, 256, 256, 3, 4);
    if (t.centers.empty()) continue;
    const auto plane = t.heatmap.plane(static_cast<std::size_t>(objs[0].class_id));
    const auto best = std::max_element(plane.begin(), plane.end()) - plane.begin();
    EXPECT_EQ(best, t.centers[0].row * 64 + t.centers[0].col);
  }
}

TEST(BuildTargets, RangesAndDiscCoverage) {
  std::mt19937_64 rng(42);
  const double floor_heat = std::exp(-4.5);
  for (int i = 0; i < 50; ++i) {
    const auto objs = random_objects(rng, 12, 256, 3);
    const TargetMaps t = build_targets(objs, 256, 256, 3, 4);
    for (std::size_t k = 0; k < t.heatmap.size(); ++k) {
      const double h = t.heatmap.data[k], s = t.semantic.data[k];
      EXPECT_GE(h, 0.0);
      EXPECT_LE(h, 1.0);
      EXPECT_TRUE(s == 0.0 || s == 1.0);
      if (h >= floor_heat) {
        EXPECT_EQ(s, 1.0);
      }
    }
    for (double o : t.offset.data) {
      EXPECT_GE(o, 0.0);
      EXPECT_LT(o, 1.0);
    }
  }
}

TEST(BuildTargets, DecodingValidCellsGivesAnnotation) {
  std::mt19937_64 rng(43);
  for (int i = 0; i < 200; ++i) {
    const auto objs = random_objects(rng, 1, 256, 1);
    const TargetMaps t = build_targets(objs, 256, 256, 1, 4);
    for (const CenterCell& c : t.centers) {
      const PolarCode code = code_at(t.offset, t.angles, t.shorter, t.ratios, c.row, c.col, 4);
      EXPECT_LT(oracle::set_distance(decode_polar(code), objs[0].quad), 1e-6);
    }
  }
}
