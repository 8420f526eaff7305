#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "polardet/dataio.hpp"

using namespace polardet;

namespace {

Annotation box(double x0, double y0, double w, double h, std::string cls = "plane") {
  return {Quad{{{{x0, y0}, {x0 + w, y0}, {x0 + w, y0 + h}, {x0, y0 + h}}}}, std::move(cls), false};
}

}  // namespace

TEST(ParseAnnotation, SingleRecord) {
  const auto a = parse_dota_annotation("0 0 2 0 2 1 0 1 plane 0\n");
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0].quad[1], (Point2{2, 0}));
  EXPECT_EQ(a[0].quad[3], (Point2{0, 1}));
  EXPECT_EQ(a[0].category, "plane");
  EXPECT_FALSE(a[0].difficult);
}

TEST(ParseAnnotation, HeadersAndBlankLinesSkipped) {
  const auto a = parse_dota_annotation("imagesource:GoogleEarth\ngsd:0.5\n\n1 1 3 1 3 2 1 2 ship 1\r\n");
  ASSERT_EQ(a.size(), 1u);
  EXPECT_TRUE(a[0].difficult);
  EXPECT_EQ(a[0].category, "ship");
}

TEST(ParseAnnotation, ErrorsCarryLineNumber) {
  try {
    parse_dota_annotation("0 0 2 0 2 1 0 1 plane 0\n0 0 1 1 2 2 3 plane 0\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse_dota_annotation("0 0 2 0 2 1 0 x plane 0\n"), Error);
  EXPECT_THROW(parse_dota_annotation("0 0 2 0 2 1 0 1 plane 2\n"), Error);
  EXPECT_THROW(parse_dota_annotation("0 0 2 0 2 1 0 nan plane 0\n"), Error);
}

TEST(FormatAnnotation, RoundTrip) {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> u(-1000, 1000);
  std::vector<Annotation> in;
  for (int i = 0; i < 100; ++i) {
    Annotation a;
    for (auto& p : a.quad) p = {u(rng), u(rng)};
    a.category = i % 2 ? "small-vehicle" : "plane";
    a.difficult = i % 3 == 0;
    in.push_back(a);
  }
  const auto out = parse_dota_annotation(format_dota_annotation(in));
  ASSERT_EQ(out.size(), in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    for (std::size_t k = 0; k < 4; ++k) {
      EXPECT_NEAR(out[i].quad[k].x, in[i].quad[k].x, 5e-7);
      EXPECT_NEAR(out[i].quad[k].y, in[i].quad[k].y, 5e-7);
    }
    EXPECT_EQ(out[i].category, in[i].category);
    EXPECT_EQ(out[i].difficult, in[i].difficult);
  }
}

TEST(WriteResults, Examples) {
  const std::vector<std::string> classes{"plane", "ship"};
  const auto empty = write_dota_results({}, classes);
  ASSERT_EQ(empty.size(), 2u);
  EXPECT_EQ(empty[0].filename, "Task1_plane.txt");
  EXPECT_EQ(empty[1].filename, "Task1_ship.txt");
  EXPECT_TRUE(empty[0].content.empty());

  const std::vector<ImageDetections> imgs{{"P0001", {{1, 0.87654, box(1, 2, 3, 4).quad}}}};
  const auto files = write_dota_results(imgs, classes);
  EXPECT_TRUE(files[0].content.empty());
  EXPECT_EQ(files[1].content, "P0001 0.8765 1.00 2.00 4.00 2.00 4.00 6.00 1.00 6.00\n");

  const std::vector<ImageDetections> bad{{"P0001", {{5, 0.5, box(1, 2, 3, 4).quad}}}};
  EXPECT_THROW(write_dota_results(bad, classes), Error);
}

TEST(WriteResults, ParserRoundTrip) {
  std::mt19937_64 rng(72);
  std::uniform_real_distribution<double> u(0, 4000), s(0, 1);
  std::vector<Detection> dets;
  for (int i = 0; i < 50; ++i) {
    Quad q;
    for (auto& p : q) p = {u(rng), u(rng)};
    dets.push_back({0, s(rng), q});
  }
  const std::vector<ImageDetections> imgs{{"img", dets}};
  const std::vector<std::string> classes{"plane"};
  const auto recs = parse_dota_results(write_dota_results(imgs, classes)[0].content);
  ASSERT_EQ(recs.size(), dets.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    EXPECT_EQ(recs[i].image, "img");
    EXPECT_NEAR(recs[i].score, dets[i].score, 5e-5);
    for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(recs[i].quad[k].x, dets[i].quad[k].x, 5e-3);
  }
}

TEST(ParseResults, Malformed) {
  EXPECT_THROW(parse_dota_results("img 0.5 1 2 3 4 5 6 7\n"), Error);
}

TEST(SplitWindows, Examples) {
  EXPECT_EQ(split_windows(1024, 1024).size(), 1u);
  const auto w = split_windows(2048, 2048);
  ASSERT_EQ(w.size(), 9u);
  const int pos[3] = {0, 824, 1024};
  for (std::size_t i = 0; i < 9; ++i) {
    EXPECT_EQ(w[i].y0, pos[i / 3]);
    EXPECT_EQ(w[i].x0, pos[i % 3]);
    EXPECT_EQ(w[i].w, 1024);
    EXPECT_EQ(w[i].h, 1024);
  }
  const auto small = split_windows(500, 500);
  ASSERT_EQ(small.size(), 1u);
  EXPECT_EQ(small[0], (Window{0, 0, 500, 500}));
}

TEST(SplitWindows, BadArguments) {
  EXPECT_THROW(split_windows(2048, 2048, 200, 200), Error);
  EXPECT_THROW(split_windows(2048, 2048, 100, 200), Error);
  EXPECT_THROW(split_windows(0, 2048), Error);
}

TEST(SplitWindows, CoverEveryPixelWithFullPatches) {
  std::mt19937_64 rng(73);
  std::uniform_int_distribution<int> dim(1, 3000), patch(64, 700);
  for (int k = 0; k < 60; ++k) {
    const int W = dim(rng), H = dim(rng), P = patch(rng);
    const int O = std::uniform_int_distribution<int>(0, P - 1)(rng);
    std::vector<char> covered(static_cast<std::size_t>(W) * H, 0);
    for (const Window& w : split_windows(W, H, P, O)) {
      EXPECT_EQ(w.w, std::min(P, W));
      EXPECT_EQ(w.h, std::min(P, H));
      EXPECT_GE(w.x0, 0);
      EXPECT_LE(w.x0 + w.w, W);
      EXPECT_LE(w.y0 + w.h, H);
      for (int y = w.y0; y < w.y0 + w.h; ++y) {
        std::fill_n(covered.begin() + static_cast<std::ptrdiff_t>(y) * W + w.x0, w.w, 1);
      }
    }
    EXPECT_EQ(std::count(covered.begin(), covered.end(), 0), 0) << W << "x" << H << " p" << P;
  }
}

TEST(Remap, InsideOutsideAndCut) {
  const Window win{100, 100, 200, 200};
  const std::vector<Annotation> annots{box(150, 150, 20, 10), box(500, 500, 10, 10),
                                       box(90, 150, 20, 10)};
  const auto out = remap_annotations_to_window(annots, win);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].quad[0], (Point2{50, 50}));
  EXPECT_FALSE(out[0].difficult);
  EXPECT_EQ(out[1].quad[0], (Point2{-10, 50}));  // not clamped
  EXPECT_TRUE(out[1].difficult);                  // half inside
}

TEST(Merge, Examples) {
  const Quad q = box(10, 10, 30, 20).quad;
  const std::vector<WindowDetections> one{{{824, 0, 1024, 1024}, {{0, 0.9, q}}}};
  const auto m1 = merge_patch_detections(one);
  ASSERT_EQ(m1.size(), 1u);
  EXPECT_EQ(m1[0].quad[0], (Point2{834, 10}));

  // Same object seen from two windows.
  const std::vector<WindowDetections> two{
      {{0, 0, 1024, 1024}, {{0, 0.9, box(900, 10, 30, 20).quad}}},
      {{824, 0, 1024, 1024}, {{0, 0.8, box(76, 10, 30, 20).quad}}}};
  const auto m2 = merge_patch_detections(two);
  ASSERT_EQ(m2.size(), 1u);
  EXPECT_EQ(m2[0].score, 0.9);

  const std::vector<WindowDetections> distinct{
      {{0, 0, 1024, 1024}, {{0, 0.9, box(10, 10, 30, 20).quad}}},
      {{1024, 1024, 1024, 1024}, {{0, 0.8, box(10, 10, 30, 20).quad}}}};
  EXPECT_EQ(merge_patch_detections(distinct).size(), 2u);
}

TEST(PatchName, RoundTrip) {
  const std::string n = patch_name("P0001", {824, 1024, 1024, 1024});
  EXPECT_EQ(n, "P0001__1__824___1024");
  const auto o = parse_patch_name(n);
  ASSERT_TRUE(o.has_value());
  EXPECT_EQ(o->image, "P0001");
  EXPECT_EQ(o->x0, 824);
  EXPECT_EQ(o->y0, 1024);
  EXPECT_EQ(parse_patch_name("a__b__1__0___0")->image, "a__b");
  EXPECT_FALSE(parse_patch_name("P0001").has_value());
  EXPECT_FALSE(parse_patch_name("P0001__1__x___0").has_value());
}

TEST(SplitMerge, RoundTripRecoversObjects) {
  std::mt19937_64 rng(74);
  std::uniform_real_distribution<double> side(10, 120), ang(-89.9, 0), jit(-40, 40);
  std::vector<Annotation> objs;
  for (int gy = 0; gy < 8; ++gy) {
    for (int gx = 0; gx < 8; ++gx) {
      const RotatedRect r{128.0 + 256 * gx + jit(rng), 128.0 + 256 * gy + jit(rng), side(rng),
                          side(rng), ang(rng)};
      objs.push_back({rect_to_quad(r), "plane", false});
    }
  }
  std::vector<WindowDetections> windows;
  for (const Window& w : split_windows(2048, 2048)) {
    WindowDetections wd{w, {}};
    for (const Annotation& a : remap_annotations_to_window(objs, w)) wd.detections.push_back({0, 1.0, a.quad});
    windows.push_back(std::move(wd));
  }
  const auto merged = merge_patch_detections(windows);
  ASSERT_EQ(merged.size(), objs.size());
  for (const Annotation& a : objs) {
    double best = 0.0;
    for (const Detection& d : merged) best = std::max(best, iou_quad(a.quad, d.quad));
    EXPECT_GE(best, 0.99);
  }
}
