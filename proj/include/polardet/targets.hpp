#pragma once

// Training targets at the output stride: per-class Gaussian center heatmap,
// sub-cell offset, four polar angles, shorter side, four ratios, and the
// binary center-semantic discs.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "polardet/codec.hpp"
#include "polardet/error.hpp"
#include "polardet/geometry.hpp"
#include "polardet/grid.hpp"

namespace polardet {

struct LabeledQuad {
  Quad quad;
  int class_id = 0;
};

struct CenterCell {
  long row = 0;
  long col = 0;
};

struct TargetMaps {
  int stride = 4;
  Grid heatmap;     // C planes, [0,1]
  Grid offset;      // dx, dy in [0,1)
  Grid angles;      // theta_1..theta_4, radians
  Grid shorter;     // s, input pixels
  Grid ratios;      // r_1..r_4
  Grid semantic;    // C planes, {0,1}
  Grid valid_mask;  // 1 at cells holding regression targets
  std::vector<CenterCell> centers;  // valid cells in first-write order
  std::size_t skipped = 0;          // objects whose center fell outside the grid
};

// Largest corner displacement r such that an axis-aligned h x w box moved
// by r (translated, shrunk or grown) keeps IoU >= min_overlap with itself.
inline double gaussian_radius(double box_h, double box_w, double min_overlap = 0.7) {
  if (!(box_h > 0.0) || !(box_w > 0.0)) return 0.0;
  const double o = min_overlap;
  const double sum = box_h + box_w, prod = box_h * box_w;

  // translated by (r, r): (h-r)(w-r) = o * (2hw - (h-r)(w-r))
  const double c1 = prod * (1.0 - o) / (1.0 + o);
  const double r1 = (sum - std::sqrt(std::max(0.0, sum * sum - 4.0 * c1))) / 2.0;

  // shrunk by r on every side: (h-2r)(w-2r) = o * hw
  const double b2 = 2.0 * sum, c2 = (1.0 - o) * prod;
  const double r2 = (b2 - std::sqrt(std::max(0.0, b2 * b2 - 16.0 * c2))) / 8.0;

  // grown by r on every side: hw = o * (h+2r)(w+2r)
  const double a3 = 4.0 * o, b3 = 2.0 * o * sum, c3 = (o - 1.0) * prod;
  const double r3 = (-b3 + std::sqrt(std::max(0.0, b3 * b3 - 4.0 * a3 * c3))) / (2.0 * a3);

  return std::max(0.0, std::min({r1, r2, r3}));
}

inline double gaussian_sigma(double radius) { return (2.0 * radius + 1.0) / 6.0; }

// Max-composites exp(-d^2 / (2 sigma^2)) onto one plane over the disc
// d <= 3 sigma. Returns false (and draws nothing) if the center is off-grid.
inline bool draw_gaussian(Grid& map, std::size_t channel, long cx, long cy, double sigma) {
  if (!(sigma > 0.0)) throw Error(ErrorKind::InvalidInput, "sigma must be positive");
  if (channel >= map.channels) throw Error(ErrorKind::InvalidInput, "channel out of range");
  const long w = static_cast<long>(map.width), h = static_cast<long>(map.height);
  if (cx < 0 || cy < 0 || cx >= w || cy >= h) return false;
  const double reach2 = 9.0 * sigma * sigma;
  const long reach = static_cast<long>(std::floor(3.0 * sigma));
  const double denom = 2.0 * sigma * sigma;
  for (long y = std::max(0L, cy - reach); y <= std::min(h - 1, cy + reach); ++y) {
    for (long x = std::max(0L, cx - reach); x <= std::min(w - 1, cx + reach); ++x) {
      const double d2 = static_cast<double>((x - cx) * (x - cx) + (y - cy) * (y - cy));
      if (d2 > reach2) continue;
      double& cell = map.at(channel, static_cast<std::size_t>(y), static_cast<std::size_t>(x));
      cell = std::max(cell, std::exp(-d2 / denom));
    }
  }
  return true;
}

inline void draw_disc(Grid& map, std::size_t channel, long cx, long cy, double radius) {
  const long w = static_cast<long>(map.width), h = static_cast<long>(map.height);
  const long reach = static_cast<long>(std::floor(radius));
  const double r2 = radius * radius;
  for (long y = std::max(0L, cy - reach); y <= std::min(h - 1, cy + reach); ++y) {
    for (long x = std::max(0L, cx - reach); x <= std::min(w - 1, cx + reach); ++x) {
      const double d2 = static_cast<double>((x - cx) * (x - cx) + (y - cy) * (y - cy));
      if (d2 <= r2) map.at(channel, static_cast<std::size_t>(y), static_cast<std::size_t>(x)) = 1.0;
    }
  }
}

// Objects are written in input order: later objects overwrite regression
// targets at a shared center cell, the heatmap keeps the cellwise max.
inline TargetMaps build_targets(std::span<const LabeledQuad> objects, int width, int height,
                                int num_classes, int stride = 4) {
  if (stride < 1 || width <= 0 || height <= 0 || width % stride != 0 || height % stride != 0) {
    throw Error(ErrorKind::InvalidInput, "image size must be positive and divisible by stride");
  }
  if (num_classes < 1) throw Error(ErrorKind::InvalidInput, "need at least one class");
  const auto gw = static_cast<std::size_t>(width / stride);
  const auto gh = static_cast<std::size_t>(height / stride);
  const auto nc = static_cast<std::size_t>(num_classes);

  TargetMaps t;
  t.stride = stride;
  t.heatmap = Grid(nc, gh, gw);
  t.offset = Grid(2, gh, gw);
  t.angles = Grid(4, gh, gw);
  t.shorter = Grid(1, gh, gw);
  t.ratios = Grid(4, gh, gw);
  t.semantic = Grid(nc, gh, gw);
  t.valid_mask = Grid(1, gh, gw);

  for (const LabeledQuad& obj : objects) {
    if (obj.class_id < 0 || obj.class_id >= num_classes) {
      throw Error(ErrorKind::InvalidInput, "class id out of range");
    }
    const Quad q = canonicalize_quad(obj.quad);
    const RotatedRect mbr = min_area_rect(q.points());
    const PolarCode code = encode_polar_with_rect(q, mbr, stride);
    const long col = static_cast<long>(std::floor(code.center.x / stride));
    const long row = static_cast<long>(std::floor(code.center.y / stride));
    if (col < 0 || row < 0 || col >= static_cast<long>(gw) || row >= static_cast<long>(gh)) {
      ++t.skipped;
      continue;
    }
    const auto ch = static_cast<std::size_t>(obj.class_id);
    const double radius = gaussian_radius(mbr.h / stride, mbr.w / stride);
    const double sigma = gaussian_sigma(radius);
    draw_gaussian(t.heatmap, ch, col, row, sigma);
    // Same footprint as the heatmap kernel: diameter 2*radius + 1.
    draw_disc(t.semantic, ch, col, row, 3.0 * sigma);

    const auto y = static_cast<std::size_t>(row), x = static_cast<std::size_t>(col);
    t.offset.at(0, y, x) = code.offset.x;
    t.offset.at(1, y, x) = code.offset.y;
    for (std::size_t p = 0; p < 4; ++p) {
      t.angles.at(p, y, x) = code.theta[p];
      t.ratios.at(p, y, x) = code.r[p];
    }
    t.shorter.at(0, y, x) = code.s;
    if (t.valid_mask.at(0, y, x) == 0.0) t.centers.push_back({row, col});
    t.valid_mask.at(0, y, x) = 1.0;
  }
  return t;
}

// Reads the regression heads at one cell back into a polar code.
inline PolarCode code_at(const Grid& offset, const Grid& angles, const Grid& shorter,
                         const Grid& ratios, long row, long col, int stride) {
  const auto y = static_cast<std::size_t>(row), x = static_cast<std::size_t>(col);
  PolarCode c;
  c.offset = {offset.at(0, y, x), offset.at(1, y, x)};
  c.center = grid_center(col, row, c.offset, stride);
  for (std::size_t p = 0; p < 4; ++p) {
    c.theta[p] = angles.at(p, y, x);
    c.r[p] = ratios.at(p, y, x);
  }
  c.s = shorter.at(0, y, x);
  return c;
}

}  // namespace polardet
