#pragma once

// Planar primitives for quadrilaterals in image coordinates (x right, y down).
//
// Orientation note: "signed area" below is the raw shoelace sum over (x, y).
// A positive value is counterclockwise in math axes, which is clockwise on
// screen. Canonical quads follow ascending polar angle (see codec.hpp), which
// is negative signed area.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "polardet/error.hpp"

namespace polardet {

inline constexpr double kAreaEpsilon = 1e-9;

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(Point2 a, double k) { return {a.x * k, a.y * k}; }
  friend Point2 operator*(double k, Point2 a) { return {a.x * k, a.y * k}; }
  friend bool operator==(Point2 a, Point2 b) = default;
};

inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }

using Polygon = std::vector<Point2>;

struct Quad {
  std::array<Point2, 4> v{};

  Point2& operator[](std::size_t i) { return v[i]; }
  const Point2& operator[](std::size_t i) const { return v[i]; }
  auto begin() { return v.begin(); }
  auto end() { return v.end(); }
  auto begin() const { return v.begin(); }
  auto end() const { return v.end(); }
  std::span<const Point2> points() const { return v; }
  friend bool operator==(const Quad&, const Quad&) = default;
};

// Five-parameter box. angle is in degrees, in (-90, 0]; w is the side whose
// direction angle atan2(dy, dx) reduced mod 180 lies in that range.
struct RotatedRect {
  double cx = 0.0;
  double cy = 0.0;
  double w = 0.0;
  double h = 0.0;
  double angle = 0.0;
};

inline double signed_area(std::span<const Point2> pts) {
  const std::size_t n = pts.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = pts[i];
    const Point2& b = pts[(i + 1) % n];
    acc += a.x * b.y - b.x * a.y;
  }
  return 0.5 * acc;
}

inline double polygon_area(std::span<const Point2> pts) {
  if (pts.size() < 3) {
    throw Error(ErrorKind::InvalidInput, "polygon_area needs at least 3 vertices");
  }
  return std::abs(signed_area(pts));
}

inline bool all_finite(std::span<const Point2> pts) {
  return std::all_of(pts.begin(), pts.end(), [](Point2 p) {
    return std::isfinite(p.x) && std::isfinite(p.y);
  });
}

// Start at min y (ties: min x), cycle in ascending polar-angle direction.
inline Quad canonicalize_quad(const Quad& q) {
  if (!all_finite(q.points())) {
    throw Error(ErrorKind::InvalidInput, "quad has non-finite coordinates");
  }
  const double area = signed_area(q.points());
  if (std::abs(area) <= kAreaEpsilon) {
    throw Error(ErrorKind::DegenerateGeometry, "quad area below epsilon");
  }
  std::array<Point2, 4> v = q.v;
  if (area > 0.0) std::reverse(v.begin(), v.end());
  std::size_t start = 0;
  for (std::size_t i = 1; i < 4; ++i) {
    if (v[i].y < v[start].y || (v[i].y == v[start].y && v[i].x < v[start].x)) start = i;
  }
  Quad out;
  for (std::size_t i = 0; i < 4; ++i) out.v[i] = v[(start + i) % 4];
  return out;
}

// Andrew's monotone chain. Collinear points are dropped; result has positive
// signed area when it has at least 3 vertices.
inline Polygon convex_hull(std::span<const Point2> input) {
  Polygon pts(input.begin(), input.end());
  std::sort(pts.begin(), pts.end(), [](Point2 a, Point2 b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  Polygon hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

namespace detail {

inline constexpr double kDeg = 180.0 / std::numbers::pi;

// Reduce an edge direction to the (-90, 0] convention, swapping w/h when the
// given side is not the one that lands in range.
inline RotatedRect normalize_rect(double cx, double cy, double w, double h, double edge_deg) {
  double a = std::fmod(edge_deg, 180.0);
  if (a <= -90.0) a += 180.0;
  if (a > 90.0) a -= 180.0;
  if (a > 0.0) {
    a -= 90.0;
    std::swap(w, h);
  }
  constexpr double kSnap = 1e-12;
  if (a < -90.0 + kSnap) {
    a = 0.0;
    std::swap(w, h);
  }
  if (std::abs(a) < kSnap) a = 0.0;
  return {cx, cy, w, h, a};
}

inline std::array<Point2, 4> rect_corners(double cx, double cy, double w, double h,
                                          double angle_rad) {
  const Point2 c{cx, cy};
  const Point2 u{std::cos(angle_rad) * 0.5 * w, std::sin(angle_rad) * 0.5 * w};
  const Point2 n{-std::sin(angle_rad) * 0.5 * h, std::cos(angle_rad) * 0.5 * h};
  return {c - u - n, c + u - n, c + u + n, c - u + n};
}

}  // namespace detail

// Minimum-area enclosing rectangle by rotating calipers over the hull.
// Among equal-area candidates, prefer angle closest to 0, then larger w.
inline RotatedRect min_area_rect(std::span<const Point2> points) {
  if (!all_finite(points)) {
    throw Error(ErrorKind::InvalidInput, "min_area_rect: non-finite point");
  }
  const Polygon hull = convex_hull(points);
  if (hull.size() < 3 || polygon_area(hull) <= kAreaEpsilon) {
    throw Error(ErrorKind::DegenerateGeometry, "min_area_rect: points are collinear or too few");
  }
  RotatedRect best{};
  double best_area = std::numeric_limits<double>::infinity();
  const std::size_t n = hull.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 e = hull[(i + 1) % n] - hull[i];
    const double len = norm(e);
    if (len == 0.0) continue;
    const Point2 u = e * (1.0 / len);
    const Point2 nrm{-u.y, u.x};
    double umin = std::numeric_limits<double>::infinity(), umax = -umin;
    double nmin = umin, nmax = -umin;
    for (const Point2& p : hull) {
      const double pu = dot(p, u), pn = dot(p, nrm);
      umin = std::min(umin, pu);
      umax = std::max(umax, pu);
      nmin = std::min(nmin, pn);
      nmax = std::max(nmax, pn);
    }
    const double w = umax - umin, h = nmax - nmin;
    const double area = w * h;
    const Point2 c = u * (0.5 * (umin + umax)) + nrm * (0.5 * (nmin + nmax));
    const RotatedRect cand =
        detail::normalize_rect(c.x, c.y, w, h, std::atan2(u.y, u.x) * detail::kDeg);
    const double tol = 1e-9 * area;
    bool take = false;
    if (area < best_area - tol) {
      take = true;
    } else if (area <= best_area + tol) {
      const double da = std::abs(cand.angle), db = std::abs(best.angle);
      if (da < db - 1e-9) {
        take = true;
      } else if (da <= db + 1e-9 && cand.w > best.w + 1e-9) {
        take = true;
      }
    }
    if (take) {
      best = cand;
      best_area = std::min(best_area, area);
    }
  }
  return best;
}

inline void validate_rect(const RotatedRect& r) {
  if (!(std::isfinite(r.cx) && std::isfinite(r.cy) && std::isfinite(r.w) && std::isfinite(r.h) &&
        std::isfinite(r.angle))) {
    throw Error(ErrorKind::InvalidInput, "RotatedRect has non-finite fields");
  }
  if (!(r.w > 0.0 && r.h > 0.0)) {
    throw Error(ErrorKind::InvalidInput, "RotatedRect requires w > 0 and h > 0");
  }
  if (!(r.angle > -90.0 && r.angle <= 0.0)) {
    throw Error(ErrorKind::InvalidInput, "RotatedRect angle must lie in (-90, 0]");
  }
}

inline Quad rect_to_quad(const RotatedRect& r) {
  validate_rect(r);
  return canonicalize_quad(Quad{detail::rect_corners(r.cx, r.cy, r.w, r.h, r.angle / detail::kDeg)});
}

inline bool is_convex(std::span<const Point2> pts) {
  const std::size_t n = pts.size();
  if (n < 3) return false;
  bool pos = false, neg = false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 e1 = pts[(i + 1) % n] - pts[i];
    const Point2 e2 = pts[(i + 2) % n] - pts[(i + 1) % n];
    const double c = cross(e1, e2);
    const double tol = 1e-12 * norm(e1) * norm(e2);
    if (c > tol) pos = true;
    if (c < -tol) neg = true;
    if (pos && neg) return false;
  }
  return true;
}

namespace detail {

inline Polygon oriented_positive(std::span<const Point2> pts) {
  Polygon out(pts.begin(), pts.end());
  if (signed_area(out) < 0.0) std::reverse(out.begin(), out.end());
  return out;
}

// Sutherland-Hodgman. `clip` must be convex with positive signed area;
// `subject` may be any simple polygon (area of the result stays exact).
inline Polygon clip_polygon(const Polygon& subject, const Polygon& clip) {
  Polygon output = subject;
  const std::size_t m = clip.size();
  Polygon input;
  for (std::size_t j = 0; j < m && !output.empty(); ++j) {
    const Point2 a = clip[j];
    const Point2 edge = clip[(j + 1) % m] - a;
    input.swap(output);
    output.clear();
    const std::size_t n = input.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point2 s = input[(i + n - 1) % n];
      const Point2 e = input[i];
      const double ds = cross(edge, s - a);
      const double de = cross(edge, e - a);
      if (de >= 0.0) {
        if (ds < 0.0) output.push_back(s + (e - s) * (ds / (ds - de)));
        output.push_back(e);
      } else if (ds >= 0.0) {
        output.push_back(s + (e - s) * (ds / (ds - de)));
      }
    }
  }
  Polygon cleaned;
  cleaned.reserve(output.size());
  for (const Point2& p : output) {
    if (cleaned.empty() || std::abs(p.x - cleaned.back().x) > 1e-12 ||
        std::abs(p.y - cleaned.back().y) > 1e-12) {
      cleaned.push_back(p);
    }
  }
  while (cleaned.size() > 1 && std::abs(cleaned.front().x - cleaned.back().x) <= 1e-12 &&
         std::abs(cleaned.front().y - cleaned.back().y) <= 1e-12) {
    cleaned.pop_back();
  }
  if (cleaned.size() < 3) cleaned.clear();
  return cleaned;
}

struct Box2 {
  double xmin, ymin, xmax, ymax;
  bool overlaps(const Box2& o) const {
    return xmin <= o.xmax && o.xmin <= xmax && ymin <= o.ymax && o.ymin <= ymax;
  }
};

inline Box2 bounds(std::span<const Point2> pts) {
  Box2 b{pts[0].x, pts[0].y, pts[0].x, pts[0].y};
  for (const Point2& p : pts) {
    b.xmin = std::min(b.xmin, p.x);
    b.ymin = std::min(b.ymin, p.y);
    b.xmax = std::max(b.xmax, p.x);
    b.ymax = std::max(b.ymax, p.y);
  }
  return b;
}

// A convex quad with its orientation, area and bounds cached, so repeated
// IoU queries (NMS, matching) skip the per-call checks.
struct PreparedQuad {
  Polygon poly;
  double area = 0.0;
  Box2 box{};
};

inline PreparedQuad prepare_convex(const Quad& q) {
  if (!all_finite(q.points())) {
    throw Error(ErrorKind::InvalidInput, "quad has non-finite coordinates");
  }
  PreparedQuad p;
  p.poly = oriented_positive(q.points());
  p.area = std::abs(signed_area(p.poly));
  if (p.area <= kAreaEpsilon) {
    throw Error(ErrorKind::DegenerateGeometry, "quad area below epsilon");
  }
  if (!is_convex(p.poly)) throw Error(ErrorKind::NonConvexInput, "quad is not convex");
  p.box = bounds(p.poly);
  return p;
}

inline double iou_prepared(const PreparedQuad& a, const PreparedQuad& b) {
  if (!a.box.overlaps(b.box)) return 0.0;
  const Polygon inter = clip_polygon(a.poly, b.poly);
  if (inter.empty()) return 0.0;
  const double ia = std::abs(signed_area(inter));
  const double uni = a.area + b.area - ia;
  if (uni <= 0.0) return 0.0;
  return std::clamp(ia / uni, 0.0, 1.0);
}

}  // namespace detail

// Vertices of a ∩ b with positive signed area; empty when disjoint.
inline Polygon convex_intersection(const Quad& a, const Quad& b) {
  if (!is_convex(a.points()) || !is_convex(b.points())) {
    throw Error(ErrorKind::NonConvexInput, "convex_intersection requires convex quads");
  }
  if (std::abs(signed_area(a.points())) <= kAreaEpsilon ||
      std::abs(signed_area(b.points())) <= kAreaEpsilon) {
    return {};
  }
  return detail::clip_polygon(detail::oriented_positive(a.points()),
                              detail::oriented_positive(b.points()));
}

inline double iou_quad(const Quad& a, const Quad& b) {
  return detail::iou_prepared(detail::prepare_convex(a), detail::prepare_convex(b));
}

// IoU of an arbitrary simple polygon against a convex one. Used where the
// first shape comes from an optimizer and may be briefly non-convex.
inline double iou_with_convex(std::span<const Point2> subject, const Quad& convex) {
  const detail::PreparedQuad clip = detail::prepare_convex(convex);
  const double sa = std::abs(signed_area(subject));
  if (sa <= kAreaEpsilon) return 0.0;
  const Polygon inter = detail::clip_polygon(Polygon(subject.begin(), subject.end()), clip.poly);
  const double ia = inter.empty() ? 0.0 : std::abs(signed_area(inter));
  return std::clamp(ia / (sa + clip.area - ia), 0.0, 1.0);
}

inline Quad rotate_quad(const Quad& q, Point2 center, double phi) {
  const double c = std::cos(phi), s = std::sin(phi);
  Quad out;
  for (std::size_t i = 0; i < 4; ++i) {
    const Point2 d = q.v[i] - center;
    out.v[i] = {center.x + c * d.x - s * d.y, center.y + s * d.x + c * d.y};
  }
  return out;
}

inline Quad translate_quad(const Quad& q, Point2 delta) {
  Quad out = q;
  for (Point2& p : out.v) p = p + delta;
  return out;
}

}  // namespace polardet
