#pragma once

// Box parameterizations: the polar code (center, sub-cell offset, four polar
// angles, shorter MBR side, four shorter-side/diameter ratios) plus the
// five-parameter, eight-parameter and ablation variants it is compared with.
//
// Polar angle convention: 0 points along +y (image down) and the angle grows
// toward +x, theta = atan2(dx, dy) wrapped to [0, 2*pi).

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polardet/error.hpp"
#include "polardet/geometry.hpp"

namespace polardet {

inline constexpr double kRatioEpsilon = 1e-6;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct PolarCode {
  Point2 center;                  // MBR center, pixels
  Point2 offset;                  // fractional cell position at the output stride, [0,1)^2
  std::array<double, 4> theta{};  // ascending, [0, 2*pi)
  double s = 0.0;                 // shorter MBR side, pixels
  std::array<double, 4> r{};      // s / diameter, paired with theta
};

struct EightParam {
  Point2 center;
  std::array<Point2, 4> dv{};
};

enum class RepresentationKind {
  SingleAngle,
  PolarDirect,
  PolarAverage,
  PolarLongerRatio,
  PolarShorterRatio,
};

inline constexpr std::array<RepresentationKind, 5> kAllRepresentations = {
    RepresentationKind::SingleAngle, RepresentationKind::PolarDirect,
    RepresentationKind::PolarAverage, RepresentationKind::PolarLongerRatio,
    RepresentationKind::PolarShorterRatio};

inline std::string_view to_string(RepresentationKind k) {
  switch (k) {
    case RepresentationKind::SingleAngle: return "single_angle";
    case RepresentationKind::PolarDirect: return "polar_direct";
    case RepresentationKind::PolarAverage: return "polar_average";
    case RepresentationKind::PolarLongerRatio: return "polar_longer_ratio";
    case RepresentationKind::PolarShorterRatio: return "polar_shorter_ratio";
  }
  throw Error(ErrorKind::InvalidInput, "unknown representation kind");
}

inline RepresentationKind parse_representation(std::string_view name) {
  for (RepresentationKind k : kAllRepresentations) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorKind::InvalidInput, "unknown representation kind: " + std::string(name));
}

inline double wrap_two_pi(double a) {
  double w = std::fmod(a, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

inline double polar_angle_of(Point2 center, Point2 vertex) {
  const Point2 d = vertex - center;
  if (norm(d) <= 1e-12) {
    throw Error(ErrorKind::DegenerateGeometry, "vertex coincides with the center");
  }
  return wrap_two_pi(std::atan2(d.x, d.y));
}

namespace detail {

struct PolarSample {
  double theta;
  double diameter;
};

// Polar angles and diameters of the four vertices about `center`, sorted by
// angle. Equal angles mean the quad is not star-shaped about the center.
inline std::array<PolarSample, 4> polar_samples(const Quad& q, Point2 center) {
  std::array<PolarSample, 4> out{};
  for (std::size_t i = 0; i < 4; ++i) {
    out[i] = {polar_angle_of(center, q[i]), norm(q[i] - center)};
  }
  double scale = 0.0;
  for (const auto& sm : out) scale = std::max(scale, sm.diameter);
  for (const auto& sm : out) {
    if (!(sm.diameter > 1e-12 * scale)) {
      throw Error(ErrorKind::DegenerateGeometry, "a vertex coincides with the center");
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const PolarSample& a, const PolarSample& b) { return a.theta < b.theta; });
  for (std::size_t i = 0; i + 1 < 4; ++i) {
    if (out[i + 1].theta - out[i].theta <= 1e-12) {
      throw Error(ErrorKind::DegenerateGeometry, "two vertices share a polar angle");
    }
  }
  return out;
}

inline void require_stride(int stride) {
  if (stride < 1) throw Error(ErrorKind::InvalidInput, "stride must be >= 1");
}

inline Point2 cell_fraction(Point2 center, int stride) {
  const double fx = center.x / stride, fy = center.y / stride;
  return {fx - std::floor(fx), fy - std::floor(fy)};
}

// Builds a quad from four (angle, diameter) pairs. Angles are wrapped and
// sorted first, so unordered head outputs still give a simple polygon.
inline Quad quad_from_polar(Point2 center, std::array<double, 4> theta,
                            std::array<double, 4> diameter) {
  std::array<PolarSample, 4> s{};
  for (std::size_t i = 0; i < 4; ++i) {
    if (!std::isfinite(theta[i]) || !std::isfinite(diameter[i])) {
      throw Error(ErrorKind::NonFiniteDiameter, "non-finite polar component");
    }
    s[i] = {wrap_two_pi(theta[i]), diameter[i]};
  }
  std::stable_sort(s.begin(), s.end(),
                   [](const PolarSample& a, const PolarSample& b) { return a.theta < b.theta; });
  Quad q;
  for (std::size_t i = 0; i < 4; ++i) {
    q[i] = {center.x + s[i].diameter * std::sin(s[i].theta),
            center.y + s[i].diameter * std::cos(s[i].theta)};
  }
  return canonicalize_quad(q);
}

inline double checked_ratio(double r) {
  if (!std::isfinite(r) || r <= kRatioEpsilon) {
    throw Error(ErrorKind::NonFiniteDiameter, "ratio at or below epsilon");
  }
  return r;
}

}  // namespace detail

inline PolarCode encode_polar_with_rect(const Quad& q, const RotatedRect& mbr, int stride) {
  detail::require_stride(stride);
  PolarCode code;
  code.center = {mbr.cx, mbr.cy};
  code.offset = detail::cell_fraction(code.center, stride);
  code.s = std::min(mbr.w, mbr.h);
  const auto samples = detail::polar_samples(q, code.center);
  for (std::size_t p = 0; p < 4; ++p) {
    code.theta[p] = samples[p].theta;
    code.r[p] = code.s / samples[p].diameter;
  }
  return code;
}

inline PolarCode encode_polar(const Quad& q, int stride) {
  const Quad c = canonicalize_quad(q);
  return encode_polar_with_rect(c, min_area_rect(c.points()), stride);
}

// Center of a grid cell plus sub-cell offset, back at input scale.
inline Point2 grid_center(long col, long row, Point2 offset, int stride) {
  return {(static_cast<double>(col) + offset.x) * stride,
          (static_cast<double>(row) + offset.y) * stride};
}

inline Quad decode_polar(const PolarCode& code) {
  if (!(code.s > 0.0) || !std::isfinite(code.s)) {
    throw Error(ErrorKind::NonFiniteDiameter, "shorter side must be positive");
  }
  std::array<double, 4> d{};
  for (std::size_t p = 0; p < 4; ++p) d[p] = code.s / detail::checked_ratio(code.r[p]);
  return detail::quad_from_polar(code.center, code.theta, d);
}

// Lossy for non-rectangles: returns the minimum bounding rectangle.
inline RotatedRect quad_to_five(const Quad& q) { return min_area_rect(canonicalize_quad(q).points()); }

inline Quad five_to_quad(const RotatedRect& r) { return rect_to_quad(r); }

inline EightParam quad_to_eight(const Quad& q) {
  const Quad c = canonicalize_quad(q);
  const RotatedRect mbr = min_area_rect(c.points());
  EightParam e;
  e.center = {mbr.cx, mbr.cy};
  for (std::size_t i = 0; i < 4; ++i) e.dv[i] = c[i] - e.center;
  return e;
}

inline Quad eight_to_quad(const EightParam& e) {
  Quad q;
  for (std::size_t i = 0; i < 4; ++i) q[i] = e.center + e.dv[i];
  return q;
}

inline std::size_t variant_size(RepresentationKind kind) {
  switch (kind) {
    case RepresentationKind::SingleAngle: return 5;
    case RepresentationKind::PolarDirect: return 10;
    case RepresentationKind::PolarAverage:
    case RepresentationKind::PolarLongerRatio:
    case RepresentationKind::PolarShorterRatio: return 11;
  }
  throw Error(ErrorKind::InvalidInput, "unknown representation kind");
}

// Parameter vectors:
//   SingleAngle        cx cy w h angle(rad)
//   PolarDirect        cx cy t1..t4 d1..d4
//   PolarAverage       cx cy t1..t4 dmean k1..k4      (k = dmean / d)
//   PolarLongerRatio   cx cy t1..t4 L r1..r4          (L = longer side, r = L / d)
//   PolarShorterRatio  cx cy t1..t4 s r1..r4          (same as encode_polar)
inline std::vector<double> encode_variant(const Quad& q, RepresentationKind kind) {
  const Quad c = canonicalize_quad(q);
  const RotatedRect mbr = min_area_rect(c.points());
  if (kind == RepresentationKind::SingleAngle) {
    return {mbr.cx, mbr.cy, mbr.w, mbr.h, mbr.angle / detail::kDeg};
  }
  const Point2 center{mbr.cx, mbr.cy};
  const auto samples = detail::polar_samples(c, center);
  std::vector<double> out{center.x, center.y};
  for (const auto& sm : samples) out.push_back(sm.theta);
  switch (kind) {
    case RepresentationKind::PolarDirect:
      for (const auto& sm : samples) out.push_back(sm.diameter);
      break;
    case RepresentationKind::PolarAverage: {
      double mean = 0.0;
      for (const auto& sm : samples) mean += sm.diameter;
      mean /= 4.0;
      out.push_back(mean);
      for (const auto& sm : samples) out.push_back(mean / sm.diameter);
      break;
    }
    case RepresentationKind::PolarLongerRatio:
    case RepresentationKind::PolarShorterRatio: {
      const double len = kind == RepresentationKind::PolarLongerRatio ? std::max(mbr.w, mbr.h)
                                                                      : std::min(mbr.w, mbr.h);
      out.push_back(len);
      for (const auto& sm : samples) out.push_back(len / sm.diameter);
      break;
    }
    default:
      throw Error(ErrorKind::InvalidInput, "unknown representation kind");
  }
  return out;
}

inline Quad decode_variant(std::span<const double> vec, RepresentationKind kind) {
  if (vec.size() != variant_size(kind)) {
    throw Error(ErrorKind::InvalidInput, "parameter vector has the wrong length for " +
                                             std::string(to_string(kind)));
  }
  for (double x : vec) {
    if (!std::isfinite(x)) throw Error(ErrorKind::InvalidInput, "non-finite parameter");
  }
  const Point2 center{vec[0], vec[1]};
  if (kind == RepresentationKind::SingleAngle) {
    if (!(vec[2] > 0.0 && vec[3] > 0.0)) {
      throw Error(ErrorKind::DegenerateGeometry, "width and height must be positive");
    }
    return canonicalize_quad(Quad{detail::rect_corners(vec[0], vec[1], vec[2], vec[3], vec[4])});
  }
  const std::array<double, 4> theta{vec[2], vec[3], vec[4], vec[5]};
  std::array<double, 4> d{};
  switch (kind) {
    case RepresentationKind::PolarDirect:
      for (std::size_t p = 0; p < 4; ++p) {
        if (!(vec[6 + p] > kRatioEpsilon)) {
          throw Error(ErrorKind::NonFiniteDiameter, "diameter at or below epsilon");
        }
        d[p] = vec[6 + p];
      }
      break;
    case RepresentationKind::PolarAverage:
    case RepresentationKind::PolarLongerRatio:
    case RepresentationKind::PolarShorterRatio:
      if (!(vec[6] > 0.0)) throw Error(ErrorKind::NonFiniteDiameter, "length must be positive");
      for (std::size_t p = 0; p < 4; ++p) d[p] = vec[6] / detail::checked_ratio(vec[7 + p]);
      break;
    default:
      throw Error(ErrorKind::InvalidInput, "unknown representation kind");
  }
  return detail::quad_from_polar(center, theta, d);
}

}  // namespace polardet
