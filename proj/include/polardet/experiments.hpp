#pragma once

// Desk-scale optimization experiments over box parameterizations: IoU loss
// under a single-angle bias, the five-parameter boundary case, and a
// representation comparison by direct L1 gradient descent in parameter space.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "polardet/codec.hpp"
#include "polardet/error.hpp"
#include "polardet/geometry.hpp"
#include "polardet/parallel.hpp"

namespace polardet {

struct CurvePoint {
  double aspect_ratio = 1.0;
  double bias_deg = 0.0;
  double iou = 1.0;
};

// Unit-area rectangle (sqrt(ar) x 1/sqrt(ar)) against itself rotated about
// its center, for biases -bias_max..bias_max in `step` increments.
inline std::vector<CurvePoint> iou_angle_curve(std::span<const double> aspect_ratios,
                                               double bias_max, double step) {
  if (!(step > 0.0 && step <= bias_max)) {
    throw Error(ErrorKind::InvalidInput, "need 0 < step <= bias_max");
  }
  const long n = static_cast<long>(std::floor(bias_max / step + 1e-9));
  std::vector<CurvePoint> out;
  for (double ar : aspect_ratios) {
    if (!(ar >= 1.0)) throw Error(ErrorKind::InvalidInput, "aspect ratios must be >= 1");
    const double w = std::sqrt(ar), h = 1.0 / std::sqrt(ar);
    const Quad base = rect_to_quad({0.0, 0.0, w, h, 0.0});
    for (long k = -n; k <= n; ++k) {
      const double bias = static_cast<double>(k) * step;
      const Quad rotated = rotate_quad(base, {0.0, 0.0}, bias * std::numbers::pi / 180.0);
      out.push_back({ar, bias, iou_quad(base, rotated)});
    }
  }
  return out;
}

struct FitStep {
  int iteration = 0;
  double loss = 0.0;
  double iou = 0.0;
};

struct FitTrace {
  RepresentationKind kind = RepresentationKind::PolarShorterRatio;
  std::vector<FitStep> steps;
  std::optional<int> converged_at;  // first iteration with iou >= FitConfig::converge_iou

  double final_iou() const { return steps.empty() ? 0.0 : steps.back().iou; }
};

struct FitConfig {
  double lr = 0.01;
  int max_iter = 2000;
  double converge_iou = 0.9;
};

namespace detail {

inline constexpr double kMinLength = 1e-3;

// Keeps a parameter vector decodable: lengths and ratios stay positive,
// shorter-side ratios stay within the rectangle bound sqrt(2).
inline void clamp_params(std::vector<double>& p, RepresentationKind kind) {
  const double min_ratio = 2.0 * kRatioEpsilon;
  switch (kind) {
    case RepresentationKind::SingleAngle:
      p[2] = std::max(p[2], kMinLength);
      p[3] = std::max(p[3], kMinLength);
      break;
    case RepresentationKind::PolarDirect:
      for (std::size_t i = 6; i < 10; ++i) p[i] = std::max(p[i], kMinLength);
      break;
    case RepresentationKind::PolarAverage:
    case RepresentationKind::PolarLongerRatio:
      p[6] = std::max(p[6], kMinLength);
      for (std::size_t i = 7; i < 11; ++i) p[i] = std::max(p[i], min_ratio);
      break;
    case RepresentationKind::PolarShorterRatio:
      p[6] = std::max(p[6], kMinLength);
      for (std::size_t i = 7; i < 11; ++i) p[i] = std::clamp(p[i], min_ratio, std::numbers::sqrt2);
      break;
  }
}

inline double decoded_iou(std::span<const double> p, RepresentationKind kind, const Quad& gt) {
  try {
    const Quad q = decode_variant(p, kind);
    return iou_with_convex(q.points(), gt);
  } catch (const Error&) {
    return 0.0;
  }
}

}  // namespace detail

// Plain gradient descent on the L1 distance between the parameter vector and
// the encoding of `gt`; the subgradient at an exact tie is 0. Angles are
// optimized unwrapped and only wrapped when decoding.
inline FitTrace fit_representation(const Quad& gt, RepresentationKind kind,
                                   std::span<const double> init, const FitConfig& cfg = {}) {
  if (init.size() != variant_size(kind)) {
    throw Error(ErrorKind::InvalidInput, "init vector has the wrong length");
  }
  if (!(cfg.lr > 0.0) || cfg.max_iter < 0) {
    throw Error(ErrorKind::InvalidInput, "lr must be > 0 and max_iter >= 0");
  }
  const std::vector<double> target = encode_variant(gt, kind);
  std::vector<double> p(init.begin(), init.end());
  for (double x : p) {
    if (!std::isfinite(x)) throw Error(ErrorKind::InvalidInput, "init has non-finite values");
  }
  detail::clamp_params(p, kind);

  FitTrace trace;
  trace.kind = kind;
  trace.steps.reserve(static_cast<std::size_t>(cfg.max_iter) + 1);
  for (int it = 0;; ++it) {
    double loss = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) loss += std::abs(p[i] - target[i]);
    const double iou = detail::decoded_iou(p, kind, gt);
    trace.steps.push_back({it, loss, iou});
    if (!trace.converged_at && iou >= cfg.converge_iou) trace.converged_at = it;
    if (it == cfg.max_iter) break;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double d = p[i] - target[i];
      p[i] -= cfg.lr * (d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0));
    }
    detail::clamp_params(p, kind);
  }
  return trace;
}

// Five-parameter boundary setup: gt at -10 deg with w the long side, start
// with w/h swapped at -80 deg. Geometrically the start is the gt turned by
// 20 deg, while its five parameters are far from the gt's.
struct BoundaryCase {
  RotatedRect gt;
  RotatedRect init;
};

inline BoundaryCase make_boundary_case(Point2 center, double long_side, double short_side) {
  return {{center.x, center.y, long_side, short_side, -10.0},
          {center.x, center.y, short_side, long_side, -80.0}};
}

struct BoundaryOutcome {
  FitTrace single_angle;
  FitTrace polar;
  // Polar reached the IoU bar at a strictly earlier iteration.
  bool polar_faster() const {
    if (!polar.converged_at) return false;
    return !single_angle.converged_at || *polar.converged_at < *single_angle.converged_at;
  }
};

inline BoundaryOutcome run_boundary_case(const BoundaryCase& bc, const FitConfig& cfg = {}) {
  const Quad gt = rect_to_quad(bc.gt);
  const Quad start = rect_to_quad(bc.init);
  BoundaryOutcome out;
  out.single_angle = fit_representation(
      gt, RepresentationKind::SingleAngle, encode_variant(start, RepresentationKind::SingleAngle), cfg);
  out.polar = fit_representation(gt, RepresentationKind::PolarShorterRatio,
                                 encode_variant(start, RepresentationKind::PolarShorterRatio), cfg);
  return out;
}

// Uniform doubles from a 64-bit Mersenne Twister, built by hand so the
// stream does not depend on the standard library's distribution code.
class SweepRng {
 public:
  explicit SweepRng(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

 private:
  std::mt19937_64 engine_;
};

struct BoundarySweepConfig {
  std::size_t n_cases = 50;
  std::uint64_t seed = 0;
  double min_short = 8.0;
  double max_short = 64.0;
  double min_ar = 2.0;
  double max_ar = 8.0;
};

inline std::vector<BoundaryCase> boundary_sweep(const BoundarySweepConfig& cfg) {
  SweepRng rng(cfg.seed);
  std::vector<BoundaryCase> out;
  for (std::size_t i = 0; i < cfg.n_cases; ++i) {
    const double ar = rng.uniform(cfg.min_ar, cfg.max_ar);
    const double s = rng.uniform(cfg.min_short, cfg.max_short);
    const Point2 c{rng.uniform(100.0, 900.0), rng.uniform(100.0, 900.0)};
    out.push_back(make_boundary_case(c, ar * s, s));
  }
  return out;
}

struct SweepConfig {
  std::size_t n_samples = 500;
  std::uint64_t seed = 0;
  double min_side = 4.0;
  double max_side = 300.0;
  double max_ar = 10.0;
  double center_shift = 0.1;     // fraction of the shorter side, per axis
  double max_rotation_deg = 20.0;
  double min_scale = 0.8;
  double max_scale = 1.25;
  double aspect_jitter = 0.15;   // longer side scaled by 1 +- jitter
};

struct SweepSample {
  Quad gt;
  Quad init;
};

// Random rectangles with both sides in [min_side, max_side] and aspect
// ratio in [1, max_ar], each paired with a perturbed starting box.
inline std::vector<SweepSample> comparison_sweep(const SweepConfig& cfg) {
  SweepRng rng(cfg.seed);
  std::vector<SweepSample> out;
  out.reserve(cfg.n_samples);
  for (std::size_t i = 0; i < cfg.n_samples; ++i) {
    const double ar = rng.uniform(1.0, cfg.max_ar);
    const double s = rng.uniform(cfg.min_side, std::max(cfg.min_side, cfg.max_side / ar));
    const double a = -rng.uniform(0.0, 90.0);
    const Point2 c{rng.uniform(0.0, 1024.0), rng.uniform(0.0, 1024.0)};
    const Quad gt = rect_to_quad({c.x, c.y, ar * s, s, a});

    const double dx = rng.uniform(-cfg.center_shift, cfg.center_shift) * s;
    const double dy = rng.uniform(-cfg.center_shift, cfg.center_shift) * s;
    const double rot = rng.uniform(-cfg.max_rotation_deg, cfg.max_rotation_deg);
    const double scale = rng.uniform(cfg.min_scale, cfg.max_scale);
    const double aspect = rng.uniform(1.0 - cfg.aspect_jitter, 1.0 + cfg.aspect_jitter);
    const Quad init = canonicalize_quad(Quad{detail::rect_corners(
        c.x + dx, c.y + dy, ar * s * scale * aspect, s * scale, (a + rot) / detail::kDeg)});
    out.push_back({gt, init});
  }
  return out;
}

struct ComparisonRow {
  RepresentationKind kind = RepresentationKind::PolarShorterRatio;
  double mean_final_iou = 0.0;
  double mean_converged_at = std::numeric_limits<double>::quiet_NaN();  // over converged runs
  double fail_rate = 0.0;
};

inline std::vector<ComparisonRow> compare_representations(const SweepConfig& sweep,
                                                          const FitConfig& fit = {},
                                                          unsigned jobs = 1) {
  if (sweep.n_samples == 0) return {};
  const std::vector<SweepSample> samples = comparison_sweep(sweep);
  constexpr std::size_t kKinds = kAllRepresentations.size();
  struct Slot {
    double final_iou = 0.0;
    std::optional<int> converged_at;
  };
  std::vector<Slot> slots(samples.size() * kKinds);
  parallel_for(slots.size(), jobs, [&](std::size_t i) {
    const SweepSample& sm = samples[i / kKinds];
    const RepresentationKind kind = kAllRepresentations[i % kKinds];
    const FitTrace t = fit_representation(sm.gt, kind, encode_variant(sm.init, kind), fit);
    slots[i] = {t.final_iou(), t.converged_at};
  });

  std::vector<ComparisonRow> rows;
  for (std::size_t k = 0; k < kKinds; ++k) {
    ComparisonRow row;
    row.kind = kAllRepresentations[k];
    double iou_sum = 0.0, conv_sum = 0.0;
    std::size_t conv_n = 0;
    for (std::size_t s = 0; s < samples.size(); ++s) {
      const Slot& slot = slots[s * kKinds + k];
      iou_sum += slot.final_iou;
      if (slot.converged_at) {
        conv_sum += *slot.converged_at;
        ++conv_n;
      }
    }
    const double n = static_cast<double>(samples.size());
    row.mean_final_iou = iou_sum / n;
    if (conv_n > 0) row.mean_converged_at = conv_sum / static_cast<double>(conv_n);
    row.fail_rate = static_cast<double>(samples.size() - conv_n) / n;
    rows.push_back(row);
  }
  return rows;
}

inline std::string format_curve_csv(std::span<const CurvePoint> pts) {
  std::string out = "ar,bias_deg,iou\n";
  char buf[128];
  for (const CurvePoint& p : pts) {
    std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f\n", p.aspect_ratio, p.bias_deg, p.iou);
    out += buf;
  }
  return out;
}

inline std::string format_comparison_csv(std::span<const ComparisonRow> rows) {
  std::string out = "kind,mean_final_iou,mean_converged_at,fail_rate\n";
  char buf[256];
  for (const ComparisonRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%.6f,%.6f,%.6f\n", std::string(to_string(r.kind)).c_str(),
                  r.mean_final_iou, r.mean_converged_at, r.fail_rate);
    out += buf;
  }
  return out;
}

}  // namespace polardet
