#pragma once

// Inference path: fuse semantic scores into the heatmap, pick local maxima,
// decode the polar heads at each peak, suppress overlaps with rotated NMS.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "polardet/codec.hpp"
#include "polardet/error.hpp"
#include "polardet/geometry.hpp"
#include "polardet/grid.hpp"
#include "polardet/targets.hpp"

namespace polardet {

struct Detection {
  int class_id = 0;
  double score = 0.0;
  Quad quad;
};

struct Peak {
  int class_id = 0;
  long row = 0;
  long col = 0;
  double score = 0.0;
};

struct PostprocessConfig {
  std::size_t top_k = 100;
  double threshold = 0.05;
  double nms_iou = 0.5;
  int stride = 4;
};

inline Grid fuse_center_semantic(const Grid& heatmap, const Grid& semantic) {
  require_same_shape(heatmap, semantic, "fuse_center_semantic");
  Grid out = heatmap;
  for (std::size_t i = 0; i < out.size(); ++i) out.data[i] *= semantic.data[i];
  return out;
}

// A peak is >= each of its (up to 8) neighbours and >= threshold. Ordered by
// descending score, ties by (class, row, col).
inline std::vector<Peak> extract_peaks(const Grid& scores, std::size_t top_k = 100,
                                       double threshold = 0.05) {
  if (top_k < 1) throw Error(ErrorKind::InvalidInput, "top_k must be >= 1");
  std::vector<Peak> peaks;
  const long h = static_cast<long>(scores.height), w = static_cast<long>(scores.width);
  for (std::size_t c = 0; c < scores.channels; ++c) {
    for (long y = 0; y < h; ++y) {
      for (long x = 0; x < w; ++x) {
        const double v = scores.at(c, static_cast<std::size_t>(y), static_cast<std::size_t>(x));
        if (v < threshold) continue;
        bool is_max = true;
        for (long dy = -1; dy <= 1 && is_max; ++dy) {
          for (long dx = -1; dx <= 1; ++dx) {
            const long ny = y + dy, nx = x + dx;
            if ((dy == 0 && dx == 0) || ny < 0 || nx < 0 || ny >= h || nx >= w) continue;
            if (scores.at(c, static_cast<std::size_t>(ny), static_cast<std::size_t>(nx)) > v) {
              is_max = false;
              break;
            }
          }
        }
        if (is_max) peaks.push_back({static_cast<int>(c), y, x, v});
      }
    }
  }
  // Scan order already is (class, row, col), so a stable sort keeps the tie rule.
  std::stable_sort(peaks.begin(), peaks.end(),
                   [](const Peak& a, const Peak& b) { return a.score > b.score; });
  if (peaks.size() > top_k) peaks.resize(top_k);
  return peaks;
}

struct DecodeResult {
  std::vector<Detection> detections;
  std::size_t skipped = 0;  // peaks whose heads did not decode to a valid quad
};

inline DecodeResult decode_detections(std::span<const Peak> peaks, const Grid& offset,
                                      const Grid& angles, const Grid& shorter, const Grid& ratios,
                                      int stride = 4) {
  if (offset.channels != 2 || angles.channels != 4 || shorter.channels != 1 ||
      ratios.channels != 4 || !offset.same_plane(angles) || !offset.same_plane(shorter) ||
      !offset.same_plane(ratios)) {
    throw Error(ErrorKind::InvalidInput, "decode_detections: regression maps misaligned");
  }
  DecodeResult out;
  for (const Peak& pk : peaks) {
    if (pk.row < 0 || pk.col < 0 || pk.row >= static_cast<long>(offset.height) ||
        pk.col >= static_cast<long>(offset.width)) {
      throw Error(ErrorKind::InvalidInput, "peak outside the regression maps");
    }
    try {
      const PolarCode code = code_at(offset, angles, shorter, ratios, pk.row, pk.col, stride);
      out.detections.push_back({pk.class_id, pk.score, decode_polar(code)});
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NonFiniteDiameter && e.kind() != ErrorKind::DegenerateGeometry) {
        throw;
      }
      ++out.skipped;
    }
  }
  return out;
}

// Greedy class-wise NMS. Returns indices into `dets` in keep order.
inline std::vector<std::size_t> rotated_nms_indices(std::span<const Detection> dets,
                                                    double iou_threshold) {
  if (!(iou_threshold >= 0.0 && iou_threshold <= 1.0)) {
    throw Error(ErrorKind::InvalidInput, "iou threshold must lie in [0,1]");
  }
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dets[a].score > dets[b].score;
  });
  std::vector<detail::PreparedQuad> prepared(dets.size());
  for (std::size_t i = 0; i < dets.size(); ++i) prepared[i] = detail::prepare_convex(dets[i].quad);

  std::vector<std::size_t> kept;
  for (std::size_t idx : order) {
    bool keep = true;
    for (std::size_t k : kept) {
      if (dets[k].class_id != dets[idx].class_id) continue;
      if (detail::iou_prepared(prepared[k], prepared[idx]) >= iou_threshold) {
        keep = false;
        break;
      }
    }
    if (keep) kept.push_back(idx);
  }
  return kept;
}

inline std::vector<Detection> rotated_nms(std::span<const Detection> dets, double iou_threshold) {
  std::vector<Detection> out;
  for (std::size_t i : rotated_nms_indices(dets, iou_threshold)) out.push_back(dets[i]);
  return out;
}

// Heatmap -> detections. Pass an empty semantic grid to skip fusion.
inline DecodeResult postprocess(const Grid& heatmap, const Grid& semantic, const Grid& offset,
                                const Grid& angles, const Grid& shorter, const Grid& ratios,
                                const PostprocessConfig& cfg = {}) {
  const Grid scores = semantic.size() == 0 ? heatmap : fuse_center_semantic(heatmap, semantic);
  const auto peaks = extract_peaks(scores, cfg.top_k, cfg.threshold);
  DecodeResult res = decode_detections(peaks, offset, angles, shorter, ratios, cfg.stride);
  res.detections = rotated_nms(res.detections, cfg.nms_iou);
  return res;
}

}  // namespace polardet
