#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "polardet/error.hpp"
#include "polardet/grid.hpp"
#include "polardet/targets.hpp"

namespace polardet {

inline constexpr double kProbEpsilon = 1e-7;

struct LossResult {
  double loss = 0.0;
  Grid grad;  // d loss / d pred, same shape as pred
};

// Penalty-reduced pixel focal loss over a heatmap. Cells whose target is
// exactly 1 are positives; the sum is divided by max(#positives, 1).
inline LossResult center_focal_loss(const Grid& pred, const Grid& target, double alpha = 2.0,
                                    double beta = 4.0) {
  require_same_shape(pred, target, "center_focal_loss");
  std::size_t positives = 0;
  for (double t : target.data) positives += t == 1.0 ? 1 : 0;
  const double scale = -1.0 / static_cast<double>(std::max<std::size_t>(positives, 1));

  LossResult out{0.0, Grid(pred.channels, pred.height, pred.width)};
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double raw = pred.data[i];
    const double p = std::clamp(raw, kProbEpsilon, 1.0 - kProbEpsilon);
    const bool clamped = p != raw;
    const double t = target.data[i];
    double term = 0.0, dterm = 0.0;
    if (t == 1.0) {
      const double q = 1.0 - p;
      term = std::pow(q, alpha) * std::log(p);
      dterm = -alpha * std::pow(q, alpha - 1.0) * std::log(p) + std::pow(q, alpha) / p;
    } else {
      const double wneg = std::pow(1.0 - t, beta);
      const double lq = std::log(1.0 - p);
      term = wneg * std::pow(p, alpha) * lq;
      dterm = wneg * (alpha * std::pow(p, alpha - 1.0) * lq - std::pow(p, alpha) / (1.0 - p));
    }
    sum += term;
    out.grad.data[i] = clamped ? 0.0 : scale * dterm;
  }
  out.loss = scale * sum;
  return out;
}

// Mean over masked cells of the summed |pred - target| across channels.
// mask is a single plane; an empty mask gives zero loss and gradient.
inline LossResult masked_l1_loss(const Grid& pred, const Grid& target, const Grid& mask) {
  require_same_shape(pred, target, "masked_l1_loss");
  if (mask.channels != 1 || !mask.same_plane(pred)) {
    throw Error(ErrorKind::InvalidInput, "masked_l1_loss: mask shape mismatch");
  }
  std::size_t n = 0;
  for (double m : mask.data) n += m != 0.0 ? 1 : 0;
  LossResult out{0.0, Grid(pred.channels, pred.height, pred.width)};
  if (n == 0) return out;
  const double inv = 1.0 / static_cast<double>(n);
  const std::size_t plane = pred.plane_size();
  double sum = 0.0;
  for (std::size_t c = 0; c < pred.channels; ++c) {
    for (std::size_t j = 0; j < plane; ++j) {
      if (mask.data[j] == 0.0) continue;
      const std::size_t i = c * plane + j;
      const double d = pred.data[i] - target.data[i];
      sum += std::abs(d);
      out.grad.data[i] = d > 0.0 ? inv : (d < 0.0 ? -inv : 0.0);
    }
  }
  out.loss = sum * inv;
  return out;
}

// Mean per-cell binary cross-entropy.
inline LossResult semantic_loss(const Grid& pred, const Grid& target) {
  require_same_shape(pred, target, "semantic_loss");
  LossResult out{0.0, Grid(pred.channels, pred.height, pred.width)};
  if (pred.size() == 0) return out;
  const double inv = 1.0 / static_cast<double>(pred.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double raw = pred.data[i];
    const double p = std::clamp(raw, kProbEpsilon, 1.0 - kProbEpsilon);
    const double t = target.data[i];
    sum += -(t * std::log(p) + (1.0 - t) * std::log(1.0 - p));
    out.grad.data[i] = p != raw ? 0.0 : inv * (-(t / p) + (1.0 - t) / (1.0 - p));
  }
  out.loss = sum * inv;
  return out;
}

struct HeadPredictions {
  Grid heatmap;
  Grid offset;
  Grid angles;
  Grid shorter;
  Grid ratios;
  Grid semantic;
};

struct LossWeights {
  double heatmap = 1.0;
  double offset = 1.0;
  double angles = 1.0;
  double shorter = 1.0;
  double ratios = 1.0;
  double semantic = 1.0;
};

struct LossBreakdown {
  double heatmap = 0.0;
  double offset = 0.0;
  double angles = 0.0;
  double shorter = 0.0;
  double ratios = 0.0;
  double semantic = 0.0;
  double total = 0.0;
};

inline LossBreakdown total_loss(const HeadPredictions& pred, const TargetMaps& target,
                                const LossWeights& w = {}) {
  for (double x : {w.heatmap, w.offset, w.angles, w.shorter, w.ratios, w.semantic}) {
    if (!(x >= 0.0)) throw Error(ErrorKind::InvalidInput, "loss weights must be >= 0");
  }
  LossBreakdown b;
  b.heatmap = center_focal_loss(pred.heatmap, target.heatmap).loss;
  b.offset = masked_l1_loss(pred.offset, target.offset, target.valid_mask).loss;
  b.angles = masked_l1_loss(pred.angles, target.angles, target.valid_mask).loss;
  b.shorter = masked_l1_loss(pred.shorter, target.shorter, target.valid_mask).loss;
  b.ratios = masked_l1_loss(pred.ratios, target.ratios, target.valid_mask).loss;
  b.semantic = semantic_loss(pred.semantic, target.semantic).loss;
  b.total = w.heatmap * b.heatmap + w.offset * b.offset + w.angles * b.angles +
            w.shorter * b.shorter + w.ratios * b.ratios + w.semantic * b.semantic;
  return b;
}

}  // namespace polardet
