#pragma once

// Oriented-box AP / mAP: greedy VOC-style matching on quad IoU, 11-point
// (VOC07) or all-points interpolated precision.

#include <algorithm>
#include <cstddef>
#include <cstdio>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "polardet/dataio.hpp"
#include "polardet/error.hpp"
#include "polardet/geometry.hpp"
#include "polardet/parallel.hpp"

namespace polardet {

enum class ApMetric { Voc07, AllPoints };

inline ApMetric parse_metric(std::string_view name) {
  if (name == "voc07") return ApMetric::Voc07;
  if (name == "all") return ApMetric::AllPoints;
  throw Error(ErrorKind::InvalidInput, "metric must be voc07 or all");
}

struct GroundTruth {
  Quad quad;
  bool difficult = false;
};

using GroundTruthByImage = std::map<std::string, std::vector<GroundTruth>>;

struct MatchOutcome {
  double score = 0.0;
  bool is_tp = false;
};

struct MatchResult {
  std::vector<MatchOutcome> matches;  // ranked, ignored detections removed
  std::size_t n_positive = 0;
  std::size_t ignored = 0;
};

// Detections are ranked by descending score (ties keep input order). Each is
// matched to the unmatched gt of its image with the highest IoU >= threshold:
// a non-difficult gt makes it a TP and is consumed, a difficult gt makes it
// ignored. Anything else is a FP.
inline MatchResult match_detections(std::span<const ResultRecord> dets,
                                    const GroundTruthByImage& gts, double iou_threshold = 0.5) {
  MatchResult res;
  std::map<std::string, std::vector<detail::PreparedQuad>> prepared;
  std::map<std::string, std::vector<char>> used;
  for (const auto& [image, list] : gts) {
    auto& pq = prepared[image];
    for (const GroundTruth& g : list) {
      pq.push_back(detail::prepare_convex(g.quad));
      if (!g.difficult) ++res.n_positive;
    }
    used[image].assign(list.size(), 0);
  }

  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return dets[a].score > dets[b].score; });

  for (std::size_t idx : order) {
    const ResultRecord& d = dets[idx];
    const auto it = gts.find(d.image);
    if (it == gts.end() || it->second.empty()) {
      res.matches.push_back({d.score, false});
      continue;
    }
    const detail::PreparedQuad pd = detail::prepare_convex(d.quad);
    const auto& pq = prepared[d.image];
    auto& taken = used[d.image];
    double best = -1.0;
    std::size_t best_j = 0;
    for (std::size_t j = 0; j < pq.size(); ++j) {
      if (taken[j]) continue;
      const double iou = detail::iou_prepared(pd, pq[j]);
      if (iou > best) {
        best = iou;
        best_j = j;
      }
    }
    if (best >= iou_threshold) {
      if (it->second[best_j].difficult) {
        ++res.ignored;
        continue;
      }
      taken[best_j] = 1;
      res.matches.push_back({d.score, true});
    } else {
      res.matches.push_back({d.score, false});
    }
  }
  return res;
}

// `matches` must already be in rank order (as returned by match_detections).
inline double average_precision(std::span<const MatchOutcome> matches, std::size_t n_positive,
                                ApMetric metric = ApMetric::Voc07) {
  if (n_positive == 0) return 0.0;
  std::vector<double> recall, precision;
  recall.reserve(matches.size());
  precision.reserve(matches.size());
  std::size_t tp = 0, fp = 0;
  for (const MatchOutcome& m : matches) {
    (m.is_tp ? tp : fp) += 1;
    recall.push_back(static_cast<double>(tp) / static_cast<double>(n_positive));
    precision.push_back(static_cast<double>(tp) / static_cast<double>(tp + fp));
  }
  if (metric == ApMetric::Voc07) {
    double ap = 0.0;
    for (int i = 0; i <= 10; ++i) {
      const double t = i / 10.0;
      double p = 0.0;
      for (std::size_t k = 0; k < recall.size(); ++k) {
        if (recall[k] >= t) p = std::max(p, precision[k]);
      }
      ap += p;
    }
    return ap / 11.0;
  }
  std::vector<double> mrec{0.0}, mpre{0.0};
  mrec.insert(mrec.end(), recall.begin(), recall.end());
  mpre.insert(mpre.end(), precision.begin(), precision.end());
  mrec.push_back(1.0);
  mpre.push_back(0.0);
  for (std::size_t i = mpre.size() - 1; i-- > 0;) mpre[i] = std::max(mpre[i], mpre[i + 1]);
  double ap = 0.0;
  for (std::size_t i = 1; i < mrec.size(); ++i) {
    if (mrec[i] != mrec[i - 1]) ap += (mrec[i] - mrec[i - 1]) * mpre[i];
  }
  return ap;
}

struct ClassAp {
  std::string name;
  double ap = 0.0;
  std::size_t n_positive = 0;
  std::size_t n_detections = 0;
};

struct EvalReport {
  std::vector<ClassAp> per_class;
  double map = 0.0;
  std::size_t unknown_class_detections = 0;
};

struct EvalConfig {
  double iou = 0.5;
  ApMetric metric = ApMetric::Voc07;
  bool exclude_empty_classes = false;  // drop classes with no positives from the mean
  unsigned jobs = 1;
};

// gt_by_image: image -> annotations; dets_by_class: class name -> records.
// Detections under a class outside `classes` are counted and otherwise unused.
inline EvalReport evaluate_obb_map(const std::map<std::string, std::vector<Annotation>>& gt_by_image,
                                   const std::map<std::string, std::vector<ResultRecord>>& dets_by_class,
                                   std::span<const std::string> classes,
                                   const EvalConfig& cfg = {}) {
  EvalReport report;
  report.per_class.resize(classes.size());
  parallel_for(classes.size(), cfg.jobs, [&](std::size_t c) {
    const std::string& name = classes[c];
    GroundTruthByImage gts;
    for (const auto& [image, annots] : gt_by_image) {
      auto& list = gts[image];
      for (const Annotation& a : annots) {
        if (a.category == name) list.push_back({a.quad, a.difficult});
      }
    }
    static const std::vector<ResultRecord> kNone;
    const auto it = dets_by_class.find(name);
    const auto& dets = it == dets_by_class.end() ? kNone : it->second;
    const MatchResult m = match_detections(dets, gts, cfg.iou);
    report.per_class[c] = {name, average_precision(m.matches, m.n_positive, cfg.metric),
                           m.n_positive, dets.size()};
  });
  for (const auto& [name, dets] : dets_by_class) {
    if (std::find(classes.begin(), classes.end(), name) == classes.end()) {
      report.unknown_class_detections += dets.size();
    }
  }
  double sum = 0.0;
  std::size_t counted = 0;
  for (const ClassAp& c : report.per_class) {
    if (cfg.exclude_empty_classes && c.n_positive == 0) continue;
    sum += c.ap;
    ++counted;
  }
  report.map = counted == 0 ? 0.0 : sum / static_cast<double>(counted);
  return report;
}

inline std::string format_ap_csv(const EvalReport& r) {
  std::string out = "class,ap,n_positive,n_detections\n";
  char buf[256];
  for (const ClassAp& c : r.per_class) {
    std::snprintf(buf, sizeof buf, "%s,%.6f,%zu,%zu\n", c.name.c_str(), c.ap, c.n_positive,
                  c.n_detections);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "mAP,%.6f,,\n", r.map);
  out += buf;
  return out;
}

inline std::string format_ap_table(const EvalReport& r) {
  std::size_t width = 5;
  for (const ClassAp& c : r.per_class) width = std::max(width, c.name.size());
  const int w = static_cast<int>(width);
  char buf[512];
  std::string out;
  std::snprintf(buf, sizeof buf, "%-*s  %10s  %6s  %6s\n", w, "class", "AP", "npos", "ndet");
  out += buf;
  for (const ClassAp& c : r.per_class) {
    std::snprintf(buf, sizeof buf, "%-*s  %10.6f  %6zu  %6zu\n", w, c.name.c_str(), c.ap,
                  c.n_positive, c.n_detections);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "%-*s  %10.6f\n", w, "mAP", r.map);
  out += buf;
  return out;
}

}  // namespace polardet
