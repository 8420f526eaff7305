#pragma once

// DOTA v1.0 annotation / Task1 result text formats and the large-image
// tiling protocol (overlapping square patches, merge back with NMS).

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "polardet/error.hpp"
#include "polardet/geometry.hpp"
#include "polardet/postprocess.hpp"

namespace polardet {

struct Annotation {
  Quad quad;
  std::string category;
  bool difficult = false;
};

struct ResultRecord {
  std::string image;
  double score = 0.0;
  Quad quad;
};

struct Window {
  int x0 = 0;
  int y0 = 0;
  int w = 0;
  int h = 0;
  friend bool operator==(const Window&, const Window&) = default;
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

inline double parse_real(std::string_view tok, std::size_t line_no) {
  double v = 0.0;
  const auto* first = tok.data();
  const auto* last = tok.data() + tok.size();
  if (!tok.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw Error(ErrorKind::ParseError,
                "line " + std::to_string(line_no) + ": not a number: '" + std::string(tok) + "'",
                line_no);
  }
  return v;
}

template <class Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0, pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::size_t end = nl == std::string_view::npos ? text.size() : nl;
    ++line_no;
    fn(text.substr(pos, end - pos), line_no);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
}

inline Quad parse_quad(std::span<const std::string_view> toks, std::size_t line_no) {
  Quad q;
  for (std::size_t i = 0; i < 4; ++i) {
    q[i] = {parse_real(toks[2 * i], line_no), parse_real(toks[2 * i + 1], line_no)};
  }
  return q;
}

inline std::string format_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

}  // namespace detail

// Lines: x1 y1 x2 y2 x3 y3 x4 y4 category difficult. "imagesource" and
// "gsd" header lines and blank lines are skipped.
inline std::vector<Annotation> parse_dota_annotation(std::string_view text) {
  std::vector<Annotation> out;
  detail::for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    const auto toks = detail::split_ws(line);
    if (toks.empty()) return;
    if (toks[0].starts_with("imagesource") || toks[0].starts_with("gsd")) return;
    if (toks.size() != 10) {
      throw Error(ErrorKind::ParseError,
                  "line " + std::to_string(line_no) + ": expected 8 coordinates, category, "
                  "difficult flag; got " + std::to_string(toks.size()) + " fields",
                  line_no);
    }
    Annotation a;
    a.quad = detail::parse_quad(std::span(toks).first(8), line_no);
    a.category = std::string(toks[8]);
    if (toks[9] == "0") {
      a.difficult = false;
    } else if (toks[9] == "1") {
      a.difficult = true;
    } else {
      throw Error(ErrorKind::ParseError,
                  "line " + std::to_string(line_no) + ": difficult flag must be 0 or 1", line_no);
    }
    out.push_back(std::move(a));
  });
  return out;
}

inline std::string format_dota_annotation(std::span<const Annotation> annots, int decimals = 6) {
  std::string out;
  for (const Annotation& a : annots) {
    for (const Point2& p : a.quad) {
      out += detail::format_fixed(p.x, decimals) + ' ' + detail::format_fixed(p.y, decimals) + ' ';
    }
    out += a.category;
    out += a.difficult ? " 1\n" : " 0\n";
  }
  return out;
}

inline std::string format_result_line(const std::string& image, double score, const Quad& q) {
  std::string line = image + ' ' + detail::format_fixed(score, 4);
  for (const Point2& p : q) {
    line += ' ' + detail::format_fixed(p.x, 2) + ' ' + detail::format_fixed(p.y, 2);
  }
  line += '\n';
  return line;
}

// Task1 lines: imgname score x1 y1 x2 y2 x3 y3 x4 y4.
inline std::vector<ResultRecord> parse_dota_results(std::string_view text) {
  std::vector<ResultRecord> out;
  detail::for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    const auto toks = detail::split_ws(line);
    if (toks.empty()) return;
    if (toks.size() != 10) {
      throw Error(ErrorKind::ParseError,
                  "line " + std::to_string(line_no) + ": expected image, score, 8 coordinates",
                  line_no);
    }
    ResultRecord r;
    r.image = std::string(toks[0]);
    r.score = detail::parse_real(toks[1], line_no);
    r.quad = detail::parse_quad(std::span(toks).subspan(2, 8), line_no);
    out.push_back(std::move(r));
  });
  return out;
}

struct ImageDetections {
  std::string image;
  std::vector<Detection> detections;
};

struct ClassFile {
  std::string filename;  // Task1_<class>.txt
  std::string content;
};

// One Task1 file per class, in class-name order, lines in input order.
inline std::vector<ClassFile> write_dota_results(std::span<const ImageDetections> images,
                                                 std::span<const std::string> class_names) {
  std::vector<ClassFile> files;
  for (const auto& name : class_names) files.push_back({"Task1_" + name + ".txt", {}});
  for (const ImageDetections& img : images) {
    for (const Detection& d : img.detections) {
      if (d.class_id < 0 || static_cast<std::size_t>(d.class_id) >= class_names.size()) {
        throw Error(ErrorKind::InvalidInput, "detection class id out of range");
      }
      files[static_cast<std::size_t>(d.class_id)].content +=
          format_result_line(img.image, d.score, d.quad);
    }
  }
  return files;
}

namespace detail {

inline std::vector<int> window_starts(int dim, int patch, int stride) {
  if (dim <= patch) return {0};
  std::vector<int> starts;
  for (int p = 0;; p += stride) {
    const int clamped = std::min(p, std::max(0, dim - patch));
    if (starts.empty() || starts.back() != clamped) starts.push_back(clamped);
    if (clamped + patch >= dim) break;
  }
  return starts;
}

}  // namespace detail

// Row-major (y outer, x inner) windows of size min(patch, dim).
inline std::vector<Window> split_windows(int width, int height, int patch = 1024,
                                         int overlap = 200) {
  if (!(patch > overlap) || overlap < 0) {
    throw Error(ErrorKind::InvalidInput, "patch must exceed overlap and overlap must be >= 0");
  }
  if (width <= 0 || height <= 0) throw Error(ErrorKind::InvalidInput, "image size must be positive");
  const int stride = patch - overlap;
  const auto xs = detail::window_starts(width, patch, stride);
  const auto ys = detail::window_starts(height, patch, stride);
  std::vector<Window> out;
  for (int y : ys) {
    for (int x : xs) out.push_back({x, y, std::min(patch, width), std::min(patch, height)});
  }
  return out;
}

// Translates into window coordinates. Instances with no overlap are dropped;
// those with covered fraction below keep_ratio are kept whole but marked
// difficult. Coordinates are not clamped to the window.
inline std::vector<Annotation> remap_annotations_to_window(std::span<const Annotation> annots,
                                                           const Window& win,
                                                           double keep_ratio = 0.7) {
  const Polygon window_poly{{static_cast<double>(win.x0), static_cast<double>(win.y0)},
                            {static_cast<double>(win.x0 + win.w), static_cast<double>(win.y0)},
                            {static_cast<double>(win.x0 + win.w), static_cast<double>(win.y0 + win.h)},
                            {static_cast<double>(win.x0), static_cast<double>(win.y0 + win.h)}};
  std::vector<Annotation> out;
  for (const Annotation& a : annots) {
    const double area = std::abs(signed_area(a.quad.points()));
    if (area <= kAreaEpsilon) continue;
    const Polygon inter =
        detail::clip_polygon(detail::oriented_positive(a.quad.points()), window_poly);
    const double covered = inter.empty() ? 0.0 : std::abs(signed_area(inter)) / area;
    if (covered <= 0.0) continue;
    Annotation moved = a;
    moved.quad = translate_quad(a.quad, {-static_cast<double>(win.x0), -static_cast<double>(win.y0)});
    if (covered < keep_ratio) moved.difficult = true;
    out.push_back(std::move(moved));
  }
  return out;
}

struct WindowDetections {
  Window window;
  std::vector<Detection> detections;
};

inline std::vector<Detection> merge_patch_detections(std::span<const WindowDetections> windows,
                                                     double iou_threshold = 0.3) {
  std::vector<Detection> all;
  for (const WindowDetections& wd : windows) {
    const Point2 shift{static_cast<double>(wd.window.x0), static_cast<double>(wd.window.y0)};
    for (Detection d : wd.detections) {
      d.quad = translate_quad(d.quad, shift);
      all.push_back(std::move(d));
    }
  }
  return rotated_nms(all, iou_threshold);
}

// Patch naming used by the split/merge tools: <image>__1__<x0>___<y0>.
inline std::string patch_name(const std::string& image, const Window& w) {
  return image + "__1__" + std::to_string(w.x0) + "___" + std::to_string(w.y0);
}

struct PatchOrigin {
  std::string image;
  int x0 = 0;
  int y0 = 0;
};

inline std::optional<PatchOrigin> parse_patch_name(std::string_view name) {
  const std::size_t yy = name.rfind("___");
  if (yy == std::string_view::npos) return std::nullopt;
  const std::size_t rate = name.rfind("__", yy == 0 ? 0 : yy - 1);
  if (rate == std::string_view::npos || rate >= yy) return std::nullopt;
  const std::size_t img_end = name.rfind("__", rate == 0 ? 0 : rate - 1);
  if (img_end == std::string_view::npos || img_end >= rate) return std::nullopt;
  PatchOrigin o;
  o.image = std::string(name.substr(0, img_end));
  const auto xs = name.substr(rate + 2, yy - rate - 2);
  const auto ys = name.substr(yy + 3);
  const auto rx = std::from_chars(xs.data(), xs.data() + xs.size(), o.x0);
  const auto ry = std::from_chars(ys.data(), ys.data() + ys.size(), o.y0);
  if (rx.ec != std::errc() || rx.ptr != xs.data() + xs.size() || ry.ec != std::errc() ||
      ry.ptr != ys.data() + ys.size() || o.image.empty()) {
    return std::nullopt;
  }
  return o;
}

}  // namespace polardet
