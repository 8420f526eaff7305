#pragma once

// Command-line front end. cli_dispatch() is the whole program; main() only
// forwards argv so tests can drive every subcommand in-process.
//
// Exit codes: 0 ok, 1 usage, 2 data/parse, 3 numerical/geometry.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "polardet/polardet.hpp"

namespace polardet::cli {

namespace fs = std::filesystem;

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitNumeric = 3;

struct GlobalOptions {
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  bool quiet = false;
};

namespace detail {

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::ParseError, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

// Writes to `path`, or to `out` when path is empty.
inline void emit(const std::string& path, std::string_view content, std::ostream& out) {
  if (path.empty()) {
    out << content;
  } else {
    write_file(path, content);
  }
}

inline std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

inline std::string fmt10(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10f", v);
  return buf;
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

inline std::vector<fs::path> sorted_files(const fs::path& dir, std::string_view prefix,
                                          std::string_view ext) {
  if (!fs::is_directory(dir)) throw Error(ErrorKind::ParseError, "not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    const std::string name = e.path().filename().string();
    if (name.starts_with(prefix) && e.path().extension() == ext) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

inline std::string class_of_task1(const fs::path& p) {
  return p.stem().string().substr(std::string_view("Task1_").size());
}

// --- encode / decode -------------------------------------------------------

inline const char* kCodeHeader =
    "cx,cy,dx,dy,theta1,theta2,theta3,theta4,s,r1,r2,r3,r4,category,difficult\n";

inline std::string encode_annotations(std::string_view text, int stride) {
  std::string out = kCodeHeader;
  for (const Annotation& a : parse_dota_annotation(text)) {
    const PolarCode c = encode_polar(a.quad, stride);
    std::string line = fmt10(c.center.x) + ',' + fmt10(c.center.y) + ',' + fmt10(c.offset.x) +
                       ',' + fmt10(c.offset.y);
    for (double t : c.theta) line += ',' + fmt10(t);
    line += ',' + fmt10(c.s);
    for (double r : c.r) line += ',' + fmt10(r);
    line += ',' + a.category + (a.difficult ? ",1\n" : ",0\n");
    out += line;
  }
  return out;
}

inline std::string decode_codes(std::string_view text) {
  std::vector<Annotation> annots;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.starts_with("cx,")) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string tok;
    while (std::getline(ls, tok, ',')) f.push_back(tok);
    if (f.size() != 15) {
      throw Error(ErrorKind::ParseError,
                  "line " + std::to_string(line_no) + ": expected 15 comma-separated fields",
                  line_no);
    }
    PolarCode c;
    auto num = [&](std::size_t i) { return polardet::detail::parse_real(f[i], line_no); };
    c.center = {num(0), num(1)};
    c.offset = {num(2), num(3)};
    for (std::size_t p = 0; p < 4; ++p) c.theta[p] = num(4 + p);
    c.s = num(8);
    for (std::size_t p = 0; p < 4; ++p) c.r[p] = num(9 + p);
    if (f[14] != "0" && f[14] != "1") {
      throw Error(ErrorKind::ParseError,
                  "line " + std::to_string(line_no) + ": difficult flag must be 0 or 1", line_no);
    }
    annots.push_back({decode_polar(c), f[13], f[14] == "1"});
  }
  return format_dota_annotation(annots);
}

// --- targets dump ------------------------------------------------------------

inline void append_f32(std::string& out, const Grid& g) {
  for (double v : g.data) {
    auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(v));
    if constexpr (std::endian::native == std::endian::big) {
      bits = ((bits & 0xFFu) << 24) | ((bits & 0xFF00u) << 8) | ((bits >> 8) & 0xFF00u) |
             (bits >> 24);
    }
    char bytes[4];
    std::memcpy(bytes, &bits, 4);
    out.append(bytes, 4);
  }
}

// JSON header line, then float32 little-endian maps in the order
// heatmap, offset, angles, shorter, ratios, semantic.
inline std::string dump_targets(const TargetMaps& t, const std::vector<std::string>& classes,
                                int width, int height) {
  nlohmann::ordered_json header;
  header["format"] = "polardet-targets";
  header["version"] = 1;
  header["width"] = width;
  header["height"] = height;
  header["stride"] = t.stride;
  header["classes"] = classes;
  header["dtype"] = "float32";
  header["byte_order"] = "little";
  header["skipped"] = t.skipped;
  const std::pair<const char*, const Grid*> maps[] = {
      {"heatmap", &t.heatmap}, {"offset", &t.offset},   {"angles", &t.angles},
      {"shorter", &t.shorter}, {"ratios", &t.ratios},   {"semantic", &t.semantic}};
  auto arr = nlohmann::ordered_json::array();
  for (const auto& [name, g] : maps) {
    arr.push_back({{"name", name}, {"shape", {g->channels, g->height, g->width}}});
  }
  header["maps"] = arr;
  std::string out = header.dump() + "\n";
  for (const auto& [name, g] : maps) append_f32(out, *g);
  return out;
}

// --- nms ---------------------------------------------------------------------

inline std::string nms_results(std::string_view text, double iou, unsigned jobs) {
  const auto records = parse_dota_results(text);
  std::vector<std::string> images;
  std::map<std::string, std::vector<Detection>> by_image;
  for (const ResultRecord& r : records) {
    auto [it, inserted] = by_image.try_emplace(r.image);
    if (inserted) images.push_back(r.image);
    it->second.push_back({0, r.score, r.quad});
  }
  std::vector<std::string> chunks(images.size());
  parallel_for(images.size(), jobs, [&](std::size_t i) {
    for (const Detection& d : rotated_nms(by_image.at(images[i]), iou)) {
      chunks[i] += format_result_line(images[i], d.score, d.quad);
    }
  });
  std::string out;
  for (const auto& c : chunks) out += c;
  return out;
}

// --- split / merge -----------------------------------------------------------

struct ImageSize {
  std::string name;
  int width = 0;
  int height = 0;
};

inline std::vector<ImageSize> parse_sizes(std::string_view text) {
  std::vector<ImageSize> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.starts_with("image,")) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string tok;
    while (std::getline(ls, tok, ',')) f.push_back(tok);
    if (f.size() != 3) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": expected image,width,height",
                  line_no);
    }
    const double w = polardet::detail::parse_real(f[1], line_no);
    const double h = polardet::detail::parse_real(f[2], line_no);
    out.push_back({f[0], static_cast<int>(w), static_cast<int>(h)});
  }
  return out;
}

struct SplitOutput {
  std::string windows_csv;
  std::vector<std::pair<std::string, std::string>> patch_files;  // name, content
};

inline SplitOutput split_image(const ImageSize& img, const std::vector<Annotation>* annots,
                               int patch, int overlap) {
  SplitOutput out;
  for (const Window& w : split_windows(img.width, img.height, patch, overlap)) {
    out.windows_csv += img.name + ',' + std::to_string(w.x0) + ',' + std::to_string(w.y0) + ',' +
                       std::to_string(w.w) + ',' + std::to_string(w.h) + '\n';
    if (annots) {
      out.patch_files.emplace_back(patch_name(img.name, w) + ".txt",
                                   format_dota_annotation(remap_annotations_to_window(*annots, w)));
    }
  }
  return out;
}

}  // namespace detail

inline int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"polardet: polar oriented-box toolkit", "polardet"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--seed", g.seed, "Seed for randomized experiments");
  app.add_option("--jobs", g.jobs, "Worker threads (output is identical for any value)")
      ->check(CLI::Range(1u, 1024u));
  app.add_flag("--quiet", g.quiet, "Suppress informational messages");

  // encode
  std::string enc_in, enc_out;
  int enc_stride = 4;
  auto* enc = app.add_subcommand("encode", "DOTA annotation file -> polar code CSV");
  enc->add_option("input", enc_in, "Annotation file")->required();
  enc->add_option("-o,--output", enc_out, "Output CSV (default stdout)");
  enc->add_option("--stride", enc_stride, "Output stride for the offset columns")->check(CLI::PositiveNumber);

  // decode
  std::string dec_in, dec_out;
  auto* dec = app.add_subcommand("decode", "Polar code CSV -> DOTA annotation file");
  dec->add_option("input", dec_in, "Polar code CSV")->required();
  dec->add_option("-o,--output", dec_out, "Output file (default stdout)");

  // iou
  std::vector<double> iou_vals;
  auto* iou = app.add_subcommand("iou", "IoU of two quads given as 8 reals each");
  iou->add_option("coords", iou_vals, "x1 y1 ... x4 y4 for quad A, then quad B")
      ->required()
      ->expected(16);

  // nms
  std::string nms_in, nms_out;
  double nms_iou = 0.5;
  auto* nms = app.add_subcommand("nms", "Rotated NMS over a Task1 result file, per image");
  nms->add_option("input", nms_in, "Task1 result file")->required();
  nms->add_option("--iou-thresh", nms_iou, "Suppression IoU")->check(CLI::Range(0.0, 1.0));
  nms->add_option("-o,--output", nms_out, "Output file (default stdout)");

  // targets
  std::string tg_in, tg_out, tg_classes;
  int tg_w = 0, tg_h = 0, tg_stride = 4;
  auto* tg = app.add_subcommand("targets", "Annotation file -> binary target-map dump");
  tg->add_option("input", tg_in, "Annotation file")->required();
  tg->add_option("--width", tg_w, "Image width")->required()->check(CLI::PositiveNumber);
  tg->add_option("--height", tg_h, "Image height")->required()->check(CLI::PositiveNumber);
  tg->add_option("--classes", tg_classes, "Comma-separated class names")->required();
  tg->add_option("--stride", tg_stride, "Output stride")->check(CLI::PositiveNumber);
  tg->add_option("-o,--output", tg_out, "Output dump file")->required();

  // split
  std::string sp_name = "image", sp_ann, sp_sizes, sp_ann_dir, sp_out;
  int sp_w = 0, sp_h = 0, sp_patch = 1024, sp_overlap = 200;
  auto* sp = app.add_subcommand("split", "Tile images into overlapping patches");
  sp->add_option("--width", sp_w, "Image width (single image)");
  sp->add_option("--height", sp_h, "Image height (single image)");
  sp->add_option("--name", sp_name, "Image name (single image)");
  sp->add_option("--annotations", sp_ann, "Annotation file (single image)");
  sp->add_option("--sizes", sp_sizes, "CSV image,width,height (many images)");
  sp->add_option("--ann-dir", sp_ann_dir, "Directory of <image>.txt annotations (many images)");
  sp->add_option("--patch", sp_patch, "Patch size");
  sp->add_option("--overlap", sp_overlap, "Overlap between patches");
  sp->add_option("-o,--output", sp_out, "Output directory (default: windows CSV on stdout)");

  // merge
  std::string mg_in, mg_out;
  double mg_iou = 0.3;
  auto* mg = app.add_subcommand("merge", "Merge per-patch Task1 results back to full images");
  mg->add_option("input", mg_in, "Directory of per-patch Task1_<class>.txt files")->required();
  mg->add_option("-o,--output", mg_out, "Output directory")->required();
  mg->add_option("--iou-thresh", mg_iou, "Merge NMS IoU")->check(CLI::Range(0.0, 1.0));

  // eval
  std::string ev_gt, ev_det, ev_metric = "voc07", ev_classes, ev_csv;
  double ev_iou = 0.5;
  bool ev_exclude = false;
  auto* ev = app.add_subcommand("eval", "Per-class AP and mAP of Task1 results");
  ev->add_option("--gt-dir", ev_gt, "Directory of <image>.txt annotations")->required();
  ev->add_option("--det-dir", ev_det, "Directory of Task1_<class>.txt results")->required();
  ev->add_option("--metric", ev_metric, "voc07 or all")->check(CLI::IsMember({"voc07", "all"}));
  ev->add_option("--iou", ev_iou, "Match IoU")->check(CLI::Range(0.0, 1.0));
  ev->add_option("--classes", ev_classes, "Comma-separated classes (default: gt categories)");
  ev->add_option("--csv", ev_csv, "Also write the AP table as CSV");
  ev->add_flag("--exclude-empty", ev_exclude, "Leave classes without positives out of mAP");

  // curves
  std::string cv_ar = "1,3,5,8", cv_out;
  double cv_max = 45.0, cv_step = 1.0;
  auto* cv = app.add_subcommand("curves", "IoU vs single-angle bias table");
  cv->add_option("--ar", cv_ar, "Comma-separated aspect ratios");
  cv->add_option("--bias-max", cv_max, "Largest |bias| in degrees");
  cv->add_option("--step", cv_step, "Bias step in degrees");
  cv->add_option("-o,--output", cv_out, "Output CSV (default stdout)");

  // fit
  std::size_t ft_samples = 500, ft_boundary = 0;
  FitConfig ft_cfg;
  std::string ft_out;
  auto* ft = app.add_subcommand("fit", "Representation comparison by direct gradient descent");
  ft->add_option("--samples", ft_samples, "Number of random rectangles");
  ft->add_option("--boundary", ft_boundary, "Run N boundary-case variants instead");
  ft->add_option("--lr", ft_cfg.lr, "Learning rate")->check(CLI::PositiveNumber);
  ft->add_option("--max-iter", ft_cfg.max_iter, "Iteration budget")->check(CLI::NonNegativeNumber);
  ft->add_option("-o,--output", ft_out, "Output CSV (default stdout)");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  auto info = [&](const std::string& msg) {
    if (!g.quiet) err << msg << '\n';
  };

  try {
    if (*enc) {
      detail::emit(enc_out, detail::encode_annotations(detail::read_file(enc_in), enc_stride), out);
    } else if (*dec) {
      detail::emit(dec_out, detail::decode_codes(detail::read_file(dec_in)), out);
    } else if (*iou) {
      Quad a, b;
      for (std::size_t i = 0; i < 4; ++i) {
        a[i] = {iou_vals[2 * i], iou_vals[2 * i + 1]};
        b[i] = {iou_vals[8 + 2 * i], iou_vals[8 + 2 * i + 1]};
      }
      out << detail::fmt6(iou_quad(a, b)) << '\n';
    } else if (*nms) {
      detail::emit(nms_out, detail::nms_results(detail::read_file(nms_in), nms_iou, g.jobs), out);
    } else if (*tg) {
      const auto classes = detail::split_list(tg_classes);
      std::vector<LabeledQuad> objs;
      for (const Annotation& a : parse_dota_annotation(detail::read_file(tg_in))) {
        const auto it = std::find(classes.begin(), classes.end(), a.category);
        if (it == classes.end()) {
          throw Error(ErrorKind::ParseError, "category not in --classes: " + a.category);
        }
        objs.push_back({a.quad, static_cast<int>(it - classes.begin())});
      }
      const TargetMaps t =
          build_targets(objs, tg_w, tg_h, static_cast<int>(classes.size()), tg_stride);
      if (t.skipped > 0) info("targets: skipped " + std::to_string(t.skipped) + " objects");
      detail::write_file(tg_out, detail::dump_targets(t, classes, tg_w, tg_h));
    } else if (*sp) {
      if (!(sp_patch > sp_overlap) || sp_overlap < 0) {
        err << "split: --patch must be greater than --overlap (and overlap >= 0)\n"
            << app.get_subcommand("split")->help();
        return kExitUsage;
      }
      std::vector<detail::ImageSize> images;
      const bool many = !sp_sizes.empty();
      if (many) {
        images = detail::parse_sizes(detail::read_file(sp_sizes));
      } else {
        if (sp_w <= 0 || sp_h <= 0) {
          err << "split: give --width/--height or --sizes\n";
          return kExitUsage;
        }
        images.push_back({sp_name, sp_w, sp_h});
      }
      std::vector<detail::SplitOutput> parts(images.size());
      parallel_for(images.size(), g.jobs, [&](std::size_t i) {
        std::vector<Annotation> annots;
        const std::vector<Annotation>* ap = nullptr;
        if (many && !sp_ann_dir.empty()) {
          annots = parse_dota_annotation(
              detail::read_file(fs::path(sp_ann_dir) / (images[i].name + ".txt")));
          ap = &annots;
        } else if (!many && !sp_ann.empty()) {
          annots = parse_dota_annotation(detail::read_file(sp_ann));
          ap = &annots;
        }
        parts[i] = detail::split_image(images[i], ap, sp_patch, sp_overlap);
      });
      std::string csv = "image,x0,y0,w,h\n";
      for (const auto& p : parts) csv += p.windows_csv;
      if (sp_out.empty()) {
        out << csv;
      } else {
        detail::write_file(fs::path(sp_out) / "windows.csv", csv);
        for (const auto& p : parts) {
          for (const auto& [name, content] : p.patch_files) {
            detail::write_file(fs::path(sp_out) / name, content);
          }
        }
      }
    } else if (*mg) {
      struct Group {
        std::string cls, image;
        std::vector<WindowDetections> windows;
      };
      std::vector<Group> groups;
      std::vector<std::string> class_order;
      for (const fs::path& f : detail::sorted_files(mg_in, "Task1_", ".txt")) {
        const std::string cls = detail::class_of_task1(f);
        class_order.push_back(cls);
        std::map<std::string, std::size_t> group_of;
        std::vector<std::size_t> mine;
        for (const ResultRecord& r : parse_dota_results(detail::read_file(f))) {
          const auto origin = parse_patch_name(r.image);
          const std::string image = origin ? origin->image : r.image;
          const Window w{origin ? origin->x0 : 0, origin ? origin->y0 : 0, 0, 0};
          auto [it, inserted] = group_of.try_emplace(image, groups.size());
          if (inserted) groups.push_back({cls, image, {}});
          auto& wins = groups[it->second].windows;
          auto wit = std::find_if(wins.begin(), wins.end(),
                                  [&](const WindowDetections& wd) { return wd.window == w; });
          if (wit == wins.end()) {
            wins.push_back({w, {}});
            wit = wins.end() - 1;
          }
          wit->detections.push_back({0, r.score, r.quad});
        }
      }
      std::sort(groups.begin(), groups.end(), [](const Group& a, const Group& b) {
        return std::tie(a.cls, a.image) < std::tie(b.cls, b.image);
      });
      std::vector<std::string> chunks(groups.size());
      parallel_for(groups.size(), g.jobs, [&](std::size_t i) {
        for (const Detection& d : merge_patch_detections(groups[i].windows, mg_iou)) {
          chunks[i] += format_result_line(groups[i].image, d.score, d.quad);
        }
      });
      std::map<std::string, std::string> files;
      for (const auto& cls : class_order) files["Task1_" + cls + ".txt"];
      for (std::size_t i = 0; i < groups.size(); ++i) {
        files["Task1_" + groups[i].cls + ".txt"] += chunks[i];
      }
      for (const auto& [name, content] : files) detail::write_file(fs::path(mg_out) / name, content);
    } else if (*ev) {
      std::map<std::string, std::vector<Annotation>> gt;
      std::set<std::string> seen;
      for (const fs::path& f : detail::sorted_files(ev_gt, "", ".txt")) {
        auto annots = parse_dota_annotation(detail::read_file(f));
        for (const auto& a : annots) seen.insert(a.category);
        gt[f.stem().string()] = std::move(annots);
      }
      std::map<std::string, std::vector<ResultRecord>> dets;
      for (const fs::path& f : detail::sorted_files(ev_det, "Task1_", ".txt")) {
        dets[detail::class_of_task1(f)] = parse_dota_results(detail::read_file(f));
      }
      std::vector<std::string> classes = ev_classes.empty()
                                             ? std::vector<std::string>(seen.begin(), seen.end())
                                             : detail::split_list(ev_classes);
      EvalConfig cfg;
      cfg.iou = ev_iou;
      cfg.metric = parse_metric(ev_metric);
      cfg.exclude_empty_classes = ev_exclude;
      cfg.jobs = g.jobs;
      const EvalReport report = evaluate_obb_map(gt, dets, classes, cfg);
      if (report.unknown_class_detections > 0) {
        info("eval: " + std::to_string(report.unknown_class_detections) +
             " detections under unknown classes");
      }
      out << format_ap_table(report);
      if (!ev_csv.empty()) detail::write_file(ev_csv, format_ap_csv(report));
    } else if (*cv) {
      std::vector<double> ars;
      for (const auto& s : detail::split_list(cv_ar)) ars.push_back(polardet::detail::parse_real(s, 0));
      detail::emit(cv_out, format_curve_csv(iou_angle_curve(ars, cv_max, cv_step)), out);
    } else if (*ft) {
      if (ft_boundary > 0) {
        BoundarySweepConfig bc;
        bc.n_cases = ft_boundary;
        bc.seed = g.seed;
        const auto cases = boundary_sweep(bc);
        std::vector<BoundaryOutcome> res(cases.size());
        parallel_for(cases.size(), g.jobs,
                     [&](std::size_t i) { res[i] = run_boundary_case(cases[i], ft_cfg); });
        std::string csv = "case,aspect_ratio,short_side,single_converged_at,polar_converged_at,polar_faster\n";
        for (std::size_t i = 0; i < cases.size(); ++i) {
          csv += std::to_string(i) + ',' + detail::fmt6(cases[i].gt.w / cases[i].gt.h) + ',' +
                 detail::fmt6(cases[i].gt.h) + ',' +
                 std::to_string(res[i].single_angle.converged_at.value_or(-1)) + ',' +
                 std::to_string(res[i].polar.converged_at.value_or(-1)) + ',' +
                 (res[i].polar_faster() ? "1" : "0") + '\n';
        }
        detail::emit(ft_out, csv, out);
      } else {
        SweepConfig sc;
        sc.n_samples = ft_samples;
        sc.seed = g.seed;
        detail::emit(ft_out, format_comparison_csv(compare_representations(sc, ft_cfg, g.jobs)), out);
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::InvalidInput: return kExitUsage;
      case ErrorKind::ParseError: return kExitData;
      default: return kExitNumeric;
    }
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

}  // namespace polardet::cli
