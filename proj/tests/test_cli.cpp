#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "oracles.hpp"
#include "polardet/cli.hpp"

using namespace polardet;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::cli_dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void put(const fs::path& p, const std::string& s) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << s;
}

const fs::path kData = POLARDET_TEST_DATA;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::path(testing::TempDir()) / ("polardet_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST(Cli, IouOfIdenticalSquares) {
  const CliRun r = run({"iou", "0", "0", "1", "0", "1", "1", "0", "1", "0", "0", "1", "0", "1", "1", "0", "1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "1.000000\n");
}

TEST(Cli, IouWrongArity) {
  EXPECT_EQ(run({"iou", "0", "0", "1"}).code, 1);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, SplitPatchNotAboveOverlap) {
  const CliRun r = run({"split", "--width", "2048", "--height", "2048", "--patch", "200", "--overlap", "200"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("--patch"), std::string::npos);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
}

TEST(Cli, SplitWindowsToStdout) {
  const CliRun r = run({"split", "--width", "2048", "--height", "2048", "--name", "P1"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "image,x0,y0,w,h");
  int n = 0;
  while (std::getline(in, line)) ++n;
  EXPECT_EQ(n, 9);
  EXPECT_NE(r.out.find("P1,824,1024,1024,1024\n"), std::string::npos);
}

TEST(Cli, EvalMatchesGolden) {
  const fs::path root = kData / "eval";
  const fs::path csv = scratch("eval") / "ap.csv";
  const CliRun r = run({"--quiet", "eval", "--gt-dir", (root / "gt").string(), "--det-dir",
                     (root / "det").string(), "--classes", "plane,ship,harbor", "--csv", csv.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, slurp(root / "golden_voc07.txt"));
  EXPECT_EQ(slurp(csv), slurp(root / "golden_voc07.csv"));
  EXPECT_TRUE(r.err.empty());

  const CliRun all = run({"eval", "--gt-dir", (root / "gt").string(), "--det-dir", (root / "det").string(),
                       "--classes", "plane,ship,harbor", "--metric", "all"});
  EXPECT_EQ(all.out, slurp(root / "golden_all.txt"));
  EXPECT_NE(all.err.find("unknown classes"), std::string::npos);
}

TEST(Cli, EvalBinaryMatchesGolden) {
  const fs::path out = scratch("evalbin") / "table.txt";
  const std::string cmd = std::string("\"") + POLARDET_CLI_PATH + "\" --quiet eval --gt-dir \"" +
                          (kData / "eval" / "gt").string() + "\" --det-dir \"" +
                          (kData / "eval" / "det").string() +
                          "\" --classes plane,ship,harbor > \"" + out.string() + "\"";
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_EQ(slurp(out), slurp(kData / "eval" / "golden_voc07.txt"));
}

TEST(Cli, EncodeDecodeRoundTrip) {
  const fs::path dir = scratch("codec");
  const fs::path src = kData / "cli" / "sample.txt";
  ASSERT_EQ(run({"encode", src.string(), "-o", (dir / "codes.csv").string()}).code, 0);
  const CliRun dec = run({"decode", (dir / "codes.csv").string()});
  ASSERT_EQ(dec.code, 0) << dec.err;
  const auto in = parse_dota_annotation(slurp(src));
  const auto back = parse_dota_annotation(dec.out);
  ASSERT_EQ(back.size(), in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    EXPECT_LT(oracle::set_distance(in[i].quad, back[i].quad), 1e-4) << i;
    EXPECT_EQ(in[i].category, back[i].category);
    EXPECT_EQ(in[i].difficult, back[i].difficult);
  }
}

TEST(Cli, EncodeColumns) {
  const fs::path dir = scratch("enc");
  put(dir / "a.txt", "4 4 6 4 6 6 4 6 plane 1\n");
  const CliRun r = run({"encode", (dir / "a.txt").string()});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')),
            "cx,cy,dx,dy,theta1,theta2,theta3,theta4,s,r1,r2,r3,r4,category,difficult");
  EXPECT_NE(r.out.find("\n5.0000000000,5.0000000000,0.2500000000,0.2500000000,"), std::string::npos);
  EXPECT_NE(r.out.find(",plane,1\n"), std::string::npos);
}

TEST(Cli, ErrorExitCodes) {
  const fs::path dir = scratch("errors");
  put(dir / "bad.txt", "0 0 1 1 2 2 3 plane 0\n");
  const CliRun parse = run({"encode", (dir / "bad.txt").string()});
  EXPECT_EQ(parse.code, 2);
  EXPECT_NE(parse.err.find("line 1"), std::string::npos);

  put(dir / "flat.txt", "0 0 1 1 2 2 3 3 plane 0\n");
  EXPECT_EQ(run({"encode", (dir / "flat.txt").string()}).code, 3);

  EXPECT_EQ(run({"encode", (dir / "missing.txt").string()}).code, 2);

  put(dir / "codes.csv", "cx,cy\n1,2,3\n");
  EXPECT_EQ(run({"decode", (dir / "codes.csv").string()}).code, 2);
}

TEST(Cli, NmsPerImage) {
  const fs::path dir = scratch("nms");
  put(dir / "r.txt",
      "b 0.5000 0 0 1 0 1 1 0 1\n"
      "a 0.9000 0 0 1 0 1 1 0 1\n"
      "a 0.8000 0 0 1 0 1 1 0 1\n"
      "a 0.7000 0.5 0 1.5 0 1.5 1 0.5 1\n");
  const CliRun r = run({"nms", (dir / "r.txt").string(), "--iou-thresh", "0.5"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out,
            "b 0.5000 0.00 0.00 1.00 0.00 1.00 1.00 0.00 1.00\n"
            "a 0.9000 0.00 0.00 1.00 0.00 1.00 1.00 0.00 1.00\n"
            "a 0.7000 0.50 0.00 1.50 0.00 1.50 1.00 0.50 1.00\n");
}

TEST(Cli, TargetsDump) {
  const fs::path dir = scratch("targets");
  put(dir / "a.txt", "4 4 6 4 6 6 4 6 ship 0\n");
  ASSERT_EQ(run({"targets", (dir / "a.txt").string(), "--width", "32", "--height", "32",
                 "--classes", "plane,ship", "-o", (dir / "t.bin").string()})
                .code,
            0);
  const std::string blob = slurp(dir / "t.bin");
  const std::size_t nl = blob.find('\n');
  const auto header = nlohmann::json::parse(blob.substr(0, nl));
  EXPECT_EQ(header["stride"], 4);
  EXPECT_EQ(header["classes"][1], "ship");
  std::size_t floats = 0;
  std::vector<std::string> names;
  for (const auto& m : header["maps"]) {
    names.push_back(m["name"]);
    floats += m["shape"][0].get<std::size_t>() * m["shape"][1].get<std::size_t>() *
              m["shape"][2].get<std::size_t>();
  }
  EXPECT_EQ(names, (std::vector<std::string>{"heatmap", "offset", "angles", "shorter", "ratios", "semantic"}));
  ASSERT_EQ(blob.size(), nl + 1 + 4 * floats);
  // heatmap channel 1 (ship), cell (1,1) of an 8x8 grid
  float v = 0;
  std::memcpy(&v, blob.data() + nl + 1 + 4 * (64 + 8 + 1), 4);
  EXPECT_EQ(v, 1.0f);

  put(dir / "b.txt", "4 4 6 4 6 6 4 6 tank 0\n");
  EXPECT_EQ(run({"targets", (dir / "b.txt").string(), "--width", "32", "--height", "32",
                 "--classes", "plane", "-o", (dir / "u.bin").string()})
                .code,
            2);
}

TEST(Cli, SplitThenMerge) {
  const fs::path dir = scratch("tiling");
  put(dir / "ann" / "P7.txt",
      "100 100 140 100 140 120 100 120 plane 0\n"
      "1000 900 1060 900 1060 940 1000 940 ship 0\n");
  put(dir / "sizes.csv", "image,width,height\nP7,2048,2048\n");
  const CliRun s = run({"split", "--sizes", (dir / "sizes.csv").string(), "--ann-dir",
                     (dir / "ann").string(), "-o", (dir / "patches").string()});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_TRUE(fs::exists(dir / "patches" / "windows.csv"));
  EXPECT_TRUE(fs::exists(dir / "patches" / "P7__1__824___824.txt"));

  // Treat every patch annotation as a detection and merge back.
  std::map<std::string, std::string> per_class;
  for (const auto& e : fs::directory_iterator(dir / "patches")) {
    if (e.path().filename() == "windows.csv") continue;
    for (const Annotation& a : parse_dota_annotation(slurp(e.path()))) {
      per_class[a.category] += format_result_line(e.path().stem().string(), 1.0, a.quad);
    }
  }
  for (const auto& [cls, text] : per_class) put(dir / "res" / ("Task1_" + cls + ".txt"), text);
  const CliRun m = run({"merge", (dir / "res").string(), "-o", (dir / "merged").string()});
  ASSERT_EQ(m.code, 0) << m.err;
  EXPECT_EQ(slurp(dir / "merged" / "Task1_plane.txt"),
            "P7 1.0000 100.00 100.00 140.00 100.00 140.00 120.00 100.00 120.00\n");
  EXPECT_EQ(slurp(dir / "merged" / "Task1_ship.txt"),
            "P7 1.0000 1000.00 900.00 1060.00 900.00 1060.00 940.00 1000.00 940.00\n");
}

TEST(Cli, CurvesCsv) {
  const CliRun r = run({"curves", "--ar", "1", "--bias-max", "1", "--step", "1"});
  ASSERT_EQ(r.code, 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "ar,bias_deg,iou");
  std::getline(in, line);
  EXPECT_EQ(line, "1.000000,-1.000000,0.982994");
}

TEST(Cli, FitIsSeeded) {
  const CliRun a = run({"--seed", "3", "fit", "--samples", "5", "--max-iter", "100"});
  const CliRun b = run({"--seed", "3", "fit", "--samples", "5", "--max-iter", "100"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.substr(0, a.out.find('\n')), "kind,mean_final_iou,mean_converged_at,fail_rate");
  const CliRun c = run({"fit", "--boundary", "2"});
  ASSERT_EQ(c.code, 0);
  EXPECT_EQ(std::count(c.out.begin(), c.out.end(), '\n'), 3);
}
