#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <unistd.h>

#include "doctest.h"
#include "edgetile/annotations.hpp"
#include "edgetile/errors.hpp"
#include "edgetile/pgm.hpp"
#include "edgetile/report_io.hpp"
#include "edgetile/run_config.hpp"

using namespace edgetile;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("edgetile_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

GrayImage gradient(int w, int h) {
  GrayImage img(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) img.at(x, y) = static_cast<float>((x * 7 + y * 13) % 256) / 255.0f;
  }
  return img;
}

const char* kSmallScene = R"([run]
stages = 1-3-5
seed = 3

[scene]
width = 640
height = 480
frames = 9
objects = 3

[oracle]
fp_rate = 0.1
)";

RunConfig small_config() {
  std::istringstream in(kSmallScene);
  return parse_run_config(in);
}

}  // namespace

TEST_CASE("PGM round trip and errors") {
  const GrayImage img = gradient(37, 21);
  std::stringstream buf;
  write_pgm(buf, img);
  const GrayImage back = read_pgm(buf);
  CHECK(back == img);

  SUBCASE("ascii graymap with comments") {
    std::istringstream in("P2\n# a comment\n3 2\n# another\n255\n0 128 255\n10 20 30\n");
    const GrayImage a = read_pgm(in);
    CHECK(a.width() == 3);
    CHECK(a.height() == 2);
    CHECK(a.at(2, 0) == 1.0f);
    CHECK(a.at(1, 0) == doctest::Approx(128.0 / 255.0));
  }
  SUBCASE("corrupt inputs") {
    for (const char* bad : {"P6\n2 2\n255\n", "P5\n2 2\n255\nab", "P5\n-2 2\n255\n", "P2\n2 1\n255\n5 300\n",
                            "", "P5\n2 2\n0\n"}) {
      std::istringstream in(bad);
      CHECK_THROWS_AS(read_pgm(in), CorruptImage);
    }
  }
}

TEST_CASE("load_sequence") {
  TempDir dir;
  SUBCASE("three frames in name order") {
    for (int i : {2, 0, 1}) {
      GrayImage img(8, 6, static_cast<float>(i) / 255.0f);
      write_pgm(dir.path / ("frame_" + std::to_string(i) + ".pgm"), img);
    }
    std::ofstream(dir.path / "notes.txt") << "ignored";
    const auto frames = load_sequence(dir.path);
    REQUIRE(frames.size() == 3);
    for (int i = 0; i < 3; ++i) CHECK(frames[i].at(0, 0) == doctest::Approx(i / 255.0));
  }
  SUBCASE("mixed dimensions") {
    write_pgm(dir.path / "a.pgm", GrayImage(512, 512));
    write_pgm(dir.path / "b.pgm", GrayImage(1024, 768));
    CHECK_THROWS_AS(load_sequence(dir.path), MixedDimensions);
  }
  SUBCASE("empty directory") { CHECK_THROWS_AS(load_sequence(dir.path), EmptyDirectory); }
  SUBCASE("missing directory") { CHECK_THROWS_AS(load_sequence(dir.path / "nope"), IoError); }
  SUBCASE("corrupt file") {
    std::ofstream(dir.path / "a.pgm") << "garbage";
    CHECK_THROWS_AS(load_sequence(dir.path), CorruptImage);
  }
}

TEST_CASE("annotations") {
  SUBCASE("single record") {
    std::istringstream in("0 1 10 10 20 30\n");
    const auto t = parse_annotations(in);
    REQUIRE(t.size() == 1);
    REQUIRE(t[0].size() == 1);
    CHECK(t[0][0] == BoundingBox{10, 10, 20, 30, 1});
  }
  SUBCASE("comments and blank lines") {
    std::istringstream in("# header\n\n2 4 1 2 3 4  # trailing\n");
    const auto t = parse_annotations(in, std::nullopt, 4);
    REQUIRE(t.size() == 4);
    CHECK(t[0].empty());
    CHECK(t[2].size() == 1);
  }
  SUBCASE("parse errors carry the line") {
    std::istringstream in("# ok\n0 1 10 10 -5 30\n");
    try {
      parse_annotations(in);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
    for (const char* bad : {"0 1 10 10 20\n", "x 1 1 1 1 1\n", "0 1 1 1 0 5\n", "-1 0 1 1 1 1\n",
                            "0 1 1 1 1 1 9\n"}) {
      std::istringstream b(bad);
      CHECK_THROWS_AS(parse_annotations(b), ParseError);
    }
  }
  SUBCASE("boxes outside the frame") {
    std::istringstream in("0 1 630 10 20 30\n");
    CHECK_THROWS_AS(parse_annotations(in, FrameDims{640, 480}), OutOfBounds);
    std::istringstream late("5 1 1 1 2 2\n");
    CHECK_THROWS_AS(parse_annotations(late, FrameDims{640, 480}, 3), OutOfBounds);
  }
  SUBCASE("round trip") {
    std::mt19937 rng(4);
    GroundTruthTable table(20);
    for (std::size_t t = 0; t < table.size(); ++t) {
      for (int i = 0; i < static_cast<int>(rng() % 5); ++i) {
        table[t].push_back(BoundingBox{static_cast<int>(rng() % 600), static_cast<int>(rng() % 400),
                                       1 + static_cast<int>(rng() % 40), 1 + static_cast<int>(rng() % 40),
                                       i});
      }
    }
    std::stringstream buf;
    write_annotations(buf, table);
    CHECK(parse_annotations(buf, std::nullopt, table.size()) == table);
  }
}

TEST_CASE("run configuration") {
  SUBCASE("defaults and sections") {
    const RunConfig c = small_config();
    CHECK(c.mode == RunMode::kSimulate);
    CHECK(c.stages == StageConfig{1, 3, 5});
    CHECK(c.seed == 3);
    REQUIRE(c.scene);
    CHECK(c.scene->dims == FrameDims{640, 480});
    CHECK(c.scene->seed == 3);
    CHECK(c.oracle.fp_rate == 0.1);
    CHECK(c.platform == "cpu");
  }
  SUBCASE("entries and pipeline keys") {
    std::istringstream in("[scene]\nobjects = 5\nentries = 10:3, 20:4\nmotion = random_walk\n"
                          "[pipeline]\ntile_margin = 4\nfuse_tracks = false\ncost_mode = wallclock\n");
    const RunConfig c = parse_run_config(in);
    REQUIRE(c.scene->entries.size() == 2);
    CHECK(c.scene->entries[1].frame == 20);
    CHECK(c.scene->entries[1].object == 4);
    CHECK(c.scene->motion == MotionModel::kRandomWalk);
    CHECK(c.pipeline.tile_margin == 4);
    CHECK_FALSE(c.pipeline.fuse_tracks);
    CHECK(c.pipeline.cost_mode == CostMode::kWallClock);
  }
  SUBCASE("errors") {
    for (const char* bad : {
             "[run]\nbogus = 1\n[scene]\n",
             "[weird]\n",
             "[run]\nstages = 0-1-1\n[scene]\n",
             "[run]\niou_threshold = 1.5\n[scene]\n",
             "[run]\nmode = dataset\n",
             "[run]\nmode = dataset\ndataset = x\nannotations = y\n[scene]\n",
             "[run]\n",
             "[scene]\nwidth = abc\n",
             "[scene]\nentries = 3\n",
             "[scene]\nmotion = teleport\n",
             "[oracle]\nbase_recall = 2\n[scene]\n",
         }) {
      std::istringstream in(bad);
      CHECK_THROWS_AS(parse_run_config(in), InvalidConfig);
    }
    std::istringstream syntax("[run\nstages = 1-3-5\n");
    CHECK_THROWS_AS(parse_run_config(syntax), ParseError);
    CHECK_THROWS_AS(load_run_config("/nonexistent/config.ini"), InvalidConfig);
  }
}

TEST_CASE("dataset mode reads frames and annotations from disk") {
  TempDir dir;
  fs::create_directories(dir.path / "frames");
  for (int i = 0; i < 4; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "%05d.pgm", i);
    write_pgm(dir.path / "frames" / name, gradient(320, 240));
  }
  std::ofstream(dir.path / "gt.txt") << "0 0 10 10 30 30\n1 0 12 10 30 30\n2 0 14 10 30 30\n3 0 16 10 30 30\n";
  std::ofstream(dir.path / "run.ini") << "[run]\nmode = dataset\ndataset = frames\nannotations = gt.txt\n"
                                         "[oracle]\nbase_recall = 1\nfp_rate = 0\n";
  const RunConfig c = load_run_config(dir.path / "run.ini");
  Experiment exp = make_experiment(c);
  CHECK(exp.sequence->size() == 4);
  const RunReport r = run_experiment(c, exp);
  CHECK(r.frames.size() == 4);
  CHECK(r.sen.has_value());
}

TEST_CASE("write_report") {
  TempDir dir;
  const RunConfig c = small_config();
  Experiment exp = make_experiment(c);
  const RunReport r = run_experiment(c, exp);
  write_report(r, dir.path / "a", true);

  std::istringstream frames(slurp(dir.path / "a" / "frames.csv"));
  std::string line;
  int rows = 0;
  std::getline(frames, line);
  while (std::getline(frames, line)) ++rows;
  CHECK(rows == 9 + 1);
  CHECK(fs::exists(dir.path / "a" / "summary.csv"));
  CHECK(fs::exists(dir.path / "a" / "timeline.svg"));

  Experiment again = make_experiment(c);
  write_report(run_experiment(c, again), dir.path / "b", true);
  for (const char* f : {"frames.csv", "summary.csv", "timeline.svg"}) {
    CHECK(slurp(dir.path / "a" / f) == slurp(dir.path / "b" / f));
  }

  std::ofstream(dir.path / "file") << "x";
  CHECK_THROWS_AS(write_report(r, dir.path / "file" / "sub"), IoError);
}

TEST_CASE("sweep") {
  const RunConfig base = small_config();
  SUBCASE("three configurations") {
    const SweepReport s = sweep(parse_stage_list("1-1-1, 1-3-5,1-10-5"), base);
    REQUIRE(s.entries.size() == 3);
    CHECK_FALSE(s.partial);
    std::ostringstream svg;
    write_sweep_svg(svg, s);
    int circles = 0;
    for (std::size_t p = svg.str().find("<circle"); p != std::string::npos;
         p = svg.str().find("<circle", p + 1)) {
      ++circles;
    }
    CHECK(circles == 3);
    CHECK(svg.str().find(">1-10-5<") != std::string::npos);
  }
  SUBCASE("singleton") {
    const SweepReport s = sweep({StageConfig{1, 3, 5}}, base);
    REQUIRE(s.entries.size() == 1);
    CHECK(s.entries[0].report->config == "1-3-5");
  }
  SUBCASE("duplicates give identical points") {
    const SweepReport s = sweep({StageConfig{1, 3, 5}, StageConfig{1, 3, 5}}, base);
    REQUIRE(s.entries.size() == 2);
    CHECK(*s.entries[0].report->sen == *s.entries[1].report->sen);
    CHECK(s.entries[0].report->apt == s.entries[1].report->apt);
    CHECK(s.entries[0].report->apc == s.entries[1].report->apc);
  }
  SUBCASE("a failing run flags partial results") {
    RunConfig broken = base;
    broken.pool_path = "/nonexistent/pool.ini";
    const SweepReport s = sweep({StageConfig{1, 3, 5}, StageConfig{1, 1, 1}}, broken);
    CHECK(s.partial);
    REQUIRE(s.entries.size() == 1);
    CHECK_FALSE(s.entries[0].report.has_value());
    CHECK_FALSE(s.entries[0].error.empty());
  }
  SUBCASE("written sweep") {
    TempDir dir;
    write_sweep(sweep(parse_stage_list("1-1-1,1-3-5"), base), dir.path, true);
    CHECK(fs::exists(dir.path / "sweep.csv"));
    CHECK(fs::exists(dir.path / "sweep.svg"));
    CHECK(fs::exists(dir.path / "1-3-5" / "frames.csv"));
  }
  CHECK_THROWS_AS(parse_stage_list(""), InvalidConfig);
  CHECK_THROWS_AS(parse_stage_list("1-1-1,x"), InvalidConfig);
}
