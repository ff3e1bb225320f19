// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "cover_oracle.hpp"
#include "edgetile/cnn_pool.hpp"
#include "edgetile/report_io.hpp"
#include "edgetile/run_config.hpp"
#include "edgetile/scheduler.hpp"
#include "edgetile/simulator.hpp"
#include "edgetile/tile_engine.hpp"
#include "edgetile/tracker.hpp"

using namespace edgetile;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int precision = 4) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(precision) << v;
  return s.str();
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

RunReport run_scene(const SceneSpec& spec, const OracleModel& oracle, const StageConfig& cfg,
                    const CnnPool& pool = default_pool(), const std::string& platform = "cpu") {
  SyntheticSequence seq(generate_scene(spec));
  OracleDetector detector(seq.trajectories(), oracle);
  return run(seq, detector, pool, cfg, builtin_platform(platform));
}

Outcome pool_arithmetic() {
  const CnnPool pool = default_pool();
  const std::map<int, double> expected = {{512, 0.03}, {416, 0.02}, {352, 0.014}, {256, 0.008},
                                          {128, 0.002}};
  bool ok = pool.stage1().latency == 0.08 && pool.tiles().size() == expected.size();
  std::string rows = "stage1=" + fmt(pool.stage1().latency, 3);
  for (const auto& [size, latency] : expected) {
    ok = ok && pool.lookup(size).latency == latency;
    rows += " " + std::to_string(size) + "=" + fmt(pool.lookup(size).latency, 3);
  }
  return {ok, rows};
}

Outcome worked_tile_example() {
  const CnnPool pool = default_pool();
  const std::vector<BoundingBox> objs = {{120, 90, 14, 30}, {480, 150, 12, 28}, {300, 500, 14, 32},
                                         {800, 600, 12, 30}};
  const TilePlan plan = select_tiles(objs, pool, FrameDims{1024, 768});
  bool all128 = plan.tiles.size() == 4;
  for (const Tile& t : plan.tiles) all128 = all128 && t.size == 128;
  const double ratio = pool.stage1().latency / plan.total_latency;
  const bool ok = all128 && std::abs(plan.total_latency - 0.008) < 1e-15 &&
                  std::abs(ratio - 10.0) < 1e-9;
  return {ok, std::to_string(plan.tiles.size()) + " tiles, total " + fmt(plan.total_latency) +
                  " s vs stage-1 " + fmt(pool.stage1().latency) + " s (" + fmt(ratio, 2) + "x)"};
}

Outcome candidate_count() {
  const auto sizes = default_pool().tile_sizes();
  const auto raw = corner_tiles(BoundingBox{500, 370, 20, 24}, sizes, FrameDims{1024, 768});
  return {raw.size() == 20 && sizes.size() == 5,
          std::to_string(raw.size()) + " candidates from " + std::to_string(sizes.size()) + " sizes"};
}

Outcome cover_oracle_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240601);
  const FrameDims dims{640, 480};
  const std::map<int, double> table = {{128, 0.002}, {256, 0.008}, {352, 0.014}, {416, 0.02},
                                       {512, 0.03}};
  int complete = 0;
  int within = 0;
  double worst = 0.0;
  constexpr int kScenes = 200;
  for (int scene = 0; scene < kScenes; ++scene) {
    std::vector<int> sizes;
    for (const auto& [s, l] : table) sizes.push_back(s);
    std::shuffle(sizes.begin(), sizes.end(), rng);
    sizes.resize(1 + rng() % 3);
    std::vector<CnnProfile> profiles = {{"s1", 512, 0.08, {}, CnnRole::kStage1Full}};
    std::map<int, double> latency;
    for (int s : sizes) {
      profiles.push_back({"t" + std::to_string(s), s, table.at(s), {}, CnnRole::kTile});
      latency[s] = table.at(s);
    }
    const CnnPool pool(profiles);

    std::vector<BoundingBox> objs;
    const int n = 1 + static_cast<int>(rng() % 6);
    const int cx = static_cast<int>(rng() % 420), cy = static_cast<int>(rng() % 300);
    for (int i = 0; i < n; ++i) {
      const int w = 6 + static_cast<int>(rng() % 100), h = 6 + static_cast<int>(rng() % 100);
      objs.push_back({std::min(static_cast<int>(cx + rng() % 260), dims.width - w),
                      std::min(static_cast<int>(cy + rng() % 200), dims.height - h), w, h});
    }

    const TilePlan plan = select_tiles(objs, pool, dims);
    const auto oracle = cover_oracle::solve(objs, latency, dims);
    bool covers = true;
    for (std::size_t i = 0; i < objs.size(); ++i) {
      if (!(oracle.coverable_mask & (1u << i))) continue;
      bool hit = false;
      for (const Tile& t : plan.tiles) hit = hit || (t.anchor != Anchor::kFullFrame && contains(t, objs[i]));
      covers = covers && hit;
    }
    double tile_latency = 0.0;
    for (const Tile& t : plan.tiles) {
      if (t.anchor != Anchor::kFullFrame) tile_latency += latency.at(t.size);
    }
    complete += covers ? 1 : 0;
    if (oracle.optimal_latency > 0.0) worst = std::max(worst, tile_latency / oracle.optimal_latency);
    within += tile_latency <= 2.0 * oracle.optimal_latency + 1e-12 ? 1 : 0;
  }
  const double elapsed = seconds_since(start);
  return {complete == kScenes && within == kScenes && elapsed < 10.0,
          "complete " + std::to_string(complete) + "/" + std::to_string(kScenes) + ", within 2x " +
              std::to_string(within) + "/" + std::to_string(kScenes) + ", worst ratio " +
              fmt(worst, 3) + ", " + fmt(elapsed, 2) + " s"};
}

Outcome cycle_law() {
  SceneSpec spec;
  spec.dims = {1024, 768};
  spec.frames = 90;
  spec.n_objects = 3;
  spec.scripted = {ScriptedObject{100, 100, 24, 28, 1.0, 0.5}, ScriptedObject{500, 300, 26, 26, -0.5, 1.0},
                   ScriptedObject{800, 600, 24, 30, 0.5, -0.5}};
  OracleModel oracle;
  oracle.base_recall = 1.0;
  oracle.fp_rate = 0.0;
  const RunReport r = run_scene(spec, oracle, StageConfig{1, 3, 5});
  const auto& h = r.stage_histogram;
  return {h[0] == 10 && h[1] == 30 && h[2] == 50,
          "S1/S2/S3 = " + std::to_string(h[0]) + "/" + std::to_string(h[1]) + "/" + std::to_string(h[2])};
}

SceneSpec tradeoff_scene() {
  SceneSpec spec;
  spec.dims = {1280, 720};
  spec.frames = 200;
  spec.n_objects = 6;
  spec.min_size = 16;
  spec.max_size = 28;
  spec.min_speed = 0.5;
  spec.max_speed = 2.0;
  spec.entries = {{40, 3}, {90, 4}, {140, 5}};
  spec.seed = 11;
  return spec;
}

Outcome tradeoff_trend() {
  const auto start = std::chrono::steady_clock::now();
  const SceneSpec spec = tradeoff_scene();
  OracleModel oracle;
  oracle.seed = 11;
  const RunReport a = run_scene(spec, oracle, StageConfig{1, 1, 1});
  const RunReport b = run_scene(spec, oracle, StageConfig{1, 3, 5});
  const RunReport c = run_scene(spec, oracle, StageConfig{1, 10, 5});
  const double elapsed = seconds_since(start);
  const bool apt_order = c.apt < b.apt && b.apt < a.apt;
  const bool sen_order = *a.sen >= *b.sen && *b.sen >= *c.sen;
  const double gap = *a.sen - *c.sen;
  return {apt_order && sen_order && gap >= 0.05 && elapsed < 30.0,
          "APT 1-1-1/1-3-5/1-10-5 = " + fmt(a.apt) + "/" + fmt(b.apt) + "/" + fmt(c.apt) +
              " s, SEN = " + fmt(*a.sen) + "/" + fmt(*b.sen) + "/" + fmt(*c.sen) + ", gap " +
              fmt(100 * gap, 1) + " pp, " + fmt(elapsed, 1) + " s"};
}

SceneSpec high_resolution_scene() {
  SceneSpec spec;
  spec.dims = {2048, 1536};
  spec.frames = 120;
  spec.n_objects = 8;
  spec.min_size = 16;
  spec.max_size = 24;
  spec.min_speed = 0.5;
  spec.max_speed = 2.0;
  spec.seed = 23;
  return spec;
}

Outcome resolution_mechanism() {
  const auto start = std::chrono::steady_clock::now();
  const SceneSpec spec = high_resolution_scene();
  OracleModel oracle;  // defaults
  oracle.seed = 23;
  const RunReport pipeline = run_scene(spec, oracle, StageConfig{1, 3, 5});
  const RunReport single = run_scene(spec, oracle, StageConfig{1, 0, 0});
  const double elapsed = seconds_since(start);
  const double gap = *pipeline.sen - *single.sen;
  return {gap >= 0.10 && elapsed < 30.0,
          "SEN pipeline 1-3-5 " + fmt(*pipeline.sen) + " vs all-S1 " + fmt(*single.sen) + " (+" +
              fmt(100 * gap, 1) + " pp), " + fmt(elapsed, 1) + " s"};
}

Outcome power_ordering() {
  const SceneSpec spec = tradeoff_scene();
  OracleModel oracle;
  oracle.seed = 11;
  const CnnPool pool = default_pool();
  const CnnPool heavy = scale_stage1(pool, 2.0, "stage1-2x");
  bool ok = true;
  std::string detail;
  for (const auto& p : builtin_platforms()) {
    const double pipe = run_scene(spec, oracle, StageConfig{1, 3, 5}, pool, p.id).apc;
    const double s1 = run_scene(spec, oracle, StageConfig{1, 0, 0}, pool, p.id).apc;
    const double s1x2 = run_scene(spec, oracle, StageConfig{1, 0, 0}, heavy, p.id).apc;
    ok = ok && pipe < s1 && s1 < s1x2;
    detail += p.id + " " + fmt(pipe, 2) + "<" + fmt(s1, 2) + "<" + fmt(s1x2, 2) + " W; ";
  }
  return {ok, detail};
}

Outcome tracker_accuracy() {
  SceneSpec spec;
  spec.dims = {320, 240};
  spec.frames = 11;
  spec.n_objects = 1;
  spec.scripted = {ScriptedObject{60, 50, 40, 40, 2.0, 3.0}};
  spec.seed = 5;
  const Trajectories traj = generate_scene(spec);

  auto image = [&](std::size_t t) { return std::make_shared<const GrayImage>(rasterize(traj, t)); };
  auto center = [&](std::size_t t) {
    const ObjectPose& p = traj.frames[t][0];
    return std::pair{p.x + p.w / 2.0, p.y + p.h / 2.0};
  };

  const LkParams params;
  auto prev = image(0);
  auto [x, y] = center(0);
  double worst_step = 0.0;
  bool lost = false;
  for (std::size_t t = 1; t < spec.frames; ++t) {
    auto cur = image(t);
    const LkResult r = lk_step(build_pyramid(*prev, params.levels), build_pyramid(*cur, params.levels),
                               TrackPoint{x, y, 0, TrackStatus::kOk}, params);
    lost = lost || r.status == TrackStatus::kLost;
    worst_step = std::max(worst_step, std::hypot(r.dx - 2.0, r.dy - 3.0));
    x += r.dx;
    y += r.dy;
    prev = cur;
  }
  const auto [tx, ty] = center(spec.frames - 1);
  const double cumulative = std::hypot(x - tx, y - ty);

  const auto still = build_pyramid(*image(0), params.levels);
  const auto [sx, sy] = center(0);
  const LkResult zero = lk_step(still, still, TrackPoint{sx, sy, 0, TrackStatus::kOk}, params);
  const double zero_mag = std::hypot(zero.dx, zero.dy);

  return {!lost && zero.status == TrackStatus::kOk && worst_step < 0.5 && cumulative < 2.0 &&
              zero_mag < 0.1,
          "worst per-frame error " + fmt(worst_step, 3) + " px, cumulative " + fmt(cumulative, 3) +
              " px, identical frames " + fmt(zero_mag, 4) + " px"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / ("edgetile_accept_" + std::to_string(::getpid()));
  std::istringstream text("[run]\nstages = 1-3-5\nseed = 99\n"
                          "[scene]\nwidth = 1280\nheight = 720\nframes = 120\nobjects = 5\n"
                          "motion = random_walk\nentries = 30:4\n");
  const RunConfig cfg = parse_run_config(text);
  for (const char* name : {"a", "b"}) {
    Experiment exp = make_experiment(cfg);
    write_report(run_experiment(cfg, exp), root / name, true);
  }
  bool same = true;
  for (const char* f : {"frames.csv", "summary.csv"}) {
    const std::string a = slurp(root / "a" / f), b = slurp(root / "b" / f);
    same = same && !a.empty() && a == b;
  }
  fs::remove_all(root);
  return {same, same ? "frames.csv and summary.csv identical across reruns" : "reports differ"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"pool arithmetic", pool_arithmetic},
      {"worked tile example", worked_tile_example},
      {"candidate count law", candidate_count},
      {"cover-oracle equivalence", cover_oracle_equivalence},
      {"scheduler cycle law", cycle_law},
      {"trade-off trend", tradeoff_trend},
      {"resolution-sensitivity mechanism", resolution_mechanism},
      {"power ordering", power_ordering},
      {"tracker accuracy", tracker_accuracy},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << " (" << criteria[i].first
              << "): " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed\n";
  return failures == 0 ? 0 : 1;
}
