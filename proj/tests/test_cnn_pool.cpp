#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "edgetile/cnn_pool.hpp"
#include "edgetile/errors.hpp"

using namespace edgetile;

namespace {

/// Reports one box per call at a fixed region-local position.
class FixedDetector : public Detector {
 public:
  explicit FixedDetector(std::vector<Detection> out) : out_(std::move(out)) {}
  std::vector<Detection> detect(const Frame&, const Tile&, const CnnProfile&) override {
    ++calls;
    return out_;
  }
  int calls = 0;

 private:
  std::vector<Detection> out_;
};

class FailingDetector : public Detector {
 public:
  std::vector<Detection> detect(const Frame&, const Tile&, const CnnProfile&) override {
    throw std::runtime_error("device lost");
  }
};

Frame blank_frame() { return Frame{0, {1024, 768}, nullptr}; }

}  // namespace

TEST_CASE("default pool reproduces the profiled latencies") {
  const CnnPool pool = default_pool();
  CHECK(pool.stage1().name == "DroNet_V3");
  CHECK(pool.stage1().input_size == 512);
  CHECK(pool.stage1().latency == 0.08);
  CHECK(pool.stage1().role == CnnRole::kStage1Full);
  CHECK(pool.tile_sizes() == std::vector<int>{128, 256, 352, 416, 512});
  CHECK(lookup(pool, 512).latency == 0.03);
  CHECK(lookup(pool, 416).latency == 0.02);
  CHECK(lookup(pool, 352).latency == 0.014);
  CHECK(lookup(pool, 256).latency == 0.008);
  CHECK(lookup(pool, 128).latency == 0.002);
  CHECK(pool.min_tile_latency() == 0.002);
  CHECK_THROWS_AS(lookup(pool, 100), UnknownTileSize);
  for (const char* platform : {"cpu", "odroid", "rpi"}) {
    CHECK_NOTHROW(pool.require_platform(platform));
  }
  CHECK_THROWS_AS(pool.require_platform("tpu"), InvalidConfig);
}

TEST_CASE("pool validation") {
  CnnProfile s1{"s1", 512, 0.08, {}, CnnRole::kStage1Full};
  CnnProfile t1{"t", 128, 0.002, {}, CnnRole::kTile};
  CHECK_NOTHROW(CnnPool({s1, t1}));
  CHECK_THROWS_AS(CnnPool({t1}), InvalidConfig);
  CHECK_THROWS_AS(CnnPool({s1, s1, t1}), InvalidConfig);
  CHECK_THROWS_AS(CnnPool({s1, t1, t1}), InvalidConfig);
  CnnProfile bad = t1;
  bad.latency = 0.0;
  CHECK_THROWS_AS(CnnPool({s1, bad}), InvalidConfig);
  bad = t1;
  bad.energy["cpu"] = -1.0;
  CHECK_THROWS_AS(CnnPool({s1, bad}), InvalidConfig);
}

TEST_CASE("pool file round trip and errors") {
  const CnnPool pool = default_pool();
  std::stringstream text;
  write_pool(text, pool);
  const CnnPool back = parse_pool(text);
  CHECK(back.stage1().latency == pool.stage1().latency);
  REQUIRE(back.tiles().size() == pool.tiles().size());
  for (std::size_t i = 0; i < pool.tiles().size(); ++i) {
    CHECK(back.tiles()[i].input_size == pool.tiles()[i].input_size);
    CHECK(back.tiles()[i].latency == pool.tiles()[i].latency);
    CHECK(back.tiles()[i].energy == pool.tiles()[i].energy);
  }

  std::istringstream unknown_key("[stage1]\nrole = stage1\nsize = 512\nlatency = 0.08\ncolour = red\n");
  CHECK_THROWS_AS(parse_pool(unknown_key), InvalidConfig);
  std::istringstream malformed("[stage1\nsize = 1\n");
  CHECK_THROWS_AS(parse_pool(malformed), ParseError);
  std::istringstream no_tiles("[a]\nrole = stage1\nsize = 512\nlatency = 0.08\n");
  CHECK_THROWS_AS(parse_pool(no_tiles), InvalidConfig);
}

TEST_CASE("scaled stage-1 profile") {
  const CnnPool heavy = scale_stage1(default_pool(), 2.0, "heavy");
  CHECK(heavy.stage1().latency == 0.16);
  CHECK(heavy.stage1().energy_for("cpu") == 2.0 * default_pool().stage1().energy_for("cpu"));
  CHECK(heavy.lookup(128).latency == 0.002);
}

TEST_CASE("run_detector translates to frame coordinates and charges the ledger") {
  const CnnPool pool = default_pool();
  FixedDetector det({Detection{{5, 5, 10, 10, 7}, 0.9, DetectionSource::kStage1}});
  CostLedger ledger{"cpu"};
  const Tile region{100, 200, 128, Anchor::kTopLeft};
  const auto out = run_detector(det, blank_frame(), region, pool.lookup(128), ledger);
  REQUIRE(out.size() == 1);
  CHECK(out[0].box == BoundingBox{105, 205, 10, 10, 7});
  CHECK(ledger.seconds == 0.002);

  // Costs add up per tile.
  run_detector(det, blank_frame(), region, pool.lookup(128), ledger);
  run_detector(det, blank_frame(), region, pool.lookup(128), ledger);
  run_detector(det, blank_frame(), region, pool.lookup(128), ledger);
  CHECK(ledger.seconds == doctest::Approx(0.008).epsilon(1e-12));
  CHECK(ledger.joules == doctest::Approx(4 * pool.lookup(128).energy_for("cpu")));
}

TEST_CASE("run_detector keeps results inside the region") {
  const CnnPool pool = default_pool();
  FixedDetector empty({});
  CostLedger ledger{"cpu"};
  const Tile region{100, 200, 128, Anchor::kTopLeft};
  CHECK(run_detector(empty, blank_frame(), region, pool.lookup(128), ledger).empty());

  FixedDetector overflowing({Detection{{120, 120, 20, 20}, 0.5, DetectionSource::kStage1},
                             Detection{{200, 200, 5, 5}, 0.5, DetectionSource::kStage1}});
  const auto out = run_detector(overflowing, blank_frame(), region, pool.lookup(128), ledger);
  REQUIRE(out.size() == 1);
  CHECK(contains(region, out[0].box));
  CHECK(out[0].box == BoundingBox{220, 320, 8, 8});
}

TEST_CASE("backend failures surface as DetectorError") {
  FailingDetector det;
  CostLedger ledger{"cpu"};
  CHECK_THROWS_AS(run_detector(det, blank_frame(), Tile{0, 0, 128, Anchor::kTopLeft},
                               default_pool().lookup(128), ledger),
                  DetectorError);
}
