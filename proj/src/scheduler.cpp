#include "edgetile/scheduler.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <future>

#include "edgetile/errors.hpp"

namespace edgetile {

std::string StageConfig::label() const {
  return std::to_string(n1) + "-" + std::to_string(n2) + "-" + std::to_string(n3);
}

void StageConfig::validate() const {
  if (n1 < 1) throw InvalidConfig("stage config " + label() + ": n1 must be >= 1");
  if (n2 < 0 || n3 < 0) throw InvalidConfig("stage config " + label() + ": negative frame count");
}

StageConfig StageConfig::parse(std::string_view text) {
  int values[3] = {0, 0, 0};
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    const std::size_t end = i < 2 ? text.find('-', pos) : text.size();
    if (end == std::string_view::npos) {
      throw InvalidConfig("stage config '" + std::string(text) + "' is not N1-N2-N3");
    }
    const std::string_view part = text.substr(pos, end - pos);
    const auto res = std::from_chars(part.data(), part.data() + part.size(), values[i]);
    if (part.empty() || res.ec != std::errc{} || res.ptr != part.data() + part.size()) {
      throw InvalidConfig("stage config '" + std::string(text) + "' is not N1-N2-N3");
    }
    pos = end + 1;
  }
  StageConfig cfg{values[0], values[1], values[2]};
  cfg.validate();
  return cfg;
}

Stage stage_for_frame(const StageConfig& cfg, std::size_t k) {
  const auto p = static_cast<int>(k % static_cast<std::size_t>(cfg.cycle_length()));
  if (p < cfg.n1) return Stage::kS1;
  if (p < cfg.n1 + cfg.n2) return Stage::kS2;
  return Stage::kS3;
}

namespace {

void relabel(std::vector<Detection>& dets) {
  for (std::size_t i = 0; i < dets.size(); ++i) dets[i].box.object_id = static_cast<int>(i);
}

}  // namespace

Pipeline::Pipeline(const CnnPool& pool, Detector& detector, StageConfig cfg,
                   PlatformProfile platform, PipelineOptions options)
    : pool_(pool),
      detector_(detector),
      cfg_(cfg),
      platform_(std::move(platform)),
      options_(options) {
  cfg_.validate();
  pool_.require_platform(platform_.id);
  if (!(options_.tracker_cost > 0.0) || options_.tracker_cost > pool_.min_tile_latency()) {
    throw InvalidConfig("tracker cost must be in (0, cheapest tile latency]");
  }
  if (options_.tile_margin < 0) throw InvalidConfig("tile margin must be >= 0");
}

void Pipeline::charge_tracker(CostLedger& ledger, double measured_seconds) const {
  if (options_.cost_mode == CostMode::kWallClock) {
    ledger.seconds += measured_seconds;
    ledger.joules += platform_.tracker_energy * measured_seconds / options_.tracker_cost;
  } else {
    ledger.seconds += options_.tracker_cost;
    ledger.joules += platform_.tracker_energy;
  }
}

FrameResult Pipeline::step(const Frame& frame) {
  if (!dims_) {
    dims_ = frame.dims;
  } else if (*dims_ != frame.dims) {
    throw MixedDimensions("frame " + std::to_string(frame.index) + " changes the frame size");
  }

  FrameResult result;
  result.frame_index = state_.frame_index;
  result.stage = stage_for_frame(cfg_, state_.frame_index);
  if (state_.last_detections.empty()) result.stage = Stage::kS1;

  CostLedger ledger{platform_.id, options_.cost_mode};
  std::vector<Detection> detections;
  switch (result.stage) {
    case Stage::kS1: detections = run_stage1(frame, ledger, result); break;
    case Stage::kS2: detections = run_stage2(frame, ledger, result); break;
    case Stage::kS3: detections = run_stage3(frame, ledger); break;
  }

  state_.last_detections = detections;
  result.detections = std::move(detections);
  result.model_time = ledger.seconds;
  result.model_energy = ledger.joules;
  state_.frame_times.push_back(ledger.seconds);
  state_.frame_energies.push_back(ledger.joules);
  ++state_.frame_index;
  return result;
}

std::vector<Detection> Pipeline::run_stage1(const Frame& frame, CostLedger& ledger,
                                            FrameResult& result) {
  std::vector<Detection> found =
      run_detector(detector_, frame, full_frame_tile(frame.dims), pool_.stage1(), ledger);
  for (auto& d : found) d.source = DetectionSource::kStage1;

  if (options_.fuse_tracks && cfg_.n3 > 0 && !state_.track.empty() && frame.image) {
    const auto start = std::chrono::steady_clock::now();
    TrackState advanced = track_objects(state_.track, frame.image, options_.lk);
    charge_tracker(ledger, std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                               .count());
    if (!advanced.objects.empty() && !found.empty()) {
      double sum = 0.0;
      for (const auto& t : advanced.objects) {
        double best = 0.0;
        for (const auto& d : found) best = std::max(best, iou(t.box, d.box));
        sum += best;
      }
      result.track_agreement = sum / static_cast<double>(advanced.objects.size());
    }
    found.insert(found.end(), advanced.objects.begin(), advanced.objects.end());
  }

  std::vector<Detection> merged = non_max_suppression(std::move(found), options_.nms_iou);
  relabel(merged);
  state_.track = init_tracks(merged, frame.image);
  return merged;
}

std::vector<Detection> Pipeline::run_stage2(const Frame& frame, CostLedger& ledger,
                                            FrameResult& result) {
  std::vector<BoundingBox> targets;
  targets.reserve(state_.last_detections.size());
  for (const auto& d : state_.last_detections) {
    targets.push_back(inflate(d.box, options_.tile_margin, frame.dims));
  }
  const TilePlan plan = select_tiles(targets, pool_, frame.dims);
  result.tiles_used = plan.tiles;

  std::vector<std::vector<Detection>> per_tile(plan.tiles.size());
  if (options_.parallel_tiles && detector_.thread_safe() && plan.tiles.size() > 1) {
    std::vector<CostLedger> ledgers(plan.tiles.size(), CostLedger{ledger.platform, ledger.mode});
    std::vector<std::future<std::vector<Detection>>> jobs;
    for (std::size_t i = 0; i < plan.tiles.size(); ++i) {
      jobs.push_back(std::async(std::launch::async, [&, i] {
        const Tile& t = plan.tiles[i];
        return run_detector(detector_, frame, t, pool_.profile_for(t), ledgers[i]);
      }));
    }
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      per_tile[i] = jobs[i].get();
      ledger.seconds += ledgers[i].seconds;
      ledger.joules += ledgers[i].joules;
    }
  } else {
    for (std::size_t i = 0; i < plan.tiles.size(); ++i) {
      const Tile& t = plan.tiles[i];
      per_tile[i] = run_detector(detector_, frame, t, pool_.profile_for(t), ledger);
    }
  }
  for (auto& tile : per_tile) {
    for (auto& d : tile) d.source = DetectionSource::kStage2Tile;
  }

  std::vector<Detection> merged = merge_tile_detections(per_tile, options_.nms_iou);
  relabel(merged);
  state_.track = init_tracks(merged, frame.image);
  return merged;
}

std::vector<Detection> Pipeline::run_stage3(const Frame& frame, CostLedger& ledger) {
  const auto start = std::chrono::steady_clock::now();
  state_.track = track_objects(state_.track, frame.image, options_.lk);
  charge_tracker(ledger,
                 std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  return state_.track.objects;
}

RunReport run(const FrameSource& sequence, Detector& detector, const CnnPool& pool,
              const StageConfig& cfg, const PlatformProfile& platform,
              const RunOptions& options) {
  if (sequence.size() == 0) throw EmptySequence("sequence has no frames");
  Pipeline pipeline(pool, detector, cfg, platform, options.pipeline);
  std::vector<FrameResult> frames;
  std::vector<MatchResult> matches;
  frames.reserve(sequence.size());
  matches.reserve(sequence.size());
  for (std::size_t t = 0; t < sequence.size(); ++t) {
    FrameResult r = pipeline.step(sequence.frame(t));
    const std::vector<BoundingBox> gt = sequence.ground_truth(t);
    matches.push_back(match_frame(r.detections, gt, options.iou_threshold));
    frames.push_back(std::move(r));
  }
  return summarize(cfg.label(), platform, std::move(frames), std::move(matches),
                   options.frame_period);
}

}  // namespace edgetile
