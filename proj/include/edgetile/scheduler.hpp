#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "edgetile/cnn_pool.hpp"
#include "edgetile/metrics.hpp"
#include "edgetile/sequence.hpp"
#include "edgetile/tile_engine.hpp"
#include "edgetile/tracker.hpp"

namespace edgetile {

/// Frames allotted to full-frame detection, tile detection and tracking in
/// one cycle of the process loop.
struct StageConfig {
  int n1 = 1;
  int n2 = 0;
  int n3 = 0;

  int cycle_length() const { return n1 + n2 + n3; }
  std::string label() const;
  /// Throws InvalidConfig unless n1 >= 1 and n2, n3 >= 0.
  void validate() const;
  /// Parses "1-3-5". Throws InvalidConfig.
  static StageConfig parse(std::string_view text);

  bool operator==(const StageConfig&) const = default;
};

/// Cycle position of frame `k`: the first n1 frames are S1, the next n2 S2,
/// the rest S3.
Stage stage_for_frame(const StageConfig& cfg, std::size_t k);

struct PipelineOptions {
  double tracker_cost = 0.001;  // modeled seconds per tracking pass
  /// Pixels added around each known object before tile selection, so that
  /// one frame of motion plus localisation jitter stays inside the tile.
  int tile_margin = 8;
  double nms_iou = kTileMergeIou;
  LkParams lk;
  CostMode cost_mode = CostMode::kModeled;
  /// Run tile detections concurrently when the backend allows it.
  bool parallel_tiles = false;
  /// On S1 frames, advance the tracked objects to the current frame and
  /// fuse them with the full-frame detections. Only applies when the
  /// configuration has a tracking stage (n3 > 0).
  bool fuse_tracks = true;
};

struct PipelineState {
  std::vector<Detection> last_detections;
  TrackState track;
  std::size_t frame_index = 0;
  std::vector<double> frame_times;     // seconds
  std::vector<double> frame_energies;  // joules
};

/// The N1-N2-N3 process loop. Frames must be fed in order.
class Pipeline {
 public:
  /// Throws InvalidConfig for an invalid stage configuration, a pool
  /// without energies for the platform, or a tracker cost above the cheapest
  /// tile detector.
  Pipeline(const CnnPool& pool, Detector& detector, StageConfig cfg, PlatformProfile platform,
           PipelineOptions options = {});

  /// Processes the next frame. Propagates DetectorError.
  FrameResult step(const Frame& frame);

  const PipelineState& state() const { return state_; }
  const StageConfig& config() const { return cfg_; }

 private:
  std::vector<Detection> run_stage1(const Frame& frame, CostLedger& ledger,
                                    FrameResult& result);
  std::vector<Detection> run_stage2(const Frame& frame, CostLedger& ledger,
                                    FrameResult& result);
  std::vector<Detection> run_stage3(const Frame& frame, CostLedger& ledger);
  void charge_tracker(CostLedger& ledger, double measured_seconds) const;

  CnnPool pool_;
  Detector& detector_;
  StageConfig cfg_;
  PlatformProfile platform_;
  PipelineOptions options_;
  PipelineState state_;
  std::optional<FrameDims> dims_;
};

struct RunOptions {
  PipelineOptions pipeline;
  double iou_threshold = kDefaultMatchIou;
  double frame_period = kDefaultFramePeriod;
};

/// Folds Pipeline::step over the sequence and scores every frame against its
/// ground truth. Throws EmptySequence.
RunReport run(const FrameSource& sequence, Detector& detector, const CnnPool& pool,
              const StageConfig& cfg, const PlatformProfile& platform,
              const RunOptions& options = {});

}  // namespace edgetile
