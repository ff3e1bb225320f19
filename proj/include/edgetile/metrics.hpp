#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "edgetile/geometry.hpp"

namespace edgetile {

enum class Stage { kS1, kS2, kS3 };

std::string_view to_string(Stage s);

/// Outcome of one pipeline step.
struct FrameResult {
  std::size_t frame_index = 0;
  Stage stage = Stage::kS1;
  std::vector<Detection> detections;  // frame coordinates
  double model_time = 0.0;            // seconds
  double model_energy = 0.0;          // joules
  std::vector<Tile> tiles_used;       // stage-2 frames only
  /// Mean best IoU of tracked boxes against fresh stage-1 detections, when
  /// both were available on this frame. Informational only.
  std::optional<double> track_agreement;
};

struct MatchResult {
  std::size_t tp = 0;
  std::size_t fn = 0;
  std::size_t fp = 0;
  /// (prediction index, ground-truth index) of every true positive.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

inline constexpr double kDefaultMatchIou = 0.5;

/// Greedy one-to-one matching: predictions in descending score order (input
/// order on ties) each take the unmatched ground truth with the highest IoU,
/// provided it reaches `iou_thresh`.
MatchResult match_frame(std::span<const Detection> pred, std::span<const BoundingBox> gt,
                        double iou_thresh = kDefaultMatchIou);

/// Sum of true positives over sum of ground truth. Throws NoGroundTruth.
double sensitivity(std::span<const MatchResult> matches);

/// Mean modeled processing time per frame. Throws EmptyRun.
double apt(std::span<const FrameResult> results);

/// Energy and idle figures of one execution platform.
struct PlatformProfile {
  std::string id;
  double tracker_energy = 0.0;  // joules per tracked frame
  double idle_power = 0.0;      // watts
};

std::vector<PlatformProfile> builtin_platforms();
/// Throws InvalidConfig for unknown ids.
PlatformProfile builtin_platform(const std::string& id);

inline constexpr double kDefaultFramePeriod = 1.0 / 30.0;

/// Mean power per frame, p_i = idle + energy_i / frame_period.
/// Throws EmptyRun.
double apc(std::span<const FrameResult> results, const PlatformProfile& platform,
           double frame_period = kDefaultFramePeriod);

struct RunReport {
  std::string config;    // e.g. "1-3-5"
  std::string platform;
  std::vector<FrameResult> frames;
  std::vector<MatchResult> matches;
  std::optional<double> sen;  // empty when the sequence has no ground truth
  double apt = 0.0;
  double apc = 0.0;
  std::array<std::size_t, 3> stage_histogram{};
};

/// Aggregates per-frame results into a report. Throws EmptyRun.
RunReport summarize(std::string config, const PlatformProfile& platform,
                    std::vector<FrameResult> frames, std::vector<MatchResult> matches,
                    double frame_period = kDefaultFramePeriod);

/// Per-frame CSV: header, one row per frame, then a `total` row.
void write_frames_csv(std::ostream& out, const RunReport& report);
/// One header line and one data line with the aggregate metrics.
void write_summary_csv(std::ostream& out, const RunReport& report);
void write_summary_header(std::ostream& out);
void write_summary_row(std::ostream& out, const RunReport& report);

}  // namespace edgetile
