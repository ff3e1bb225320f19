#pragma once

#include <memory>
#include <span>
#include <vector>

#include "edgetile/geometry.hpp"
#include "edgetile/image.hpp"

namespace edgetile {

/// Pyramidal Lucas-Kanade parameters.
struct LkParams {
  int window = 15;              // square window side, odd
  int levels = 3;               // pyramid levels including the full-resolution one
  int max_iterations = 10;      // per level
  double epsilon = 0.01;        // px; stop when the update is shorter
  double min_eigenvalue = 1e-4; // of the window-normalized gradient matrix
  double max_residual = 0.1;    // mean absolute intensity error at convergence
};

using Pyramid = std::vector<GrayImage>;

/// Level 0 is the input; each next level is a 5-tap binomial low-pass
/// followed by 2x decimation. Throws ImageTooSmall when a level would have a
/// side shorter than `min_side`.
Pyramid build_pyramid(const GrayImage& img, int levels, int min_side = 1);

enum class TrackStatus { kOk, kLost };

struct TrackPoint {
  double x = 0.0;
  double y = 0.0;
  int object_id = 0;
  TrackStatus status = TrackStatus::kOk;
};

struct LkResult {
  double dx = 0.0;
  double dy = 0.0;
  TrackStatus status = TrackStatus::kOk;
};

/// Coarse-to-fine displacement of `p` from `prev` to `cur`.
LkResult lk_step(const Pyramid& prev, const Pyramid& cur, const TrackPoint& p,
                 const LkParams& params = {});

/// Tracked objects: `objects[i]` is the box whose center is `points[i]`.
struct TrackState {
  std::vector<TrackPoint> points;
  std::vector<Detection> objects;
  std::shared_ptr<const GrayImage> prev_image;
  Pyramid prev_pyramid;  // built lazily from prev_image

  bool empty() const { return points.empty(); }
};

/// Box centers, labelled with the box object_id or the position in the list.
std::vector<TrackPoint> centers_from_boxes(std::span<const Detection> detections);

/// Starts tracking `detections` from `frame`.
TrackState init_tracks(std::span<const Detection> detections,
                       std::shared_ptr<const GrayImage> frame);

/// Advances every point to `cur`, translating its box (size kept) and
/// clamping it into the frame. Lost points are dropped.
TrackState track_objects(const TrackState& state, std::shared_ptr<const GrayImage> cur,
                         const LkParams& params = {});

}  // namespace edgetile
