#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "edgetile/cnn_pool.hpp"
#include "edgetile/geometry.hpp"

namespace edgetile {

/// A scored tile. `covered` holds indices into the object list it was scored
/// against, ascending. `ept` is the effective processing time: detector
/// latency divided by the number of covered objects (seconds per object).
struct TileCandidate {
  Tile tile;
  std::vector<std::size_t> covered;
  double latency = 0.0;
  double ept = 0.0;
};

struct TilePlan {
  std::vector<Tile> tiles;
  double total_latency = 0.0;
  std::vector<std::size_t> covered;    // object indices, ascending
  std::vector<std::size_t> oversized;  // objects handled by the full-frame fallback
};

/// Four corner-anchored tiles (object at TL, TR, BL, BR) for every size that
/// can hold the object and fits in the frame, each clamped into the frame.
/// Clamp collisions are kept; see propose_tiles for the deduplicated set.
std::vector<Tile> corner_tiles(const BoundingBox& obj, std::span<const int> sizes, FrameDims dims);

/// corner_tiles() with clamp collisions removed (first anchor wins).
/// Empty when the object is larger than every usable size.
std::vector<Tile> propose_tiles(const BoundingBox& obj, std::span<const int> sizes, FrameDims dims);

/// nullopt when the tile contains none of the objects.
std::optional<TileCandidate> score_candidate(const Tile& t, std::span<const BoundingBox> objects,
                                             const CnnPool& pool);

/// Strict ordering used everywhere a best tile is picked: lower ept, then
/// smaller size, then smaller (y, x).
bool ranks_before(const TileCandidate& a, const TileCandidate& b);

/// Best candidate covering `object`; nullopt when none does.
std::optional<TileCandidate> select_per_object(std::size_t object,
                                               std::span<const TileCandidate> candidates);

/// Greedy pass in rank order keeping tiles that add coverage, followed by a
/// reverse pass that drops any kept tile whose objects are all covered by
/// the others.
TilePlan prune_redundant(std::vector<TileCandidate> selected);

/// propose -> score -> select per object -> prune. Objects that no usable
/// size can hold are covered by one full-frame tile charged at the stage-1
/// latency.
TilePlan select_tiles(std::span<const BoundingBox> objects, const CnnPool& pool, FrameDims dims);

/// Greedy score-ordered non-maximum suppression; a box is dropped when its
/// IoU with an already kept box exceeds `iou_threshold`. Stable for equal
/// scores.
std::vector<Detection> non_max_suppression(std::vector<Detection> detections,
                                           double iou_threshold);

inline constexpr double kTileMergeIou = 0.45;

/// Flattens per-tile results in tile order and applies NMS.
std::vector<Detection> merge_tile_detections(const std::vector<std::vector<Detection>>& per_tile,
                                             double iou_threshold = kTileMergeIou);

}  // namespace edgetile
