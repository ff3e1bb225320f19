#pragma once

#include <optional>
#include <string_view>

namespace edgetile {

struct FrameDims {
  int width = 0;
  int height = 0;

  bool operator==(const FrameDims&) const = default;
};

/// Axis-aligned box in frame pixels; (x, y) is the top-left corner.
struct BoundingBox {
  int x = 0;
  int y = 0;
  int w = 1;
  int h = 1;
  std::optional<int> object_id;

  int right() const { return x + w; }
  int bottom() const { return y + h; }
  long long area() const { return static_cast<long long>(w) * h; }
  double center_x() const { return x + w / 2.0; }
  double center_y() const { return y + h / 2.0; }
  bool valid() const { return w > 0 && h > 0; }

  bool operator==(const BoundingBox&) const = default;
};

enum class Anchor { kTopLeft, kTopRight, kBottomLeft, kBottomRight, kFullFrame };

std::string_view to_string(Anchor a);

/// Square region processed by one detector from the pool.
///
/// A kFullFrame tile always sits at the origin and its `size` is the longer
/// frame side, i.e. the side the stage-1 detector resizes from. Its actual
/// extent is the frame itself; see tile_width()/tile_height().
struct Tile {
  int x = 0;
  int y = 0;
  int size = 0;
  Anchor anchor = Anchor::kTopLeft;

  int right() const { return x + size; }
  int bottom() const { return y + size; }

  bool operator==(const Tile&) const = default;
};

Tile full_frame_tile(FrameDims dims);

/// Extent of a tile inside the frame; differs from `size` only for full-frame tiles.
int tile_width(const Tile& t, FrameDims dims);
int tile_height(const Tile& t, FrameDims dims);

enum class DetectionSource { kStage1, kStage2Tile, kStage3Track };

std::string_view to_string(DetectionSource s);

struct Detection {
  BoundingBox box;
  double score = 0.0;
  DetectionSource source = DetectionSource::kStage1;
};

/// Intersection over union; 0 for disjoint boxes.
double iou(const BoundingBox& a, const BoundingBox& b);

/// True iff `b` lies entirely inside `t`, edges inclusive.
bool contains(const Tile& t, const BoundingBox& b);

/// Translates `t` inward so it fits in the frame. Never resizes.
/// Throws TileLargerThanFrame when the tile cannot fit.
Tile clamp_tile(const Tile& t, FrameDims dims);

/// True iff the box lies inside [0, width) x [0, height).
bool inside_frame(const BoundingBox& b, FrameDims dims);

/// Intersection of the box with the frame; nullopt when nothing remains.
std::optional<BoundingBox> clip_to_frame(const BoundingBox& b, FrameDims dims);

/// Grows the box by `margin` on every side and clips it to the frame.
BoundingBox inflate(const BoundingBox& b, int margin, FrameDims dims);

}  // namespace edgetile
