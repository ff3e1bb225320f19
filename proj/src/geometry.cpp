#include "edgetile/geometry.hpp"

#include <algorithm>
#include <string>

#include "edgetile/errors.hpp"

namespace edgetile {

std::string_view to_string(Anchor a) {
  switch (a) {
    case Anchor::kTopLeft: return "TL";
    case Anchor::kTopRight: return "TR";
    case Anchor::kBottomLeft: return "BL";
    case Anchor::kBottomRight: return "BR";
    case Anchor::kFullFrame: return "FULL_FRAME";
  }
  return "?";
}

std::string_view to_string(DetectionSource s) {
  switch (s) {
    case DetectionSource::kStage1: return "STAGE1";
    case DetectionSource::kStage2Tile: return "STAGE2_TILE";
    case DetectionSource::kStage3Track: return "STAGE3_TRACK";
  }
  return "?";
}

Tile full_frame_tile(FrameDims dims) {
  return Tile{0, 0, std::max(dims.width, dims.height), Anchor::kFullFrame};
}

int tile_width(const Tile& t, FrameDims dims) {
  return t.anchor == Anchor::kFullFrame ? dims.width : t.size;
}

int tile_height(const Tile& t, FrameDims dims) {
  return t.anchor == Anchor::kFullFrame ? dims.height : t.size;
}

double iou(const BoundingBox& a, const BoundingBox& b) {
  const long long ix = std::max(0, std::min(a.right(), b.right()) - std::max(a.x, b.x));
  const long long iy = std::max(0, std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y));
  const long long inter = ix * iy;
  if (inter == 0) return 0.0;
  const long long uni = a.area() + b.area() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

bool contains(const Tile& t, const BoundingBox& b) {
  return b.x >= t.x && b.y >= t.y && b.right() <= t.right() && b.bottom() <= t.bottom();
}

Tile clamp_tile(const Tile& t, FrameDims dims) {
  if (t.anchor == Anchor::kFullFrame) return full_frame_tile(dims);
  if (t.size > dims.width || t.size > dims.height) {
    throw TileLargerThanFrame("tile of size " + std::to_string(t.size) + " does not fit a " +
                              std::to_string(dims.width) + "x" + std::to_string(dims.height) +
                              " frame");
  }
  Tile out = t;
  out.x = std::clamp(t.x, 0, dims.width - t.size);
  out.y = std::clamp(t.y, 0, dims.height - t.size);
  return out;
}

bool inside_frame(const BoundingBox& b, FrameDims dims) {
  return b.valid() && b.x >= 0 && b.y >= 0 && b.right() <= dims.width &&
         b.bottom() <= dims.height;
}

std::optional<BoundingBox> clip_to_frame(const BoundingBox& b, FrameDims dims) {
  const int x0 = std::max(b.x, 0);
  const int y0 = std::max(b.y, 0);
  const int x1 = std::min(b.right(), dims.width);
  const int y1 = std::min(b.bottom(), dims.height);
  if (x1 <= x0 || y1 <= y0) return std::nullopt;
  return BoundingBox{x0, y0, x1 - x0, y1 - y0, b.object_id};
}

BoundingBox inflate(const BoundingBox& b, int margin, FrameDims dims) {
  BoundingBox grown{b.x - margin, b.y - margin, b.w + 2 * margin, b.h + 2 * margin, b.object_id};
  return clip_to_frame(grown, dims).value_or(b);
}

}  // namespace edgetile
