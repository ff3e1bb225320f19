#include "edgetile/tile_engine.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

namespace edgetile {

namespace {

// EPTs are quotients of table latencies; treat values this close as equal so
// that e.g. 0.008/4 and 0.002 tie regardless of rounding.
bool ept_less(double a, double b) {
  const double tol = 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
  return a < b - tol;
}

bool same_tile(const Tile& a, const Tile& b) {
  return a.x == b.x && a.y == b.y && a.size == b.size && (a.anchor == Anchor::kFullFrame) ==
                                                            (b.anchor == Anchor::kFullFrame);
}

std::vector<int> usable_sizes(std::span<const int> sizes, FrameDims dims) {
  std::vector<int> out;
  for (int s : sizes) {
    if (s <= dims.width && s <= dims.height) out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<Tile> corner_tiles(const BoundingBox& obj, std::span<const int> sizes, FrameDims dims) {
  std::vector<Tile> out;
  const int extent = std::max(obj.w, obj.h);
  for (int s : usable_sizes(sizes, dims)) {
    if (s < extent) continue;
    const Tile raw[] = {
        {obj.x, obj.y, s, Anchor::kTopLeft},
        {obj.right() - s, obj.y, s, Anchor::kTopRight},
        {obj.x, obj.bottom() - s, s, Anchor::kBottomLeft},
        {obj.right() - s, obj.bottom() - s, s, Anchor::kBottomRight},
    };
    for (const Tile& t : raw) out.push_back(clamp_tile(t, dims));
  }
  return out;
}

std::vector<Tile> propose_tiles(const BoundingBox& obj, std::span<const int> sizes, FrameDims dims) {
  std::vector<Tile> out;
  for (const Tile& t : corner_tiles(obj, sizes, dims)) {
    const bool seen = std::any_of(out.begin(), out.end(),
                                  [&](const Tile& o) { return same_tile(o, t); });
    if (!seen) out.push_back(t);
  }
  return out;
}

std::optional<TileCandidate> score_candidate(const Tile& t, std::span<const BoundingBox> objects,
                                             const CnnPool& pool) {
  TileCandidate c{t, {}, pool.profile_for(t).latency, 0.0};
  for (std::size_t i = 0; i < objects.size(); ++i) {
    if (contains(t, objects[i])) c.covered.push_back(i);
  }
  if (c.covered.empty()) return std::nullopt;
  c.ept = c.latency / static_cast<double>(c.covered.size());
  return c;
}

bool ranks_before(const TileCandidate& a, const TileCandidate& b) {
  if (ept_less(a.ept, b.ept)) return true;
  if (ept_less(b.ept, a.ept)) return false;
  return std::tie(a.tile.size, a.tile.y, a.tile.x) < std::tie(b.tile.size, b.tile.y, b.tile.x);
}

std::optional<TileCandidate> select_per_object(std::size_t object,
                                               std::span<const TileCandidate> candidates) {
  const TileCandidate* best = nullptr;
  for (const auto& c : candidates) {
    if (!std::binary_search(c.covered.begin(), c.covered.end(), object)) continue;
    if (best == nullptr || ranks_before(c, *best)) best = &c;
  }
  if (best == nullptr) return std::nullopt;
  return *best;
}

TilePlan prune_redundant(std::vector<TileCandidate> selected) {
  std::stable_sort(selected.begin(), selected.end(), ranks_before);

  std::vector<TileCandidate> kept;
  std::map<std::size_t, int> cover_count;
  for (auto& c : selected) {
    const bool adds = std::any_of(c.covered.begin(), c.covered.end(),
                                  [&](std::size_t i) { return cover_count[i] == 0; });
    if (!adds) continue;
    for (std::size_t i : c.covered) ++cover_count[i];
    kept.push_back(std::move(c));
  }

  // Drop tiles made redundant by later, costlier picks (most expensive first).
  for (std::size_t k = kept.size(); k-- > 0;) {
    const auto& covered = kept[k].covered;
    const bool redundant = std::all_of(covered.begin(), covered.end(),
                                       [&](std::size_t i) { return cover_count[i] >= 2; });
    if (!redundant) continue;
    for (std::size_t i : covered) --cover_count[i];
    kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(k));
  }

  TilePlan plan;
  for (const auto& c : kept) {
    plan.tiles.push_back(c.tile);
    plan.total_latency += c.latency;
  }
  for (const auto& [i, n] : cover_count) {
    if (n > 0) plan.covered.push_back(i);
  }
  return plan;
}

TilePlan select_tiles(std::span<const BoundingBox> objects, const CnnPool& pool, FrameDims dims) {
  const std::vector<int> sizes = pool.tile_sizes();

  std::vector<Tile> proposals;
  std::vector<std::size_t> oversized;
  std::vector<std::size_t> coverable;
  for (std::size_t i = 0; i < objects.size(); ++i) {
    auto tiles = propose_tiles(objects[i], sizes, dims);
    if (tiles.empty()) {
      oversized.push_back(i);
      continue;
    }
    coverable.push_back(i);
    for (const Tile& t : tiles) {
      const bool seen = std::any_of(proposals.begin(), proposals.end(),
                                    [&](const Tile& o) { return same_tile(o, t); });
      if (!seen) proposals.push_back(t);
    }
  }

  std::vector<TileCandidate> candidates;
  candidates.reserve(proposals.size());
  for (const Tile& t : proposals) {
    if (auto c = score_candidate(t, objects, pool)) candidates.push_back(std::move(*c));
  }

  std::vector<TileCandidate> selected;
  for (std::size_t i : coverable) {
    if (auto c = select_per_object(i, candidates)) selected.push_back(std::move(*c));
  }

  TilePlan plan = prune_redundant(std::move(selected));
  if (!oversized.empty()) {
    plan.tiles.push_back(full_frame_tile(dims));
    plan.total_latency += pool.stage1().latency;
    plan.covered.insert(plan.covered.end(), oversized.begin(), oversized.end());
    std::sort(plan.covered.begin(), plan.covered.end());
    plan.oversized = std::move(oversized);
  }
  return plan;
}

std::vector<Detection> non_max_suppression(std::vector<Detection> detections,
                                           double iou_threshold) {
  std::stable_sort(detections.begin(), detections.end(),
                   [](const Detection& a, const Detection& b) { return a.score > b.score; });
  std::vector<Detection> kept;
  for (auto& d : detections) {
    const bool suppressed = std::any_of(kept.begin(), kept.end(), [&](const Detection& k) {
      return iou(k.box, d.box) > iou_threshold;
    });
    if (!suppressed) kept.push_back(std::move(d));
  }
  return kept;
}

std::vector<Detection> merge_tile_detections(const std::vector<std::vector<Detection>>& per_tile,
                                             double iou_threshold) {
  std::vector<Detection> all;
  for (const auto& tile : per_tile) all.insert(all.end(), tile.begin(), tile.end());
  return non_max_suppression(std::move(all), iou_threshold);
}

}  // namespace edgetile
