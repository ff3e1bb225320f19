#include "edgetile/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "edgetile/errors.hpp"

namespace edgetile {

namespace {

constexpr float kBinomial[5] = {1.0f / 16, 4.0f / 16, 6.0f / 16, 4.0f / 16, 1.0f / 16};

GrayImage pyr_down(const GrayImage& in) {
  const int w = (in.width() + 1) / 2;
  const int h = (in.height() + 1) / 2;
  // Horizontal pass, even columns only.
  GrayImage tmp(w, in.height());
  for (int y = 0; y < in.height(); ++y) {
    for (int x = 0; x < w; ++x) {
      float acc = 0.0f;
      for (int k = -2; k <= 2; ++k) acc += kBinomial[k + 2] * in.clamped(2 * x + k, y);
      tmp.at(x, y) = acc;
    }
  }
  GrayImage out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      float acc = 0.0f;
      for (int k = -2; k <= 2; ++k) acc += kBinomial[k + 2] * tmp.clamped(x, 2 * y + k);
      out.at(x, y) = acc;
    }
  }
  return out;
}

bool in_bounds(double x, double y, const GrayImage& img, int half) {
  return x >= half && y >= half && x <= img.width() - 1 - half && y <= img.height() - 1 - half;
}

}  // namespace

Pyramid build_pyramid(const GrayImage& img, int levels, int min_side) {
  if (levels < 1) throw ImageTooSmall("pyramid needs at least one level");
  if (img.width() < min_side || img.height() < min_side) {
    throw ImageTooSmall("image " + std::to_string(img.width()) + "x" +
                        std::to_string(img.height()) + " smaller than " +
                        std::to_string(min_side));
  }
  Pyramid pyr;
  pyr.reserve(static_cast<std::size_t>(levels));
  pyr.push_back(img);
  for (int l = 1; l < levels; ++l) {
    GrayImage next = pyr_down(pyr.back());
    if (next.width() < min_side || next.height() < min_side) {
      throw ImageTooSmall("pyramid level " + std::to_string(l) + " is " +
                          std::to_string(next.width()) + "x" + std::to_string(next.height()) +
                          ", needs side >= " + std::to_string(min_side));
    }
    pyr.push_back(std::move(next));
  }
  return pyr;
}

LkResult lk_step(const Pyramid& prev, const Pyramid& cur, const TrackPoint& p,
                 const LkParams& params) {
  const LkResult lost{0.0, 0.0, TrackStatus::kLost};
  if (p.status != TrackStatus::kOk || prev.empty() || cur.empty()) return lost;
  const int half = params.window / 2;
  if (!in_bounds(p.x, p.y, prev.front(), half)) return lost;

  const int levels = static_cast<int>(std::min(prev.size(), cur.size()));
  const std::size_t n = static_cast<std::size_t>(params.window) * params.window;
  std::vector<double> iv(n), ix(n), iy(n);

  double gx = 0.0, gy = 0.0;  // guess carried down from coarser levels
  double dx = 0.0, dy = 0.0;
  for (int level = levels - 1; level >= 0; --level) {
    const GrayImage& I = prev[static_cast<std::size_t>(level)];
    const GrayImage& J = cur[static_cast<std::size_t>(level)];
    const double scale = 1.0 / static_cast<double>(1 << level);
    const double ux = p.x * scale;
    const double uy = p.y * scale;

    double a = 0.0, b = 0.0, c = 0.0;
    std::size_t k = 0;
    for (int oy = -half; oy <= half; ++oy) {
      for (int ox = -half; ox <= half; ++ox, ++k) {
        const double sx = ux + ox, sy = uy + oy;
        iv[k] = I.sample(sx, sy);
        ix[k] = 0.5 * (I.sample(sx + 1, sy) - I.sample(sx - 1, sy));
        iy[k] = 0.5 * (I.sample(sx, sy + 1) - I.sample(sx, sy - 1));
        a += ix[k] * ix[k];
        b += ix[k] * iy[k];
        c += iy[k] * iy[k];
      }
    }
    const double det = a * c - b * b;
    const double min_eig =
        (a + c - std::sqrt((a - c) * (a - c) + 4.0 * b * b)) / 2.0 / static_cast<double>(n);

    double vx = 0.0, vy = 0.0;
    if (min_eig >= params.min_eigenvalue && det > 0.0) {
      for (int it = 0; it < params.max_iterations; ++it) {
        double ex = 0.0, ey = 0.0;
        k = 0;
        for (int oy = -half; oy <= half; ++oy) {
          for (int ox = -half; ox <= half; ++ox, ++k) {
            const double r = iv[k] - J.sample(ux + ox + gx + vx, uy + oy + gy + vy);
            ex += r * ix[k];
            ey += r * iy[k];
          }
        }
        const double ex_step = (c * ex - b * ey) / det;
        const double ey_step = (a * ey - b * ex) / det;
        vx += ex_step;
        vy += ey_step;
        if (std::hypot(ex_step, ey_step) < params.epsilon) break;
      }
    } else if (level == 0) {
      return lost;
    }

    if (level > 0) {
      gx = 2.0 * (gx + vx);
      gy = 2.0 * (gy + vy);
    } else {
      dx = gx + vx;
      dy = gy + vy;
    }
  }

  const GrayImage& I = prev.front();
  const GrayImage& J = cur.front();
  if (!in_bounds(p.x + dx, p.y + dy, J, half)) return lost;
  double residual = 0.0;
  for (int oy = -half; oy <= half; ++oy) {
    for (int ox = -half; ox <= half; ++ox) {
      residual += std::abs(I.sample(p.x + ox, p.y + oy) - J.sample(p.x + ox + dx, p.y + oy + dy));
    }
  }
  if (residual / static_cast<double>(n) > params.max_residual) return lost;
  return {dx, dy, TrackStatus::kOk};
}

std::vector<TrackPoint> centers_from_boxes(std::span<const Detection> detections) {
  std::vector<TrackPoint> points;
  points.reserve(detections.size());
  for (std::size_t i = 0; i < detections.size(); ++i) {
    const auto& box = detections[i].box;
    points.push_back({box.center_x(), box.center_y(),
                      box.object_id.value_or(static_cast<int>(i)), TrackStatus::kOk});
  }
  return points;
}

TrackState init_tracks(std::span<const Detection> detections,
                       std::shared_ptr<const GrayImage> frame) {
  TrackState state;
  state.points = centers_from_boxes(detections);
  state.objects.assign(detections.begin(), detections.end());
  state.prev_image = std::move(frame);
  return state;
}

TrackState track_objects(const TrackState& state, std::shared_ptr<const GrayImage> cur,
                         const LkParams& params) {
  TrackState next;
  next.prev_image = cur;
  if (!cur) return next;
  next.prev_pyramid = build_pyramid(*cur, params.levels, params.window);
  if (state.empty() || !state.prev_image) return next;

  const Pyramid prev_pyr = state.prev_pyramid.empty()
                               ? build_pyramid(*state.prev_image, params.levels, params.window)
                               : state.prev_pyramid;
  const FrameDims dims = cur->dims();
  for (std::size_t i = 0; i < state.points.size(); ++i) {
    const TrackPoint& p = state.points[i];
    const LkResult r = lk_step(prev_pyr, next.prev_pyramid, p, params);
    if (r.status != TrackStatus::kOk) continue;

    TrackPoint moved{p.x + r.dx, p.y + r.dy, p.object_id, TrackStatus::kOk};
    Detection obj = state.objects[i];
    obj.box.x = static_cast<int>(std::lround(moved.x - obj.box.w / 2.0));
    obj.box.y = static_cast<int>(std::lround(moved.y - obj.box.h / 2.0));
    obj.box.x = std::clamp(obj.box.x, 0, std::max(0, dims.width - obj.box.w));
    obj.box.y = std::clamp(obj.box.y, 0, std::max(0, dims.height - obj.box.h));
    obj.source = DetectionSource::kStage3Track;
    next.points.push_back(moved);
    next.objects.push_back(std::move(obj));
  }
  return next;
}

}  // namespace edgetile
