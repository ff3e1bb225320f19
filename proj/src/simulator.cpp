#include "edgetile/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "edgetile/errors.hpp"
#include "hash.hpp"

namespace edgetile {

using detail::hash_keys;
using detail::unit_interval;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Salts that separate independent random streams.
enum Salt : std::uint64_t {
  kSaltBackground = 0xB6,
  kSaltTexture = 0x7E,
  kSaltHit = 0xD7,
  kSaltJitter = 0x71,
  kSaltFalsePositive = 0xF9,
};

struct MovingObject {
  double x, y;
  int w, h;
  double vx, vy;
  std::size_t entry = 0;
};

void reflect(double& pos, double& vel, int extent, int limit) {
  const double hi = static_cast<double>(limit - extent);
  if (pos < 0.0) {
    pos = -pos;
    vel = -vel;
  }
  if (pos > hi) {
    pos = 2.0 * hi - pos;
    vel = -vel;
  }
  pos = std::clamp(pos, 0.0, hi);
}

struct Texture {
  double base, amp;
  double lx, ly, ld;   // wavelengths, px
  double px, py, pd;   // phases

  double at(double u, double v) const {
    const double t = 0.6 * std::sin(kTwoPi * u / lx + px) * std::cos(kTwoPi * v / ly + py) +
                     0.4 * std::sin(kTwoPi * (u + v) / ld + pd);
    return base + amp * t;
  }
};

Texture texture_for(std::uint64_t seed, int object_id) {
  auto draw = [&](std::uint64_t k) {
    return unit_interval(hash_keys({seed, kSaltTexture, static_cast<std::uint64_t>(object_id), k}));
  };
  return Texture{0.62 + 0.1 * draw(0), 0.3,
                 5.0 + 4.0 * draw(1), 5.0 + 4.0 * draw(2), 6.0 + 4.0 * draw(3),
                 kTwoPi * draw(4), kTwoPi * draw(5), kTwoPi * draw(6)};
}

GrayImage make_background(FrameDims dims, std::uint64_t seed) {
  GrayImage img(dims.width, dims.height);
  for (int y = 0; y < dims.height; ++y) {
    for (int x = 0; x < dims.width; ++x) {
      const double n = unit_interval(hash_keys({seed, kSaltBackground,
                                                static_cast<std::uint64_t>(x),
                                                static_cast<std::uint64_t>(y)}));
      img.at(x, y) = static_cast<float>(0.3 + 0.04 * (2.0 * n - 1.0));
    }
  }
  return img;
}

void draw_objects(GrayImage& img, const Trajectories& traj, std::size_t t) {
  for (const ObjectPose& pose : traj.frames.at(t)) {
    const Texture tex = texture_for(traj.seed, pose.object_id);
    const BoundingBox box = pose.box();
    for (int y = box.y; y < box.bottom(); ++y) {
      for (int x = box.x; x < box.right(); ++x) {
        const double v = tex.at(x + 0.5 - pose.x, y + 0.5 - pose.y);
        img.at(x, y) = static_cast<float>(std::clamp(v, 0.0, 1.0));
      }
    }
  }
}

}  // namespace

void SceneSpec::validate() const {
  if (dims.width <= 0 || dims.height <= 0) throw InvalidSpec("frame dimensions must be positive");
  if (frames == 0) throw InvalidSpec("scene needs at least one frame");
  if (min_size <= 0 || max_size < min_size) throw InvalidSpec("bad object size range");
  if (max_size > dims.width || max_size > dims.height) {
    throw InvalidSpec("objects larger than the frame");
  }
  if (min_speed < 0.0 || max_speed < min_speed) throw InvalidSpec("bad speed range");
  if (scripted.size() > n_objects) throw InvalidSpec("more scripted objects than objects");
  for (const auto& s : scripted) {
    if (s.w <= 0 || s.h <= 0 || s.w > dims.width || s.h > dims.height) {
      throw InvalidSpec("scripted object does not fit the frame");
    }
  }
  for (const auto& e : entries) {
    if (e.object >= n_objects) {
      throw InvalidSpec("entry refers to object " + std::to_string(e.object));
    }
  }
}

BoundingBox ObjectPose::box() const {
  return BoundingBox{static_cast<int>(std::lround(x)), static_cast<int>(std::lround(y)), w, h,
                     object_id};
}

std::vector<BoundingBox> Trajectories::ground_truth(std::size_t t) const {
  std::vector<BoundingBox> out;
  const auto& poses = frames.at(t);
  out.reserve(poses.size());
  for (const auto& p : poses) out.push_back(p.box());
  return out;
}

Trajectories generate_scene(const SceneSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> size(spec.min_size, spec.max_size);
  std::normal_distribution<double> turn(0.0, 0.3);

  std::vector<MovingObject> objects;
  for (std::size_t i = 0; i < spec.n_objects; ++i) {
    MovingObject o{};
    if (i < spec.scripted.size()) {
      const auto& s = spec.scripted[i];
      o = {s.x, s.y, s.w, s.h, s.vx, s.vy};
    } else {
      o.w = size(rng);
      o.h = size(rng);
      o.x = unit(rng) * (spec.dims.width - o.w);
      o.y = unit(rng) * (spec.dims.height - o.h);
      const double speed = spec.min_speed + unit(rng) * (spec.max_speed - spec.min_speed);
      const double angle = kTwoPi * unit(rng);
      o.vx = speed * std::cos(angle);
      o.vy = speed * std::sin(angle);
    }
    objects.push_back(o);
  }
  for (const auto& e : spec.entries) objects[e.object].entry = e.frame;

  Trajectories traj{spec.dims, spec.seed, {}};
  traj.frames.resize(spec.frames);
  for (std::size_t t = 0; t < spec.frames; ++t) {
    for (std::size_t i = 0; i < objects.size(); ++i) {
      MovingObject& o = objects[i];
      if (t < o.entry) continue;
      traj.frames[t].push_back({static_cast<int>(i), o.x, o.y, o.w, o.h});
      if (spec.motion == MotionModel::kRandomWalk) {
        const double speed = std::hypot(o.vx, o.vy);
        const double angle = std::atan2(o.vy, o.vx) + turn(rng);
        o.vx = speed * std::cos(angle);
        o.vy = speed * std::sin(angle);
      }
      o.x += o.vx;
      o.y += o.vy;
      reflect(o.x, o.vx, o.w, spec.dims.width);
      reflect(o.y, o.vy, o.h, spec.dims.height);
    }
  }
  return traj;
}

Trajectories trajectories_from_truth(const GroundTruthTable& truth, FrameDims dims) {
  Trajectories traj{dims, 0, {}};
  traj.frames.resize(truth.size());
  for (std::size_t t = 0; t < truth.size(); ++t) {
    for (std::size_t i = 0; i < truth[t].size(); ++i) {
      const auto& b = truth[t][i];
      traj.frames[t].push_back({b.object_id.value_or(static_cast<int>(i)), static_cast<double>(b.x),
                                static_cast<double>(b.y), b.w, b.h});
    }
  }
  return traj;
}

GrayImage rasterize(const Trajectories& traj, std::size_t t) {
  GrayImage img = make_background(traj.dims, traj.seed);
  draw_objects(img, traj, t);
  return img;
}

SyntheticSequence::SyntheticSequence(Trajectories traj)
    : traj_(std::make_shared<const Trajectories>(std::move(traj))),
      background_(make_background(traj_->dims, traj_->seed)) {
  if (traj_->frames.empty()) throw EmptySequence("synthetic scene has no frames");
}

Frame SyntheticSequence::frame(std::size_t t) const {
  auto img = std::make_shared<GrayImage>(background_);
  draw_objects(*img, *traj_, t);
  return Frame{t, traj_->dims, std::move(img)};
}

std::vector<BoundingBox> SyntheticSequence::ground_truth(std::size_t t) const {
  return traj_->ground_truth(t);
}

void OracleModel::validate() const {
  if (base_recall < 0.0 || base_recall > 1.0) throw InvalidSpec("base_recall outside [0,1]");
  if (!(min_apparent > 0.0)) throw InvalidSpec("min_apparent must be > 0");
  if (fp_rate < 0.0) throw InvalidSpec("fp_rate must be >= 0");
  if (fp_min_size <= 0 || fp_max_size < fp_min_size) throw InvalidSpec("bad fp size range");
  if (max_jitter < 0) throw InvalidSpec("max_jitter must be >= 0");
}

double apparent_size(const BoundingBox& obj, const Tile& region, const CnnProfile& profile,
                     FrameDims dims) {
  const double region_side = std::max(tile_width(region, dims), tile_height(region, dims));
  return std::max(obj.w, obj.h) * static_cast<double>(profile.input_size) / region_side;
}

double detection_probability(const BoundingBox& obj, const Tile& region,
                             const CnnProfile& profile, FrameDims dims, const OracleModel& model) {
  const double apparent = apparent_size(obj, region, profile, dims);
  return model.base_recall * std::min(1.0, apparent / model.min_apparent);
}

std::vector<Detection> oracle_detect(const Trajectories& traj, std::size_t t, const Tile& region,
                                     const CnnProfile& profile, const OracleModel& model) {
  const FrameDims dims = traj.dims;
  const int rw = tile_width(region, dims);
  const int rh = tile_height(region, dims);
  const FrameDims local{rw, rh};

  std::vector<Detection> out;
  for (const ObjectPose& pose : traj.frames.at(t)) {
    const BoundingBox gt = pose.box();
    if (!(gt.x >= region.x && gt.y >= region.y && gt.right() <= region.x + rw &&
          gt.bottom() <= region.y + rh)) {
      continue;
    }
    const auto id = static_cast<std::uint64_t>(pose.object_id);
    const double p = detection_probability(gt, region, profile, dims, model);
    if (unit_interval(hash_keys({model.seed, kSaltHit, t, id})) >= p) continue;

    std::mt19937_64 rng(hash_keys({model.seed, kSaltJitter, t, id,
                                   static_cast<std::uint64_t>(region.x),
                                   static_cast<std::uint64_t>(region.y),
                                   static_cast<std::uint64_t>(rw),
                                   static_cast<std::uint64_t>(profile.input_size)}));
    std::uniform_int_distribution<int> jitter(-model.max_jitter, model.max_jitter);
    BoundingBox box{gt.x - region.x + jitter(rng), gt.y - region.y + jitter(rng), gt.w, gt.h,
                    pose.object_id};
    auto clipped = clip_to_frame(box, local);
    if (!clipped) continue;
    const double quality = std::min(1.0, apparent_size(gt, region, profile, dims) /
                                             model.min_apparent);
    out.push_back({*clipped, 0.6 + 0.39 * quality, DetectionSource::kStage1});
  }

  const double area_fraction = static_cast<double>(rw) * rh /
                               (static_cast<double>(dims.width) * dims.height);
  const double lambda = model.fp_rate * area_fraction;
  if (lambda > 0.0) {
    std::mt19937_64 rng(hash_keys({model.seed, kSaltFalsePositive, t,
                                   static_cast<std::uint64_t>(region.x),
                                   static_cast<std::uint64_t>(region.y),
                                   static_cast<std::uint64_t>(rw),
                                   static_cast<std::uint64_t>(profile.input_size)}));
    std::poisson_distribution<int> count(lambda);
    std::uniform_int_distribution<int> size(model.fp_min_size, model.fp_max_size);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
      const int w = std::min(size(rng), rw);
      const int h = std::min(size(rng), rh);
      const int x = static_cast<int>(unit(rng) * (rw - w + 1));
      const int y = static_cast<int>(unit(rng) * (rh - h + 1));
      out.push_back({BoundingBox{std::min(x, rw - w), std::min(y, rh - h), w, h, std::nullopt},
                     0.3 + 0.25 * unit(rng), DetectionSource::kStage1});
    }
  }
  return out;
}

OracleDetector::OracleDetector(std::shared_ptr<const Trajectories> traj, OracleModel model)
    : traj_(std::move(traj)), model_(model) {
  model_.validate();
}

std::vector<Detection> OracleDetector::detect(const Frame& frame, const Tile& region,
                                              const CnnProfile& profile) {
  return oracle_detect(*traj_, frame.index, region, profile, model_);
}

}  // namespace edgetile
