#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "edgetile/cnn_pool.hpp"
#include "edgetile/geometry.hpp"
#include "edgetile/image.hpp"
#include "edgetile/sequence.hpp"

namespace edgetile {

enum class MotionModel { kLinear, kRandomWalk };

/// An object with a fixed start and velocity, bypassing random placement.
struct ScriptedObject {
  double x = 0.0;
  double y = 0.0;
  int w = 20;
  int h = 20;
  double vx = 0.0;
  double vy = 0.0;
};

/// Object `object` becomes visible at frame `frame`.
struct SceneEntry {
  std::size_t frame = 0;
  std::size_t object = 0;
};

struct SceneSpec {
  FrameDims dims{1280, 720};
  std::size_t frames = 200;
  std::size_t n_objects = 6;
  int min_size = 16;
  int max_size = 28;
  MotionModel motion = MotionModel::kLinear;
  double min_speed = 0.5;  // px/frame
  double max_speed = 3.0;
  std::vector<SceneEntry> entries;
  /// Replaces random placement for objects 0..scripted.size()-1.
  std::vector<ScriptedObject> scripted;
  std::uint64_t seed = 1;

  /// Throws InvalidSpec.
  void validate() const;
};

/// Sub-pixel pose of one object in one frame.
struct ObjectPose {
  int object_id = 0;
  double x = 0.0;
  double y = 0.0;
  int w = 0;
  int h = 0;

  BoundingBox box() const;
};

/// Per-frame poses of every visible object.
struct Trajectories {
  FrameDims dims;
  std::uint64_t seed = 0;
  std::vector<std::vector<ObjectPose>> frames;

  std::vector<BoundingBox> ground_truth(std::size_t t) const;
};

/// Deterministic in `spec.seed`. Objects bounce off the frame borders.
Trajectories generate_scene(const SceneSpec& spec);

/// Builds poses from integer annotations, e.g. of a recorded sequence.
Trajectories trajectories_from_truth(const GroundTruthTable& truth, FrameDims dims);

/// Low-amplitude static background with each object drawn as a
/// high-contrast texture that moves with it at sub-pixel precision.
GrayImage rasterize(const Trajectories& traj, std::size_t t);

/// FrameSource that rasterizes frames on demand.
class SyntheticSequence : public FrameSource {
 public:
  explicit SyntheticSequence(Trajectories traj);

  std::size_t size() const override { return traj_->frames.size(); }
  FrameDims dims() const override { return traj_->dims; }
  Frame frame(std::size_t t) const override;
  std::vector<BoundingBox> ground_truth(std::size_t t) const override;
  std::shared_ptr<const Trajectories> trajectories() const { return traj_; }

 private:
  std::shared_ptr<const Trajectories> traj_;
  GrayImage background_;
};

/// Behaviour of the synthetic detector.
///
/// Recall depends on the object's apparent size after the region is resized
/// to the detector input: apparent = max(w, h) * input_size / region_size.
/// At or above `min_apparent` the object is found with `base_recall`; below
/// it the recall falls off linearly to zero.
struct OracleModel {
  double base_recall = 0.97;
  double min_apparent = 12.0;  // px
  double fp_rate = 0.05;       // expected false positives per full frame
  int fp_min_size = 12;
  int fp_max_size = 24;
  int max_jitter = 2;  // px, per axis
  std::uint64_t seed = 0;

  /// Throws InvalidSpec.
  void validate() const;
};

double apparent_size(const BoundingBox& obj, const Tile& region, const CnnProfile& profile,
                     FrameDims dims);

double detection_probability(const BoundingBox& obj, const Tile& region,
                             const CnnProfile& profile, FrameDims dims, const OracleModel& model);

/// Detections of the objects contained in `region` at frame `t`, in
/// region-local coordinates. Each object's hit/miss draw depends only on
/// (seed, t, object), so a region with higher apparent resolution never
/// loses an object that a coarser one finds.
std::vector<Detection> oracle_detect(const Trajectories& traj, std::size_t t, const Tile& region,
                                     const CnnProfile& profile, const OracleModel& model);

class OracleDetector : public Detector {
 public:
  OracleDetector(std::shared_ptr<const Trajectories> traj, OracleModel model);

  std::vector<Detection> detect(const Frame& frame, const Tile& region,
                                const CnnProfile& profile) override;
  bool thread_safe() const override { return true; }

 private:
  std::shared_ptr<const Trajectories> traj_;
  OracleModel model_;
};

}  // namespace edgetile
