#pragma once

#include <cstddef>
#include <vector>

#include "edgetile/geometry.hpp"
#include "edgetile/image.hpp"

namespace edgetile {

/// Random-access video sequence with per-frame ground truth.
class FrameSource {
 public:
  virtual ~FrameSource() = default;
  virtual std::size_t size() const = 0;
  virtual FrameDims dims() const = 0;
  virtual Frame frame(std::size_t t) const = 0;
  virtual std::vector<BoundingBox> ground_truth(std::size_t t) const = 0;
};

/// Ground-truth boxes per frame; every box carries its object_id.
using GroundTruthTable = std::vector<std::vector<BoundingBox>>;

/// Frames already decoded into memory, e.g. loaded from disk.
class InMemorySequence : public FrameSource {
 public:
  /// Throws EmptySequence / MixedDimensions.
  InMemorySequence(std::vector<GrayImage> frames, GroundTruthTable truth);

  std::size_t size() const override { return frames_.size(); }
  FrameDims dims() const override { return dims_; }
  Frame frame(std::size_t t) const override;
  std::vector<BoundingBox> ground_truth(std::size_t t) const override;
  const GroundTruthTable& truth() const { return truth_; }

 private:
  std::vector<std::shared_ptr<const GrayImage>> frames_;
  GroundTruthTable truth_;
  FrameDims dims_;
};

}  // namespace edgetile
