#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "edgetile/geometry.hpp"

namespace edgetile {

/// Single-channel intensity image, values nominally in [0, 1], row-major.
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(int width, int height, float fill = 0.0f);

  int width() const { return width_; }
  int height() const { return height_; }
  FrameDims dims() const { return {width_, height_}; }
  bool empty() const { return pixels_.empty(); }

  float at(int x, int y) const { return pixels_[index(x, y)]; }
  float& at(int x, int y) { return pixels_[index(x, y)]; }

  /// Border-replicating read.
  float clamped(int x, int y) const;
  /// Bilinear sample with border replication.
  float sample(double x, double y) const;

  const std::vector<float>& pixels() const { return pixels_; }
  std::vector<float>& pixels() { return pixels_; }

  double mean() const;

  bool operator==(const GrayImage&) const = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<float> pixels_;
};

/// One element of a video sequence as seen by the pipeline.
struct Frame {
  std::size_t index = 0;
  FrameDims dims;
  std::shared_ptr<const GrayImage> image;
};

}  // namespace edgetile
