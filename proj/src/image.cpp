#include "edgetile/image.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace edgetile {

GrayImage::GrayImage(int width, int height, float fill)
    : width_(width),
      height_(height),
      pixels_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill) {}

float GrayImage::clamped(int x, int y) const {
  return at(std::clamp(x, 0, width_ - 1), std::clamp(y, 0, height_ - 1));
}

float GrayImage::sample(double x, double y) const {
  const double fx = std::floor(x);
  const double fy = std::floor(y);
  const int x0 = static_cast<int>(fx);
  const int y0 = static_cast<int>(fy);
  const double ax = x - fx;
  const double ay = y - fy;
  const double top = (1.0 - ax) * clamped(x0, y0) + ax * clamped(x0 + 1, y0);
  const double bot = (1.0 - ax) * clamped(x0, y0 + 1) + ax * clamped(x0 + 1, y0 + 1);
  return static_cast<float>((1.0 - ay) * top + ay * bot);
}

double GrayImage::mean() const {
  if (pixels_.empty()) return 0.0;
  const double sum = std::accumulate(pixels_.begin(), pixels_.end(), 0.0);
  return sum / static_cast<double>(pixels_.size());
}

}  // namespace edgetile
