#include "edgetile/sequence.hpp"

#include <string>

#include "edgetile/errors.hpp"

namespace edgetile {

InMemorySequence::InMemorySequence(std::vector<GrayImage> frames, GroundTruthTable truth)
    : truth_(std::move(truth)) {
  if (frames.empty()) throw EmptySequence("sequence has no frames");
  dims_ = frames.front().dims();
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (frames[i].dims() != dims_) {
      throw MixedDimensions("frame " + std::to_string(i) + " is " +
                            std::to_string(frames[i].width()) + "x" +
                            std::to_string(frames[i].height()) + ", expected " +
                            std::to_string(dims_.width) + "x" + std::to_string(dims_.height));
    }
    frames_.push_back(std::make_shared<const GrayImage>(std::move(frames[i])));
  }
  truth_.resize(frames_.size());
}

Frame InMemorySequence::frame(std::size_t t) const { return Frame{t, dims_, frames_.at(t)}; }

std::vector<BoundingBox> InMemorySequence::ground_truth(std::size_t t) const {
  return truth_.at(t);
}

}  // namespace edgetile
