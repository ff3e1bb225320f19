#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>

#include "edgetile/geometry.hpp"
#include "edgetile/sequence.hpp"

namespace edgetile {

/// Parses `frame_index object_id x y w h` records, one per line,
/// whitespace-separated; '#' starts a comment. The table has one entry per
/// frame up to the highest index seen, or `frame_count` when given.
/// Throws ParseError (with the line number) and, when `dims` is given,
/// OutOfBounds for boxes leaving the frame.
GroundTruthTable parse_annotations(std::istream& in, std::optional<FrameDims> dims = std::nullopt,
                                   std::optional<std::size_t> frame_count = std::nullopt);
GroundTruthTable load_annotations(const std::filesystem::path& path,
                                  std::optional<FrameDims> dims = std::nullopt,
                                  std::optional<std::size_t> frame_count = std::nullopt);

void write_annotations(std::ostream& out, const GroundTruthTable& table);

}  // namespace edgetile
