#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "edgetile/image.hpp"

namespace edgetile {

/// Decodes a portable graymap (binary P5 with 8- or 16-bit samples, or
/// ASCII P2) into [0, 1] intensities. Throws CorruptImage.
GrayImage read_pgm(std::istream& in);
GrayImage read_pgm(const std::filesystem::path& path);

/// Encodes as 8-bit binary P5; intensities are clamped to [0, 1] and rounded.
void write_pgm(std::ostream& out, const GrayImage& img);
void write_pgm(const std::filesystem::path& path, const GrayImage& img);

/// Reads every *.pgm in `dir`, ordered by file name (zero-padded indices
/// sort naturally). Throws IoError, EmptyDirectory, CorruptImage,
/// MixedDimensions.
std::vector<GrayImage> load_sequence(const std::filesystem::path& dir);

}  // namespace edgetile
