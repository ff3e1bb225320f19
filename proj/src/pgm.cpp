#include "edgetile/pgm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "edgetile/errors.hpp"

namespace edgetile {

namespace {

// Next header integer, skipping whitespace and '#' comments.
int header_int(std::istream& in) {
  for (;;) {
    const int c = in.peek();
    if (c == EOF) throw CorruptImage("truncated PGM header");
    if (std::isspace(c)) {
      in.get();
    } else if (c == '#') {
      std::string ignored;
      std::getline(in, ignored);
    } else {
      break;
    }
  }
  long value = 0;
  if (!(in >> value) || value < 0 || value > 1 << 30) {
    throw CorruptImage("bad PGM header field");
  }
  return static_cast<int>(value);
}

}  // namespace

GrayImage read_pgm(std::istream& in) {
  char magic[2] = {0, 0};
  if (!in.read(magic, 2) || magic[0] != 'P' || (magic[1] != '5' && magic[1] != '2')) {
    throw CorruptImage("not a PGM file (expected P5 or P2)");
  }
  const int width = header_int(in);
  const int height = header_int(in);
  const int maxval = header_int(in);
  if (width <= 0 || height <= 0) throw CorruptImage("PGM has empty dimensions");
  if (maxval <= 0 || maxval > 65535) throw CorruptImage("PGM maxval out of range");

  GrayImage img(width, height);
  auto& px = img.pixels();
  const auto range = static_cast<float>(maxval);
  if (magic[1] == '2') {
    for (auto& p : px) {
      int v = 0;
      if (!(in >> v) || v < 0 || v > maxval) throw CorruptImage("bad PGM sample");
      p = static_cast<float>(v) / range;
    }
    return img;
  }

  // Exactly one whitespace byte separates the header from the raster.
  if (!std::isspace(in.get())) throw CorruptImage("PGM header not terminated");
  const std::size_t bytes_per_sample = maxval < 256 ? 1 : 2;
  std::string raster(px.size() * bytes_per_sample, '\0');
  if (!in.read(raster.data(), static_cast<std::streamsize>(raster.size()))) {
    throw CorruptImage("truncated PGM raster");
  }
  for (std::size_t i = 0; i < px.size(); ++i) {
    int v = 0;
    if (bytes_per_sample == 1) {
      v = static_cast<unsigned char>(raster[i]);
    } else {
      v = (static_cast<unsigned char>(raster[2 * i]) << 8) |
          static_cast<unsigned char>(raster[2 * i + 1]);
    }
    if (v > maxval) throw CorruptImage("PGM sample exceeds maxval");
    px[i] = static_cast<float>(v) / range;
  }
  return img;
}

GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  try {
    return read_pgm(in);
  } catch (const CorruptImage& e) {
    throw CorruptImage(path.string() + ": " + e.what());
  }
}

void write_pgm(std::ostream& out, const GrayImage& img) {
  out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
  std::string raster(img.pixels().size(), '\0');
  for (std::size_t i = 0; i < raster.size(); ++i) {
    const float v = std::clamp(img.pixels()[i], 0.0f, 1.0f);
    raster[i] = static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0f)));
  }
  out.write(raster.data(), static_cast<std::streamsize>(raster.size()));
}

void write_pgm(const std::filesystem::path& path, const GrayImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  write_pgm(out, img);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::vector<GrayImage> load_sequence(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError("'" + dir.string() + "' is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".pgm") {
      files.push_back(entry.path());
    }
  }
  if (files.empty()) throw EmptyDirectory("no .pgm files in '" + dir.string() + "'");
  std::sort(files.begin(), files.end());

  std::vector<GrayImage> frames;
  frames.reserve(files.size());
  for (const auto& f : files) {
    frames.push_back(read_pgm(f));
    if (frames.back().dims() != frames.front().dims()) {
      throw MixedDimensions(f.filename().string() + " is " +
                            std::to_string(frames.back().width()) + "x" +
                            std::to_string(frames.back().height()) + ", expected " +
                            std::to_string(frames.front().width()) + "x" +
                            std::to_string(frames.front().height()));
    }
  }
  return frames;
}

}  // namespace edgetile
