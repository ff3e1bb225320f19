#include "edgetile/annotations.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "edgetile/errors.hpp"

namespace edgetile {

GroundTruthTable parse_annotations(std::istream& in, std::optional<FrameDims> dims,
                                   std::optional<std::size_t> frame_count) {
  GroundTruthTable table;
  if (frame_count) table.resize(*frame_count);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<long long> v;
    std::string token;
    while (fields >> token) {
      std::size_t used = 0;
      long long value = 0;
      try {
        value = std::stoll(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size()) throw ParseError(lineno, "not an integer: '" + token + "'");
      v.push_back(value);
    }
    if (v.empty()) continue;
    if (v.size() != 6) {
      throw ParseError(lineno, "expected 6 fields (frame id x y w h), got " +
                                   std::to_string(v.size()));
    }
    if (v[0] < 0) throw ParseError(lineno, "negative frame index");
    if (v[4] <= 0 || v[5] <= 0) throw ParseError(lineno, "box width and height must be > 0");
    const auto frame = static_cast<std::size_t>(v[0]);
    BoundingBox box{static_cast<int>(v[2]), static_cast<int>(v[3]), static_cast<int>(v[4]),
                    static_cast<int>(v[5]), static_cast<int>(v[1])};
    if (dims && !inside_frame(box, *dims)) {
      throw OutOfBounds("line " + std::to_string(lineno) + ": box leaves the " +
                        std::to_string(dims->width) + "x" + std::to_string(dims->height) +
                        " frame");
    }
    if (frame_count && frame >= *frame_count) {
      throw OutOfBounds("line " + std::to_string(lineno) + ": frame " + std::to_string(frame) +
                        " beyond the sequence");
    }
    if (frame >= table.size()) table.resize(frame + 1);
    table[frame].push_back(box);
  }
  return table;
}

GroundTruthTable load_annotations(const std::filesystem::path& path, std::optional<FrameDims> dims,
                                  std::optional<std::size_t> frame_count) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open annotations '" + path.string() + "'");
  return parse_annotations(in, dims, frame_count);
}

void write_annotations(std::ostream& out, const GroundTruthTable& table) {
  out << "# frame object x y w h\n";
  for (std::size_t t = 0; t < table.size(); ++t) {
    for (const auto& b : table[t]) {
      out << t << ' ' << b.object_id.value_or(-1) << ' ' << b.x << ' ' << b.y << ' ' << b.w
          << ' ' << b.h << '\n';
    }
  }
}

}  // namespace edgetile
