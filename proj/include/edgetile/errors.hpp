#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace edgetile {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define EDGETILE_DEFINE_ERROR(Name)      \
  class Name : public Error {            \
   public:                               \
    using Error::Error;                  \
  }

EDGETILE_DEFINE_ERROR(TileLargerThanFrame);
EDGETILE_DEFINE_ERROR(UnknownTileSize);
EDGETILE_DEFINE_ERROR(DetectorError);
EDGETILE_DEFINE_ERROR(ImageTooSmall);
EDGETILE_DEFINE_ERROR(InvalidConfig);
EDGETILE_DEFINE_ERROR(InvalidSpec);
EDGETILE_DEFINE_ERROR(EmptySequence);
EDGETILE_DEFINE_ERROR(EmptyRun);
EDGETILE_DEFINE_ERROR(NoGroundTruth);
EDGETILE_DEFINE_ERROR(MixedDimensions);
EDGETILE_DEFINE_ERROR(EmptyDirectory);
EDGETILE_DEFINE_ERROR(CorruptImage);
EDGETILE_DEFINE_ERROR(OutOfBounds);
EDGETILE_DEFINE_ERROR(IoError);

#undef EDGETILE_DEFINE_ERROR

/// Parse failure in a text input; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace edgetile
