#pragma once

#include <span>
#include <string>

namespace edgetile {

// Placeholder power figures for the built-in platforms. They only fix the
// relative ordering of modeled energy; no measured wattage is implied.
struct PlatformPower {
  const char* id;
  double active_watts;  // while a detector is running
  double idle_watts;
};

std::span<const PlatformPower> builtin_platform_powers();

}  // namespace edgetile
