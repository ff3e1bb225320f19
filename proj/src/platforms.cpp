#include "edgetile/platforms.hpp"

#include <array>

namespace edgetile {

namespace {
constexpr std::array<PlatformPower, 3> kPlatforms{{
    {"cpu", 15.0, 6.0},
    {"odroid", 4.5, 2.0},
    {"rpi", 2.5, 1.4},
}};
}  // namespace

std::span<const PlatformPower> builtin_platform_powers() { return kPlatforms; }

}  // namespace edgetile
