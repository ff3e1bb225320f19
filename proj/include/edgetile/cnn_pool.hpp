#pragma once

#include <chrono>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "edgetile/geometry.hpp"
#include "edgetile/image.hpp"

namespace edgetile {

enum class CnnRole { kStage1Full, kTile };

/// Benchmarked cost of one detector at one input size.
struct CnnProfile {
  std::string name;
  int input_size = 0;
  double latency = 0.0;                   // seconds per inference
  std::map<std::string, double> energy;   // joules per inference, by platform id
  CnnRole role = CnnRole::kTile;

  /// Throws InvalidConfig when the platform has no energy entry.
  double energy_for(const std::string& platform) const;
};

/// Immutable registry of tile detectors keyed by input size, plus the
/// full-frame stage-1 detector.
class CnnPool {
 public:
  /// Validates positive latencies, non-negative energies, strictly increasing
  /// tile sizes and exactly one stage-1 profile. Throws InvalidConfig.
  explicit CnnPool(std::vector<CnnProfile> profiles);

  const CnnProfile& stage1() const { return stage1_; }
  const std::vector<CnnProfile>& tiles() const { return tiles_; }
  std::vector<int> tile_sizes() const;

  /// Throws UnknownTileSize.
  const CnnProfile& lookup(int tile_size) const;

  /// Profile that processes `t`: the stage-1 detector for full-frame tiles.
  const CnnProfile& profile_for(const Tile& t) const;

  double min_tile_latency() const;

  /// Throws InvalidConfig unless every profile has energy for the platform.
  void require_platform(const std::string& platform) const;

 private:
  std::vector<CnnProfile> tiles_;
  CnnProfile stage1_;
};

/// The profiled pool: DroNet_V3 at 512 for stage 1 and DroNet_Tile at
/// 512/416/352/256/128, with energies for every built-in platform.
CnnPool default_pool();

const CnnProfile& lookup(const CnnPool& pool, int tile_size);

/// Copy of `pool` whose stage-1 latency and energies are multiplied by `factor`.
CnnPool scale_stage1(const CnnPool& pool, double factor, const std::string& name);

/// Reads a pool from key-value sections:
///
///   [stage1]
///   role = stage1
///   name = DroNet_V3
///   size = 512
///   latency = 0.08
///   energy.cpu = 1.2
///
/// Every section is one profile; `role` defaults to `tile`.
CnnPool parse_pool(std::istream& in);
CnnPool load_pool(const std::string& path);
void write_pool(std::ostream& out, const CnnPool& pool);

/// Pluggable detector backend. Implementations report boxes in the
/// coordinates of `region` (origin at the region's top-left corner).
class Detector {
 public:
  virtual ~Detector() = default;
  virtual std::vector<Detection> detect(const Frame& frame, const Tile& region,
                                        const CnnProfile& profile) = 0;
  /// Whether concurrent calls on distinct regions are allowed.
  virtual bool thread_safe() const { return false; }
};

enum class CostMode { kModeled, kWallClock };

/// Running time/energy charge for one frame.
struct CostLedger {
  std::string platform;
  CostMode mode = CostMode::kModeled;
  double seconds = 0.0;
  double joules = 0.0;

  void charge(const CnnProfile& profile);
  void charge(const CnnProfile& profile, std::chrono::duration<double> measured);
};

/// Runs the backend on `region`, translates results to frame coordinates,
/// clips them to the region, and charges the ledger. Backend failures
/// surface as DetectorError.
std::vector<Detection> run_detector(Detector& detector, const Frame& frame, const Tile& region,
                                    const CnnProfile& profile, CostLedger& ledger);

}  // namespace edgetile
