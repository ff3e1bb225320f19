#include "edgetile/cnn_pool.hpp"

#include <algorithm>
#include <exception>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "edgetile/errors.hpp"
#include "edgetile/platforms.hpp"

namespace edgetile {

double CnnProfile::energy_for(const std::string& platform) const {
  auto it = energy.find(platform);
  if (it == energy.end()) {
    throw InvalidConfig("profile '" + name + "' (" + std::to_string(input_size) +
                        ") has no energy for platform '" + platform + "'");
  }
  return it->second;
}

CnnPool::CnnPool(std::vector<CnnProfile> profiles) {
  int stage1_count = 0;
  for (auto& p : profiles) {
    if (p.input_size <= 0) throw InvalidConfig("profile '" + p.name + "': input size must be > 0");
    if (!(p.latency > 0.0)) throw InvalidConfig("profile '" + p.name + "': latency must be > 0");
    for (const auto& [platform, joules] : p.energy) {
      if (!(joules >= 0.0)) {
        throw InvalidConfig("profile '" + p.name + "': negative energy for " + platform);
      }
    }
    if (p.role == CnnRole::kStage1Full) {
      ++stage1_count;
      stage1_ = p;
    } else {
      tiles_.push_back(std::move(p));
    }
  }
  if (stage1_count != 1) {
    throw InvalidConfig("pool needs exactly one stage-1 profile, got " +
                        std::to_string(stage1_count));
  }
  if (tiles_.empty()) throw InvalidConfig("pool has no tile profiles");
  std::sort(tiles_.begin(), tiles_.end(),
            [](const CnnProfile& a, const CnnProfile& b) { return a.input_size < b.input_size; });
  for (std::size_t i = 1; i < tiles_.size(); ++i) {
    if (tiles_[i].input_size == tiles_[i - 1].input_size) {
      throw InvalidConfig("duplicate tile size " + std::to_string(tiles_[i].input_size));
    }
  }
}

std::vector<int> CnnPool::tile_sizes() const {
  std::vector<int> sizes;
  sizes.reserve(tiles_.size());
  for (const auto& p : tiles_) sizes.push_back(p.input_size);
  return sizes;
}

const CnnProfile& CnnPool::lookup(int tile_size) const {
  auto it = std::lower_bound(tiles_.begin(), tiles_.end(), tile_size,
                             [](const CnnProfile& p, int s) { return p.input_size < s; });
  if (it == tiles_.end() || it->input_size != tile_size) {
    throw UnknownTileSize("no tile detector for size " + std::to_string(tile_size));
  }
  return *it;
}

const CnnProfile& CnnPool::profile_for(const Tile& t) const {
  return t.anchor == Anchor::kFullFrame ? stage1_ : lookup(t.size);
}

double CnnPool::min_tile_latency() const {
  double best = tiles_.front().latency;
  for (const auto& p : tiles_) best = std::min(best, p.latency);
  return best;
}

void CnnPool::require_platform(const std::string& platform) const {
  stage1_.energy_for(platform);
  for (const auto& p : tiles_) p.energy_for(platform);
}

namespace {

CnnProfile make_profile(std::string name, int size, double latency, CnnRole role) {
  CnnProfile p{std::move(name), size, latency, {}, role};
  for (const auto& platform : builtin_platform_powers()) {
    p.energy[platform.id] = platform.active_watts * latency;
  }
  return p;
}

}  // namespace

CnnPool default_pool() {
  return CnnPool({
      make_profile("DroNet_V3", 512, 0.08, CnnRole::kStage1Full),
      make_profile("DroNet_Tile", 512, 0.03, CnnRole::kTile),
      make_profile("DroNet_Tile", 416, 0.02, CnnRole::kTile),
      make_profile("DroNet_Tile", 352, 0.014, CnnRole::kTile),
      make_profile("DroNet_Tile", 256, 0.008, CnnRole::kTile),
      make_profile("DroNet_Tile", 128, 0.002, CnnRole::kTile),
  });
}

const CnnProfile& lookup(const CnnPool& pool, int tile_size) { return pool.lookup(tile_size); }

CnnPool scale_stage1(const CnnPool& pool, double factor, const std::string& name) {
  std::vector<CnnProfile> profiles = pool.tiles();
  CnnProfile s1 = pool.stage1();
  s1.name = name;
  s1.latency *= factor;
  for (auto& [platform, joules] : s1.energy) joules *= factor;
  profiles.push_back(std::move(s1));
  return CnnPool(std::move(profiles));
}

CnnPool parse_pool(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ParseError(e.line(), e.message());
  }
  std::vector<CnnProfile> profiles;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw InvalidConfig("pool entry '" + section + "' is not a section");
    CnnProfile p;
    p.name = section;
    try {
      for (const auto& [key, value] : body) {
        const std::string text = value.get_value<std::string>();
        if (key == "name") {
          p.name = text;
        } else if (key == "size") {
          p.input_size = value.get_value<int>();
        } else if (key == "latency") {
          p.latency = value.get_value<double>();
        } else if (key == "role") {
          if (text == "stage1") {
            p.role = CnnRole::kStage1Full;
          } else if (text == "tile") {
            p.role = CnnRole::kTile;
          } else {
            throw InvalidConfig("unknown role '" + text + "'");
          }
        } else if (key.rfind("energy.", 0) == 0) {
          p.energy[key.substr(7)] = value.get_value<double>();
        } else {
          throw InvalidConfig("unknown key '" + key + "'");
        }
      }
    } catch (const pt::ptree_bad_data& e) {
      throw InvalidConfig("section [" + section + "]: " + e.what());
    } catch (const InvalidConfig& e) {
      throw InvalidConfig("section [" + section + "]: " + e.what());
    }
    profiles.push_back(std::move(p));
  }
  return CnnPool(std::move(profiles));
}

CnnPool load_pool(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open pool file '" + path + "'");
  return parse_pool(in);
}

void write_pool(std::ostream& out, const CnnPool& pool) {
  auto emit = [&out](const std::string& section, const CnnProfile& p) {
    out << '[' << section << "]\n"
        << "role = " << (p.role == CnnRole::kStage1Full ? "stage1" : "tile") << '\n'
        << "name = " << p.name << '\n'
        << "size = " << p.input_size << '\n'
        << std::setprecision(17) << "latency = " << p.latency << '\n';
    for (const auto& [platform, joules] : p.energy) {
      out << "energy." << platform << " = " << joules << '\n';
    }
    out << '\n';
  };
  emit("stage1", pool.stage1());
  for (const auto& p : pool.tiles()) emit("tile" + std::to_string(p.input_size), p);
}

void CostLedger::charge(const CnnProfile& profile) {
  seconds += profile.latency;
  joules += profile.energy_for(platform);
}

void CostLedger::charge(const CnnProfile& profile, std::chrono::duration<double> measured) {
  if (mode == CostMode::kWallClock) {
    seconds += measured.count();
    joules += profile.energy_for(platform) * measured.count() / profile.latency;
  } else {
    charge(profile);
  }
}

std::vector<Detection> run_detector(Detector& detector, const Frame& frame, const Tile& region,
                                    const CnnProfile& profile, CostLedger& ledger) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<Detection> local;
  try {
    local = detector.detect(frame, region, profile);
  } catch (const DetectorError&) {
    throw;
  } catch (const std::exception& e) {
    throw DetectorError(std::string("detector backend failed: ") + e.what());
  }
  ledger.charge(profile, std::chrono::steady_clock::now() - start);

  const FrameDims extent{tile_width(region, frame.dims), tile_height(region, frame.dims)};
  std::vector<Detection> global;
  global.reserve(local.size());
  for (auto& d : local) {
    auto clipped = clip_to_frame(d.box, extent);
    if (!clipped) continue;
    d.box = *clipped;
    d.box.x += region.x;
    d.box.y += region.y;
    global.push_back(std::move(d));
  }
  return global;
}

}  // namespace edgetile
