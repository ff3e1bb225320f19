#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>

#include "edgetile/cnn_pool.hpp"
#include "edgetile/metrics.hpp"
#include "edgetile/scheduler.hpp"
#include "edgetile/sequence.hpp"
#include "edgetile/simulator.hpp"

namespace edgetile {

enum class RunMode { kSimulate, kDataset };

/// Everything needed to reproduce one run. Loaded from key-value sections
/// ([run], [scene], [oracle], [pipeline]); see README for the keys.
struct RunConfig {
  RunMode mode = RunMode::kSimulate;
  StageConfig stages{1, 3, 5};
  std::optional<std::filesystem::path> pool_path;  // default pool when empty
  std::string platform = "cpu";
  double iou_threshold = kDefaultMatchIou;
  double frame_period = kDefaultFramePeriod;
  std::optional<SceneSpec> scene;                         // simulate mode
  std::optional<std::filesystem::path> dataset_dir;       // dataset mode
  std::optional<std::filesystem::path> annotations_path;  // dataset mode
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 1;
  OracleModel oracle;
  PipelineOptions pipeline;

  /// Sets the seed of the run, the scene and the oracle.
  void set_seed(std::uint64_t s);
  /// Throws InvalidConfig unless exactly the inputs of the mode are set.
  void validate() const;
  RunOptions run_options() const;
};

/// Throws ParseError for malformed text, InvalidConfig for bad values.
/// Relative paths are resolved against `base_dir`.
RunConfig parse_run_config(std::istream& in, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

/// Materialized inputs of a run: sequence, detector backend, pool, platform.
struct Experiment {
  std::unique_ptr<FrameSource> sequence;
  std::shared_ptr<const Trajectories> trajectories;
  std::unique_ptr<Detector> detector;
  CnnPool pool;
  PlatformProfile platform;
};

Experiment make_experiment(const RunConfig& cfg);

/// Runs `cfg.stages` on the experiment inputs.
RunReport run_experiment(const RunConfig& cfg, Experiment& exp);

}  // namespace edgetile
