#include "edgetile/run_config.hpp"

#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "edgetile/annotations.hpp"
#include "edgetile/errors.hpp"
#include "edgetile/pgm.hpp"

namespace edgetile {

void RunConfig::set_seed(std::uint64_t s) {
  seed = s;
  oracle.seed = s;
  if (scene) scene->seed = s;
}

void RunConfig::validate() const {
  stages.validate();
  if (!(iou_threshold > 0.0 && iou_threshold < 1.0)) {
    throw InvalidConfig("iou_threshold must be in (0, 1)");
  }
  if (!(frame_period > 0.0)) throw InvalidConfig("frame_period must be > 0");
  if (mode == RunMode::kSimulate) {
    if (!scene) throw InvalidConfig("simulate mode needs a [scene] section");
    if (dataset_dir || annotations_path) {
      throw InvalidConfig("simulate mode does not take a dataset");
    }
    try {
      scene->validate();
    } catch (const InvalidSpec& e) {
      throw InvalidConfig(std::string("[scene]: ") + e.what());
    }
  } else {
    if (!dataset_dir || !annotations_path) {
      throw InvalidConfig("dataset mode needs both 'dataset' and 'annotations'");
    }
    if (scene) throw InvalidConfig("dataset mode does not take a [scene] section");
  }
  try {
    oracle.validate();
  } catch (const InvalidSpec& e) {
    throw InvalidConfig(std::string("[oracle]: ") + e.what());
  }
}

RunOptions RunConfig::run_options() const { return {pipeline, iou_threshold, frame_period}; }

namespace {

namespace pt = boost::property_tree;

template <typename T>
T as(const pt::ptree& node, const std::string& where) {
  auto v = node.get_value_optional<T>();
  if (!v) throw InvalidConfig(where + ": cannot parse '" + node.data() + "'");
  return *v;
}

bool as_bool(const pt::ptree& node, const std::string& where) {
  const std::string v = node.data();
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw InvalidConfig(where + ": expected a boolean, got '" + v + "'");
}

std::vector<SceneEntry> parse_entries(const std::string& text, const std::string& where) {
  std::vector<SceneEntry> out;
  std::string spaced = text;
  for (char& c : spaced) {
    if (c == ',') c = ' ';
  }
  std::istringstream in(spaced);
  std::string item;
  while (in >> item) {
    const auto colon = item.find(':');
    try {
      if (colon == std::string::npos) throw std::invalid_argument(item);
      std::size_t used_a = 0, used_b = 0;
      const auto frame = std::stoul(item.substr(0, colon), &used_a);
      const auto object = std::stoul(item.substr(colon + 1), &used_b);
      if (used_a != colon || used_b != item.size() - colon - 1) {
        throw std::invalid_argument(item);
      }
      out.push_back({frame, object});
    } catch (const std::exception&) {
      throw InvalidConfig(where + ": entry '" + item + "' is not FRAME:OBJECT");
    }
  }
  return out;
}

using Handler = std::function<void(const pt::ptree&, const std::string&)>;

void apply(const pt::ptree& section, const std::string& name,
           const std::map<std::string, Handler>& handlers) {
  for (const auto& [key, value] : section) {
    const std::string where = "[" + name + "] " + key;
    auto it = handlers.find(key);
    if (it == handlers.end()) throw InvalidConfig("unknown key " + where);
    it->second(value, where);
  }
}

}  // namespace

RunConfig parse_run_config(std::istream& in, const std::filesystem::path& base_dir) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  pt::ptree tree;
  try {
    std::istringstream body(text);
    pt::read_ini(body, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ParseError(e.line(), e.message());
  }
  // read_ini drops sections without keys; restore them so "[scene]" alone selects defaults.
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) {
    const auto first = line.find_first_not_of(" \t");
    const auto last = line.find_last_not_of(" \t\r");
    if (first == std::string::npos || line[first] != '[' || line[last] != ']') continue;
    const std::string name = line.substr(first + 1, last - first - 1);
    if (tree.find(name) == tree.not_found()) tree.push_back({name, pt::ptree{}});
  }

  RunConfig cfg;
  std::optional<std::uint64_t> seed;
  auto path = [&base_dir](const pt::ptree& v) {
    std::filesystem::path p = v.data();
    return p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  };

  for (const auto& [name, section] : tree) {
    if (section.empty() && !section.data().empty()) {
      throw InvalidConfig("key '" + name + "' outside of a section");
    }
    if (name == "run") {
      apply(section, name,
            {{"mode",
              [&](const pt::ptree& v, const std::string& w) {
                if (v.data() == "simulate") {
                  cfg.mode = RunMode::kSimulate;
                } else if (v.data() == "dataset") {
                  cfg.mode = RunMode::kDataset;
                } else {
                  throw InvalidConfig(w + ": expected simulate or dataset");
                }
              }},
             {"stages", [&](const pt::ptree& v, const std::string&) {
                cfg.stages = StageConfig::parse(v.data());
              }},
             {"pool", [&](const pt::ptree& v, const std::string&) { cfg.pool_path = path(v); }},
             {"platform", [&](const pt::ptree& v, const std::string&) { cfg.platform = v.data(); }},
             {"iou_threshold",
              [&](const pt::ptree& v, const std::string& w) { cfg.iou_threshold = as<double>(v, w); }},
             {"frame_period",
              [&](const pt::ptree& v, const std::string& w) { cfg.frame_period = as<double>(v, w); }},
             {"seed", [&](const pt::ptree& v, const std::string& w) { seed = as<std::uint64_t>(v, w); }},
             {"out", [&](const pt::ptree& v, const std::string&) { cfg.output_dir = path(v); }},
             {"dataset", [&](const pt::ptree& v, const std::string&) { cfg.dataset_dir = path(v); }},
             {"annotations",
              [&](const pt::ptree& v, const std::string&) { cfg.annotations_path = path(v); }}});
    } else if (name == "scene") {
      SceneSpec& s = cfg.scene.emplace();
      apply(section, name,
            {{"width", [&](const pt::ptree& v, const std::string& w) { s.dims.width = as<int>(v, w); }},
             {"height", [&](const pt::ptree& v, const std::string& w) { s.dims.height = as<int>(v, w); }},
             {"frames", [&](const pt::ptree& v, const std::string& w) { s.frames = as<std::size_t>(v, w); }},
             {"objects",
              [&](const pt::ptree& v, const std::string& w) { s.n_objects = as<std::size_t>(v, w); }},
             {"min_size", [&](const pt::ptree& v, const std::string& w) { s.min_size = as<int>(v, w); }},
             {"max_size", [&](const pt::ptree& v, const std::string& w) { s.max_size = as<int>(v, w); }},
             {"min_speed", [&](const pt::ptree& v, const std::string& w) { s.min_speed = as<double>(v, w); }},
             {"max_speed", [&](const pt::ptree& v, const std::string& w) { s.max_speed = as<double>(v, w); }},
             {"motion",
              [&](const pt::ptree& v, const std::string& w) {
                if (v.data() == "linear") {
                  s.motion = MotionModel::kLinear;
                } else if (v.data() == "random_walk") {
                  s.motion = MotionModel::kRandomWalk;
                } else {
                  throw InvalidConfig(w + ": expected linear or random_walk");
                }
              }},
             {"entries",
              [&](const pt::ptree& v, const std::string& w) { s.entries = parse_entries(v.data(), w); }}});
    } else if (name == "oracle") {
      OracleModel& o = cfg.oracle;
      apply(section, name,
            {{"base_recall", [&](const pt::ptree& v, const std::string& w) { o.base_recall = as<double>(v, w); }},
             {"min_apparent", [&](const pt::ptree& v, const std::string& w) { o.min_apparent = as<double>(v, w); }},
             {"fp_rate", [&](const pt::ptree& v, const std::string& w) { o.fp_rate = as<double>(v, w); }},
             {"fp_min_size", [&](const pt::ptree& v, const std::string& w) { o.fp_min_size = as<int>(v, w); }},
             {"fp_max_size", [&](const pt::ptree& v, const std::string& w) { o.fp_max_size = as<int>(v, w); }},
             {"max_jitter", [&](const pt::ptree& v, const std::string& w) { o.max_jitter = as<int>(v, w); }}});
    } else if (name == "pipeline") {
      PipelineOptions& p = cfg.pipeline;
      apply(section, name,
            {{"tracker_cost", [&](const pt::ptree& v, const std::string& w) { p.tracker_cost = as<double>(v, w); }},
             {"tile_margin", [&](const pt::ptree& v, const std::string& w) { p.tile_margin = as<int>(v, w); }},
             {"nms_iou", [&](const pt::ptree& v, const std::string& w) { p.nms_iou = as<double>(v, w); }},
             {"window", [&](const pt::ptree& v, const std::string& w) { p.lk.window = as<int>(v, w); }},
             {"levels", [&](const pt::ptree& v, const std::string& w) { p.lk.levels = as<int>(v, w); }},
             {"max_iterations",
              [&](const pt::ptree& v, const std::string& w) { p.lk.max_iterations = as<int>(v, w); }},
             {"epsilon", [&](const pt::ptree& v, const std::string& w) { p.lk.epsilon = as<double>(v, w); }},
             {"min_eigenvalue",
              [&](const pt::ptree& v, const std::string& w) { p.lk.min_eigenvalue = as<double>(v, w); }},
             {"max_residual",
              [&](const pt::ptree& v, const std::string& w) { p.lk.max_residual = as<double>(v, w); }},
             {"parallel_tiles",
              [&](const pt::ptree& v, const std::string& w) { p.parallel_tiles = as_bool(v, w); }},
             {"fuse_tracks", [&](const pt::ptree& v, const std::string& w) { p.fuse_tracks = as_bool(v, w); }},
             {"cost_mode",
              [&](const pt::ptree& v, const std::string& w) {
                if (v.data() == "modeled") {
                  p.cost_mode = CostMode::kModeled;
                } else if (v.data() == "wallclock") {
                  p.cost_mode = CostMode::kWallClock;
                } else {
                  throw InvalidConfig(w + ": expected modeled or wallclock");
                }
              }}});
    } else {
      throw InvalidConfig("unknown section [" + name + "]");
    }
  }

  cfg.set_seed(seed.value_or(cfg.seed));
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfig("cannot open config '" + path.string() + "'");
  return parse_run_config(in, path.parent_path());
}

Experiment make_experiment(const RunConfig& cfg) {
  cfg.validate();
  CnnPool pool = cfg.pool_path ? load_pool(cfg.pool_path->string()) : default_pool();
  PlatformProfile platform = builtin_platform(cfg.platform);

  std::unique_ptr<FrameSource> sequence;
  std::shared_ptr<const Trajectories> traj;
  if (cfg.mode == RunMode::kSimulate) {
    auto synthetic = std::make_unique<SyntheticSequence>(generate_scene(*cfg.scene));
    traj = synthetic->trajectories();
    sequence = std::move(synthetic);
  } else {
    std::vector<GrayImage> frames = load_sequence(*cfg.dataset_dir);
    const FrameDims dims = frames.front().dims();
    const std::size_t n = frames.size();
    GroundTruthTable truth = load_annotations(*cfg.annotations_path, dims, n);
    traj = std::make_shared<const Trajectories>(trajectories_from_truth(truth, dims));
    sequence = std::make_unique<InMemorySequence>(std::move(frames), std::move(truth));
  }
  OracleModel oracle = cfg.oracle;
  oracle.seed = cfg.seed;
  auto detector = std::make_unique<OracleDetector>(traj, oracle);
  return Experiment{std::move(sequence), std::move(traj), std::move(detector), std::move(pool),
                    std::move(platform)};
}

RunReport run_experiment(const RunConfig& cfg, Experiment& exp) {
  return run(*exp.sequence, *exp.detector, exp.pool, cfg.stages, exp.platform, cfg.run_options());
}

}  // namespace edgetile
