// Command-line front end: single runs and stage-configuration sweeps.

#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "edgetile/errors.hpp"
#include "edgetile/pgm.hpp"
#include "edgetile/report_io.hpp"
#include "edgetile/run_config.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> platform;
  bool plot = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config, "Run configuration file")->required();
  cmd->add_option("--seed", flags.seed, "Override the seed");
  cmd->add_option("--out", flags.out, "Output directory");
  cmd->add_option("--platform", flags.platform, "Platform id (cpu, odroid, rpi)");
  cmd->add_flag("--plot", flags.plot, "Also write SVG plots");
}

edgetile::RunConfig resolve(const CommonFlags& flags) {
  edgetile::RunConfig cfg = edgetile::load_run_config(flags.config);
  if (flags.seed) cfg.set_seed(*flags.seed);
  if (flags.out) cfg.output_dir = *flags.out;
  if (flags.platform) cfg.platform = *flags.platform;
  cfg.validate();
  return cfg;
}

void print_summary(const edgetile::RunReport& r) {
  std::cout << std::fixed << std::setprecision(4) << r.config << " [" << r.platform << "]  SEN="
            << (r.sen ? std::to_string(*r.sen) : std::string("NA")) << "  APT=" << r.apt
            << " s  APC=" << r.apc << " W  stages S1/S2/S3=" << r.stage_histogram[0] << '/'
            << r.stage_histogram[1] << '/' << r.stage_histogram[2] << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tile-selection detection pipeline: simulate, run and sweep stage configurations"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  std::optional<std::string> stages;
  std::optional<std::string> export_frames;
  auto* run_cmd = app.add_subcommand("run", "Run one stage configuration");
  add_common(run_cmd, run_flags);
  run_cmd->add_option("--stages", stages, "Stage configuration N1-N2-N3, e.g. 1-3-5");
  run_cmd->add_option("--export-frames", export_frames,
                      "Write every input frame as an 8-bit PGM into this directory");

  CommonFlags sweep_flags;
  std::string configs;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run several stage configurations");
  add_common(sweep_cmd, sweep_flags);
  sweep_cmd->add_option("--configs", configs, "Comma-separated list, e.g. 1-1-1,1-3-5,1-10-5")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  edgetile::RunConfig cfg;
  try {
    if (*run_cmd) {
      cfg = resolve(run_flags);
      if (stages) cfg.stages = edgetile::StageConfig::parse(*stages);
    } else {
      cfg = resolve(sweep_flags);
    }
  } catch (const edgetile::InvalidConfig& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const edgetile::ParseError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const edgetile::InvalidSpec& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (*run_cmd) {
      edgetile::Experiment exp = edgetile::make_experiment(cfg);
      if (export_frames) {
        std::filesystem::create_directories(*export_frames);
        for (std::size_t t = 0; t < exp.sequence->size(); ++t) {
          std::ostringstream name;
          name << "frame_" << std::setw(5) << std::setfill('0') << t << ".pgm";
          edgetile::write_pgm(std::filesystem::path(*export_frames) / name.str(),
                              *exp.sequence->frame(t).image);
        }
      }
      const edgetile::RunReport report = edgetile::run_experiment(cfg, exp);
      edgetile::write_report(report, cfg.output_dir, run_flags.plot);
      print_summary(report);
    } else {
      const auto list = edgetile::parse_stage_list(configs);
      const edgetile::SweepReport result = edgetile::sweep(list, cfg);
      edgetile::write_sweep(result, cfg.output_dir, sweep_flags.plot);
      for (const auto& e : result.entries) {
        if (e.report) {
          print_summary(*e.report);
        } else {
          std::cerr << e.stages.label() << " failed: " << e.error << '\n';
        }
      }
      if (result.partial) return kExitRuntime;
    }
  } catch (const edgetile::InvalidConfig& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}
