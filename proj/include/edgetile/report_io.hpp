#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "edgetile/metrics.hpp"
#include "edgetile/run_config.hpp"
#include "edgetile/scheduler.hpp"

namespace edgetile {

/// Writes frames.csv and summary.csv (plus timeline.svg when `plot`) into
/// `dir`, creating it if needed. Output bytes depend only on the report.
/// Throws IoError.
void write_report(const RunReport& report, const std::filesystem::path& dir, bool plot = false);

/// Per-frame modeled time as bars coloured by stage.
void write_timeline_svg(std::ostream& out, const RunReport& report);

struct SweepEntry {
  StageConfig stages;
  std::optional<RunReport> report;
  std::string error;  // set when the run failed
};

struct SweepReport {
  std::vector<SweepEntry> entries;
  bool partial = false;  // a run failed and the remaining configs were skipped
};

/// Runs every configuration on the identical sequence and seed. The first
/// failing run stops the sweep; earlier results are kept and `partial` set.
/// Throws InvalidConfig for an empty config list.
SweepReport sweep(const std::vector<StageConfig>& configs, const RunConfig& base);

/// Parses "1-1-1,1-3-5". Throws InvalidConfig.
std::vector<StageConfig> parse_stage_list(const std::string& text);

/// APT (x) versus SEN (y) scatter, one labelled point per successful run.
void write_sweep_svg(std::ostream& out, const SweepReport& sweep);

/// sweep.csv with one summary row per config (failed rows flagged), one
/// sub-directory of per-frame results per config, and sweep.svg when `plot`.
void write_sweep(const SweepReport& sweep, const std::filesystem::path& dir, bool plot = false);

}  // namespace edgetile
