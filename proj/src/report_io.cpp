#include "edgetile/report_io.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "edgetile/errors.hpp"

namespace edgetile {

namespace {

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
  }
}

template <typename Writer>
void write_file(const std::filesystem::path& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  writer(out);
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::string num(double v, int decimals = 2) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(decimals) << v;
  return os.str();
}

const char* stage_colour(Stage s) {
  switch (s) {
    case Stage::kS1: return "#d62728";
    case Stage::kS2: return "#1f77b4";
    case Stage::kS3: return "#2ca02c";
  }
  return "#000000";
}

}  // namespace

void write_timeline_svg(std::ostream& out, const RunReport& report) {
  constexpr double kWidth = 800, kHeight = 300, kPad = 40;
  double max_time = 0.0;
  for (const auto& f : report.frames) max_time = std::max(max_time, f.model_time);
  if (max_time <= 0.0) max_time = 1.0;
  const double bar = (kWidth - 2 * kPad) / static_cast<double>(std::max<std::size_t>(1, report.frames.size()));

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\">\n";
  out << "<text x=\"" << kPad << "\" y=\"20\" font-size=\"14\">" << report.config
      << " modeled time per frame (max " << num(max_time, 4) << " s)</text>\n";
  for (std::size_t i = 0; i < report.frames.size(); ++i) {
    const auto& f = report.frames[i];
    const double h = (kHeight - 2 * kPad) * f.model_time / max_time;
    out << "<rect x=\"" << num(kPad + bar * static_cast<double>(i)) << "\" y=\""
        << num(kHeight - kPad - h) << "\" width=\"" << num(bar) << "\" height=\"" << num(h)
        << "\" fill=\"" << stage_colour(f.stage) << "\"/>\n";
  }
  out << "</svg>\n";
}

void write_report(const RunReport& report, const std::filesystem::path& dir, bool plot) {
  ensure_dir(dir);
  write_file(dir / "frames.csv", [&](std::ostream& o) { write_frames_csv(o, report); });
  write_file(dir / "summary.csv", [&](std::ostream& o) { write_summary_csv(o, report); });
  if (plot) {
    write_file(dir / "timeline.svg", [&](std::ostream& o) { write_timeline_svg(o, report); });
  }
}

std::vector<StageConfig> parse_stage_list(const std::string& text) {
  std::vector<StageConfig> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) continue;
    out.push_back(StageConfig::parse(item));
  }
  if (out.empty()) throw InvalidConfig("no stage configurations given");
  return out;
}

SweepReport sweep(const std::vector<StageConfig>& configs, const RunConfig& base) {
  if (configs.empty()) throw InvalidConfig("sweep needs at least one configuration");
  SweepReport result;
  for (const auto& stages : configs) {
    RunConfig cfg = base;
    cfg.stages = stages;
    SweepEntry entry{stages, std::nullopt, {}};
    try {
      Experiment exp = make_experiment(cfg);
      entry.report = run_experiment(cfg, exp);
    } catch (const Error& e) {
      entry.error = e.what();
      result.entries.push_back(std::move(entry));
      result.partial = true;
      break;
    }
    result.entries.push_back(std::move(entry));
  }
  return result;
}

void write_sweep_svg(std::ostream& out, const SweepReport& sweep) {
  constexpr double kWidth = 640, kHeight = 480, kPad = 60;
  std::vector<const RunReport*> runs;
  for (const auto& e : sweep.entries) {
    if (e.report && e.report->sen) runs.push_back(&*e.report);
  }
  double max_apt = 0.0;
  for (const auto* r : runs) max_apt = std::max(max_apt, r->apt);
  if (max_apt <= 0.0) max_apt = 1.0;
  max_apt *= 1.1;

  auto px = [&](double apt) { return kPad + (kWidth - 2 * kPad) * apt / max_apt; };
  auto py = [&](double sen) { return kHeight - kPad - (kHeight - 2 * kPad) * sen; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\">\n";
  out << "<line x1=\"" << kPad << "\" y1=\"" << kHeight - kPad << "\" x2=\"" << kWidth - kPad
      << "\" y2=\"" << kHeight - kPad << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kPad << "\" y1=\"" << kPad << "\" x2=\"" << kPad << "\" y2=\""
      << kHeight - kPad << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 15
      << "\" text-anchor=\"middle\">APT (s)</text>\n";
  out << "<text x=\"15\" y=\"" << kHeight / 2 << "\" transform=\"rotate(-90 15 " << kHeight / 2
      << ")\" text-anchor=\"middle\">SEN</text>\n";
  out << "<text x=\"" << kPad - 5 << "\" y=\"" << num(py(1.0)) << "\" text-anchor=\"end\">1.0</text>\n";
  out << "<text x=\"" << kPad - 5 << "\" y=\"" << num(py(0.0)) << "\" text-anchor=\"end\">0.0</text>\n";
  out << "<text x=\"" << kWidth - kPad << "\" y=\"" << kHeight - kPad + 18
      << "\" text-anchor=\"end\">" << num(max_apt, 4) << "</text>\n";
  for (const auto* r : runs) {
    const std::string x = num(px(r->apt));
    const std::string y = num(py(*r->sen));
    out << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"4\" fill=\"#1f77b4\"/>\n";
    out << "<text x=\"" << x << "\" y=\"" << y << "\" dx=\"6\" dy=\"-6\" font-size=\"12\">"
        << r->config << "</text>\n";
  }
  out << "</svg>\n";
}

void write_sweep(const SweepReport& sweep, const std::filesystem::path& dir, bool plot) {
  ensure_dir(dir);
  write_file(dir / "sweep.csv", [&](std::ostream& o) {
    o << "status,";
    write_summary_header(o);
    for (const auto& e : sweep.entries) {
      if (e.report) {
        o << "ok,";
        write_summary_row(o, *e.report);
      } else {
        o << "failed," << e.stages.label() << ",,,,,,,,\n";
      }
    }
    if (sweep.partial) o << "partial,,,,,,,,,\n";
  });
  for (const auto& e : sweep.entries) {
    if (e.report) write_report(*e.report, dir / e.stages.label(), false);
  }
  if (plot) write_file(dir / "sweep.svg", [&](std::ostream& o) { write_sweep_svg(o, sweep); });
}

}  // namespace edgetile
