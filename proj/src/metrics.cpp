#include "edgetile/metrics.hpp"

#include <algorithm>
#include <iomanip>
#include <numeric>
#include <ostream>

#include "edgetile/errors.hpp"
#include "edgetile/platforms.hpp"

namespace edgetile {

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::kS1: return "S1";
    case Stage::kS2: return "S2";
    case Stage::kS3: return "S3";
  }
  return "?";
}

MatchResult match_frame(std::span<const Detection> pred, std::span<const BoundingBox> gt,
                        double iou_thresh) {
  std::vector<std::size_t> order(pred.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return pred[a].score > pred[b].score; });

  MatchResult m;
  std::vector<bool> taken(gt.size(), false);
  for (std::size_t p : order) {
    double best = iou_thresh;
    std::optional<std::size_t> best_gt;
    for (std::size_t g = 0; g < gt.size(); ++g) {
      if (taken[g]) continue;
      const double v = iou(pred[p].box, gt[g]);
      if (v > best || (v == best && !best_gt)) {
        best = v;
        best_gt = g;
      }
    }
    if (best_gt) {
      taken[*best_gt] = true;
      m.pairs.emplace_back(p, *best_gt);
    }
  }
  m.tp = m.pairs.size();
  m.fn = gt.size() - m.tp;
  m.fp = pred.size() - m.tp;
  return m;
}

double sensitivity(std::span<const MatchResult> matches) {
  std::size_t tp = 0, total = 0;
  for (const auto& m : matches) {
    tp += m.tp;
    total += m.tp + m.fn;
  }
  if (total == 0) throw NoGroundTruth("no ground-truth objects to measure sensitivity on");
  return static_cast<double>(tp) / static_cast<double>(total);
}

double apt(std::span<const FrameResult> results) {
  if (results.empty()) throw EmptyRun("no frames processed");
  double sum = 0.0;
  for (const auto& r : results) sum += r.model_time;
  return sum / static_cast<double>(results.size());
}

std::vector<PlatformProfile> builtin_platforms() {
  std::vector<PlatformProfile> out;
  for (const auto& p : builtin_platform_powers()) {
    // One tracker step is modeled as 1 ms of active compute.
    out.push_back({p.id, p.active_watts * 0.001, p.idle_watts});
  }
  return out;
}

PlatformProfile builtin_platform(const std::string& id) {
  for (auto& p : builtin_platforms()) {
    if (p.id == id) return p;
  }
  throw InvalidConfig("unknown platform '" + id + "'");
}

double apc(std::span<const FrameResult> results, const PlatformProfile& platform,
           double frame_period) {
  if (results.empty()) throw EmptyRun("no frames processed");
  if (!(frame_period > 0.0)) throw InvalidConfig("frame period must be > 0");
  double sum = 0.0;
  for (const auto& r : results) sum += platform.idle_power + r.model_energy / frame_period;
  return sum / static_cast<double>(results.size());
}

RunReport summarize(std::string config, const PlatformProfile& platform,
                    std::vector<FrameResult> frames, std::vector<MatchResult> matches,
                    double frame_period) {
  RunReport r;
  r.config = std::move(config);
  r.platform = platform.id;
  r.apt = apt(frames);
  r.apc = apc(frames, platform, frame_period);
  try {
    r.sen = sensitivity(matches);
  } catch (const NoGroundTruth&) {
    r.sen.reset();
  }
  for (const auto& f : frames) ++r.stage_histogram[static_cast<std::size_t>(f.stage)];
  r.frames = std::move(frames);
  r.matches = std::move(matches);
  return r;
}

namespace {

struct Fixed {
  double v;
};

std::ostream& operator<<(std::ostream& os, Fixed f) {
  const auto flags = os.flags();
  const auto prec = os.precision();
  os << std::fixed << std::setprecision(6) << f.v;
  os.flags(flags);
  os.precision(prec);
  return os;
}

}  // namespace

void write_frames_csv(std::ostream& out, const RunReport& report) {
  out << "frame,stage,tp,fn,fp,model_time,energy\n";
  std::size_t tp = 0, fn = 0, fp = 0;
  double time = 0.0, energy = 0.0;
  for (std::size_t i = 0; i < report.frames.size(); ++i) {
    const auto& f = report.frames[i];
    const MatchResult m = i < report.matches.size() ? report.matches[i] : MatchResult{};
    out << f.frame_index << ',' << to_string(f.stage) << ',' << m.tp << ',' << m.fn << ','
        << m.fp << ',' << Fixed{f.model_time} << ',' << Fixed{f.model_energy} << '\n';
    tp += m.tp;
    fn += m.fn;
    fp += m.fp;
    time += f.model_time;
    energy += f.model_energy;
  }
  out << "total,," << tp << ',' << fn << ',' << fp << ',' << Fixed{time} << ',' << Fixed{energy}
      << '\n';
}

void write_summary_header(std::ostream& out) {
  out << "config,platform,frames,sen,apt,apc,s1,s2,s3\n";
}

void write_summary_row(std::ostream& out, const RunReport& report) {
  out << report.config << ',' << report.platform << ',' << report.frames.size() << ',';
  if (report.sen) {
    out << Fixed{*report.sen};
  } else {
    out << "NA";
  }
  out << ',' << Fixed{report.apt} << ',' << Fixed{report.apc} << ',' << report.stage_histogram[0]
      << ',' << report.stage_histogram[1] << ',' << report.stage_histogram[2] << '\n';
}

void write_summary_csv(std::ostream& out, const RunReport& report) {
  write_summary_header(out);
  write_summary_row(out, report);
}

}  // namespace edgetile
