#include "core/metrics.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "core/errors.hpp"

namespace smf {

MetricDef parse_metric_def(const std::string& name) {
  if (name == "stacked_l2" || name == "stacked") return MetricDef::stacked_l2;
  if (name == "perjoint_l2" || name == "perjoint") return MetricDef::perjoint_l2;
  throw_usage("unknown metric definition '" + name + "' (expected stacked_l2|perjoint_l2)");
}

std::string metric_def_name(MetricDef def) {
  return def == MetricDef::stacked_l2 ? "stacked_l2" : "perjoint_l2";
}

std::string format_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

double pose_distance(const Pose& gt, const Pose& pred, MetricDef def) {
  if (gt.joints != pred.joints || gt.dims != pred.dims) {
    throw_usage("pose_distance: layout mismatch");
  }
  if (def == MetricDef::stacked_l2) {
    double acc = 0.0;
    for (std::size_t i = 0; i < gt.coords.size(); ++i) {
      double d = gt.coords[i] - pred.coords[i];
      acc += d * d;
    }
    return std::sqrt(acc);
  }
  double mean = 0.0;
  for (std::size_t j = 0; j < gt.joints; ++j) {
    double acc = 0.0;
    for (std::size_t d = 0; d < gt.dims; ++d) {
      double diff = gt.at(j, d) - pred.at(j, d);
      acc += diff * diff;
    }
    mean += std::sqrt(acc);
  }
  return mean / static_cast<double>(gt.joints);
}

double scene_metric_at_frame(const ScenePrediction& pred, const Scene& gt, std::size_t t_obs,
                             std::size_t frame_index, MetricDef def) {
  if (pred.persons.size() != gt.person_count()) {
    throw_usage("metric: prediction and ground truth person counts differ");
  }
  if (frame_index < 1) throw_usage("metric: frame_index is 1-based");
  std::size_t gt_frame = t_obs - 1 + frame_index;
  double acc = 0.0;
  for (std::size_t j = 0; j < pred.persons.size(); ++j) {
    const PersonPrediction& pp = pred.persons[j];
    if (pp.person_id != gt.persons[j].person_id) {
      throw_usage("metric: person order mismatch ('" + pp.person_id + "' vs '" +
                  gt.persons[j].person_id + "')");
    }
    if (frame_index > pp.absolute.length() || gt_frame >= gt.frames()) {
      throw_usage("metric: frame " + std::to_string(frame_index) +
                  " outside the prediction window");
    }
    acc += pose_distance(gt.persons[j].sequence.frames[gt_frame],
                         pp.absolute.frames[frame_index - 1], def);
  }
  return acc / static_cast<double>(pred.persons.size());
}

HorizonReport global_metric(const ScenePrediction& pred, const Scene& gt, std::size_t t_obs,
                            const std::vector<double>& horizons_ms, const std::string& method,
                            MetricDef def) {
  HorizonReport report;
  report.def = def;
  std::size_t t_pred = pred.persons.empty() ? 0 : pred.persons.front().absolute.length();
  for (double ms : horizons_ms) {
    std::size_t frame = ms_to_frame(ms, gt.frame_rate);
    if (frame > t_pred) {
      throw_usage("horizon " + format_double(ms) + " ms maps to frame " + std::to_string(frame) +
                  ", beyond the " + std::to_string(t_pred) + "-frame prediction window");
    }
    HorizonRow row;
    row.method = method;
    row.horizon_ms = ms;
    row.frame_index = frame;
    row.metric = scene_metric_at_frame(pred, gt, t_obs, frame, def);
    report.rows.push_back(std::move(row));
  }
  return report;
}

HorizonReport average_reports(const std::vector<HorizonReport>& reports) {
  if (reports.empty()) throw_usage("average_reports: no reports");
  HorizonReport out = reports.front();
  for (std::size_t r = 1; r < reports.size(); ++r) {
    if (reports[r].rows.size() != out.rows.size()) {
      throw_usage("average_reports: row structure mismatch");
    }
    for (std::size_t i = 0; i < out.rows.size(); ++i) {
      if (reports[r].rows[i].method != out.rows[i].method ||
          reports[r].rows[i].frame_index != out.rows[i].frame_index) {
        throw_usage("average_reports: row structure mismatch");
      }
      out.rows[i].metric += reports[r].rows[i].metric;
    }
  }
  double inv = 1.0 / static_cast<double>(reports.size());
  for (HorizonRow& row : out.rows) row.metric *= inv;
  return out;
}

std::vector<double> metric_curve(const ScenePrediction& pred, const Scene& gt, std::size_t t_obs,
                                 MetricDef def) {
  std::size_t t_pred = pred.persons.empty() ? 0 : pred.persons.front().absolute.length();
  std::vector<double> curve;
  curve.reserve(t_pred);
  for (std::size_t k = 1; k <= t_pred; ++k) {
    curve.push_back(scene_metric_at_frame(pred, gt, t_obs, k, def));
  }
  return curve;
}

std::string HorizonReport::to_csv() const {
  std::string text = "# metric_def=" + metric_def_name(def) + "\n";
  text += "method,horizon_ms,frame_index,metric\n";
  for (const HorizonRow& row : rows) {
    text += row.method + "," + format_double(row.horizon_ms) + "," +
            std::to_string(row.frame_index) + "," + format_double(row.metric) + "\n";
  }
  return text;
}

void save_report_csv(const HorizonReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_data("cannot write report '" + path + "'");
  out << report.to_csv();
}

}  // namespace smf
