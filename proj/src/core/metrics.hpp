#pragma once

#include <string>
#include <vector>

#include "core/model.hpp"
#include "core/scene.hpp"

namespace smf {

// Primary metric: Euclidean norm of the stacked L*D pose difference in global
// coordinates, averaged over persons. The per-joint alternative averages the
// per-joint Euclidean distances over joints instead.
enum class MetricDef { stacked_l2, perjoint_l2 };

MetricDef parse_metric_def(const std::string& name);
std::string metric_def_name(MetricDef def);

// Shortest round-trip decimal representation (shared CSV formatting).
std::string format_double(double v);

double pose_distance(const Pose& gt, const Pose& pred, MetricDef def);

// Mean over persons of pose_distance at prediction frame `frame_index`
// (1-based). Ground truth frame is scene frame t_obs - 1 + frame_index.
double scene_metric_at_frame(const ScenePrediction& pred, const Scene& gt, std::size_t t_obs,
                             std::size_t frame_index, MetricDef def);

struct HorizonRow {
  std::string method;
  double horizon_ms = 0.0;
  std::size_t frame_index = 0;
  double metric = 0.0;
};

struct HorizonReport {
  MetricDef def = MetricDef::stacked_l2;
  std::vector<HorizonRow> rows;

  std::string to_csv() const;
};

// Metric rows for one method on one scene, one row per horizon. Horizons map
// to frame indices through the scene's frame rate; a horizon beyond the
// prediction window is an error naming the horizon.
HorizonReport global_metric(const ScenePrediction& pred, const Scene& gt, std::size_t t_obs,
                            const std::vector<double>& horizons_ms, const std::string& method,
                            MetricDef def);

// Pointwise mean of reports sharing the same (method, horizon) row structure.
HorizonReport average_reports(const std::vector<HorizonReport>& reports);

// Per-frame error curve (frame 1..t_pred) averaged over persons.
std::vector<double> metric_curve(const ScenePrediction& pred, const Scene& gt, std::size_t t_obs,
                                 MetricDef def);

void save_report_csv(const HorizonReport& report, const std::string& path);

}  // namespace smf
