#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evnms/ground_truth.hpp"

namespace evnms {

struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t labeled() const { return tp + fp + tn + fn; }
  std::optional<double> tpr() const;
  std::optional<double> fpr() const;
  std::optional<double> accuracy() const;
};

struct TimingSummary {
  double median_ns = 0.0;
  double mean_ns = 0.0;
};

struct MetricsReport {
  std::string scene;
  std::string detector;
  bool anms = false;
  std::size_t n_total = 0;
  std::size_t n_corner = 0;
  std::optional<double> reduction_rate;
  Confusion confusion;
  std::optional<double> tpr;
  std::optional<double> fpr;
  std::optional<double> accuracy;
  std::optional<TimingSummary> ns_per_event;
};

/// n_corner / n_total; absent for an empty stream.
std::optional<double> reduction_rate(std::size_t n_corner, std::size_t n_total);

/// Cross-tabulates kept/dropped against labels; discarded labels are ignored.
/// Both spans are indexed by input event.
Confusion confusion(std::span<const bool> kept, std::span<const EventLabel> labels);
Confusion confusion(const std::vector<bool>& kept, std::span<const EventLabel> labels);

/// Fills the derived fields of a report from its counts.
MetricsReport make_report(std::string scene, std::string detector, bool anms, std::size_t n_total,
                          std::size_t n_corner, const Confusion& confusion);

/// Event-count weighted combination: counts are summed, each rate becomes the
/// n_total-weighted mean over the reports that define it. Absent when empty.
std::optional<MetricsReport> weighted_overall(std::span<const MetricsReport> per_scene,
                                              std::string scene_name = "overall");

TimingSummary summarize_timings(std::vector<double> ns_per_event);

}  // namespace evnms
