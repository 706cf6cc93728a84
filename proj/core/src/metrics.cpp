#include "evnms/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "evnms/errors.hpp"

namespace evnms {

namespace {
std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}
}  // namespace

std::optional<double> Confusion::tpr() const { return ratio(tp, tp + fn); }
std::optional<double> Confusion::fpr() const { return ratio(fp, fp + tn); }
std::optional<double> Confusion::accuracy() const { return ratio(tp + tn, labeled()); }

std::optional<double> reduction_rate(std::size_t n_corner, std::size_t n_total) {
  if (n_corner > n_total) throw ConfigError("corner count exceeds event count");
  return ratio(n_corner, n_total);
}

Confusion confusion(const std::vector<bool>& kept, std::span<const EventLabel> labels) {
  if (kept.size() != labels.size()) throw ConfigError("decision and label counts differ");
  Confusion c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool k = kept[i];
    switch (labels[i]) {
      case EventLabel::kPositive: ++(k ? c.tp : c.fn); break;
      case EventLabel::kNegative: ++(k ? c.fp : c.tn); break;
      case EventLabel::kDiscarded: break;
    }
  }
  return c;
}

Confusion confusion(std::span<const bool> kept, std::span<const EventLabel> labels) {
  return confusion(std::vector<bool>(kept.begin(), kept.end()), labels);
}

MetricsReport make_report(std::string scene, std::string detector, bool anms, std::size_t n_total,
                          std::size_t n_corner, const Confusion& c) {
  MetricsReport r;
  r.scene = std::move(scene);
  r.detector = std::move(detector);
  r.anms = anms;
  r.n_total = n_total;
  r.n_corner = n_corner;
  r.reduction_rate = reduction_rate(n_corner, n_total);
  r.confusion = c;
  r.tpr = c.tpr();
  r.fpr = c.fpr();
  r.accuracy = c.accuracy();
  return r;
}

std::optional<MetricsReport> weighted_overall(std::span<const MetricsReport> per_scene, std::string scene_name) {
  if (per_scene.empty()) return std::nullopt;
  MetricsReport out;
  out.scene = std::move(scene_name);
  out.detector = per_scene.front().detector;
  out.anms = per_scene.front().anms;

  struct Acc {
    double sum = 0.0;
    double weight = 0.0;
    void add(const std::optional<double>& v, double w) {
      if (!v) return;
      sum += *v * w;
      weight += w;
    }
    std::optional<double> mean() const {
      if (weight <= 0.0) return std::nullopt;
      return sum / weight;
    }
  };
  Acc rr, tpr, fpr, acc, t_med, t_mean;
  for (const MetricsReport& r : per_scene) {
    const double w = static_cast<double>(r.n_total);
    out.n_total += r.n_total;
    out.n_corner += r.n_corner;
    out.confusion.tp += r.confusion.tp;
    out.confusion.fp += r.confusion.fp;
    out.confusion.tn += r.confusion.tn;
    out.confusion.fn += r.confusion.fn;
    rr.add(r.reduction_rate, w);
    tpr.add(r.tpr, w);
    fpr.add(r.fpr, w);
    acc.add(r.accuracy, w);
    if (r.ns_per_event) {
      t_med.add(r.ns_per_event->median_ns, w);
      t_mean.add(r.ns_per_event->mean_ns, w);
    }
  }
  out.reduction_rate = rr.mean();
  out.tpr = tpr.mean();
  out.fpr = fpr.mean();
  out.accuracy = acc.mean();
  if (t_med.mean()) out.ns_per_event = TimingSummary{*t_med.mean(), *t_mean.mean()};
  return out;
}

TimingSummary summarize_timings(std::vector<double> ns) {
  if (ns.empty()) return {};
  const double mean = std::accumulate(ns.begin(), ns.end(), 0.0) / static_cast<double>(ns.size());
  std::sort(ns.begin(), ns.end());
  const std::size_t mid = ns.size() / 2;
  const double median = ns.size() % 2 == 1 ? ns[mid] : 0.5 * (ns[mid - 1] + ns[mid]);
  return TimingSummary{median, mean};
}

}  // namespace evnms
