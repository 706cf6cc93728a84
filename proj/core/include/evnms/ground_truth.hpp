#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "evnms/detectors.hpp"
#include "evnms/event.hpp"

namespace evnms {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct TrackSample {
  Timestamp t = 0;
  double x = 0.0;
  double y = 0.0;
};

struct Track {
  int id = 0;
  std::vector<TrackSample> samples;  // strictly increasing t

  Timestamp begin() const { return samples.front().t; }
  Timestamp end() const { return samples.back().t; }
};

enum class Interpolation { kLinear, kCubic };

std::string_view to_string(Interpolation interpolation);
Interpolation interpolation_from_string(std::string_view name);

/// Linear interpolation between the bracketing samples; exact at sample
/// times; nullopt outside the track's time span.
std::optional<Point2> trajectory_position(const Track& track, Timestamp t);

/// Time-parameterised corner tracks. Cubic mode uses a natural cubic spline
/// per coordinate, fitted once per track.
class TrajectorySet {
 public:
  explicit TrajectorySet(Interpolation interpolation = Interpolation::kLinear)
      : interpolation_(interpolation) {}

  /// Throws ConfigError if samples are empty or not strictly increasing in t.
  void add(Track track);

  std::size_t size() const { return tracks_.size(); }
  const std::vector<Track>& tracks() const { return tracks_; }
  Interpolation interpolation() const { return interpolation_; }
  void set_interpolation(Interpolation interpolation) { interpolation_ = interpolation; }

  std::optional<Point2> position(std::size_t track_index, Timestamp t) const;

 private:
  struct Spline {
    std::vector<double> mx;  // second derivatives per sample
    std::vector<double> my;
  };

  Interpolation interpolation_;
  std::vector<Track> tracks_;
  std::vector<Spline> splines_;
};

// CSV with rows `track_id,t_seconds,x,y`, an optional header line, rows of
// one track contiguous or not.
TrajectorySet read_tracks_csv(std::istream& in);
TrajectorySet read_tracks_file(const std::filesystem::path& path);
void write_tracks_csv(std::ostream& out, const TrajectorySet& tracks);
void write_tracks_file(const std::filesystem::path& path, const TrajectorySet& tracks);

enum class EventLabel { kPositive, kNegative, kDiscarded };

std::string_view to_string(EventLabel label);

struct LabelThresholds {
  double positive_radius = 1.0;  // [0, r_pos]  -> positive
  double negative_radius = 5.0;  // (r_pos, r_neg] -> negative, beyond -> discarded
};

EventLabel classify_distance(double distance, const LabelThresholds& thresholds = {});

struct LabeledEvent {
  EventLabel label = EventLabel::kDiscarded;
  /// Distance to the closest live track; +inf when no track covers e.t.
  double distance = std::numeric_limits<double>::infinity();
};

LabeledEvent label_event(const Event& e, const TrajectorySet& tracks,
                         const LabelThresholds& thresholds = {});

std::vector<LabeledEvent> label_events(std::span<const Event> events, const TrajectorySet& tracks,
                                       const LabelThresholds& thresholds = {});

/// Half-open evaluation span [begin, end) in microseconds.
struct TimeWindow {
  Timestamp begin = 0;
  Timestamp end = std::numeric_limits<Timestamp>::max();

  bool contains(Timestamp t) const { return t >= begin && t < end; }
  /// Frames [first, last) of a fixed frame period, in seconds.
  static TimeWindow frames(int first, int last, double frame_period_s);
};

struct GroundTruthScore {
  std::size_t n_positive = 0;
  double count_per_frame = 0.0;
  std::optional<double> mean_score;  // absent without positives
};

/// Replays evHarris over the whole stream and averages its response over
/// positively labelled events inside `window`.
GroundTruthScore score_ground_truth(std::span<const Event> events, const TrajectorySet& tracks,
                                    const EvHarrisConfig& harris, SensorGeometry geometry,
                                    double frame_period_s, const TimeWindow& window = {},
                                    const LabelThresholds& thresholds = {});

}  // namespace evnms
