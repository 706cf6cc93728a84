#include "evnms/ground_truth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <string>

#include "evnms/errors.hpp"

namespace evnms {

std::string_view to_string(Interpolation interpolation) {
  return interpolation == Interpolation::kCubic ? "cubic" : "linear";
}

Interpolation interpolation_from_string(std::string_view name) {
  if (name == "linear") return Interpolation::kLinear;
  if (name == "cubic") return Interpolation::kCubic;
  throw ConfigError("unknown interpolation '" + std::string(name) + "' (expected linear|cubic)");
}

std::string_view to_string(EventLabel label) {
  switch (label) {
    case EventLabel::kPositive: return "positive";
    case EventLabel::kNegative: return "negative";
    case EventLabel::kDiscarded: return "discarded";
  }
  return "discarded";
}

namespace {

// Index i such that samples[i].t <= t <= samples[i + 1].t, or nullopt.
std::optional<std::size_t> bracket(const Track& track, Timestamp t) {
  const auto& s = track.samples;
  if (s.empty() || t < s.front().t || t > s.back().t) return std::nullopt;
  if (s.size() == 1) return 0;
  auto it = std::upper_bound(s.begin(), s.end(), t, [](Timestamp v, const TrackSample& a) { return v < a.t; });
  std::size_t hi = static_cast<std::size_t>(it - s.begin());
  if (hi >= s.size()) hi = s.size() - 1;
  return hi - 1;
}

// Natural cubic spline second derivatives (tridiagonal solve).
std::vector<double> spline_moments(const std::vector<TrackSample>& s, double TrackSample::*coord) {
  const std::size_t n = s.size();
  std::vector<double> m(n, 0.0);
  if (n < 3) return m;
  std::vector<double> diag(n, 0.0);
  std::vector<double> rhs(n, 0.0);
  std::vector<double> upper(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = static_cast<double>(s[i].t - s[i - 1].t);
    const double h1 = static_cast<double>(s[i + 1].t - s[i].t);
    const double lower = h0;
    diag[i] = 2.0 * (h0 + h1);
    upper[i] = h1;
    rhs[i] = 6.0 * ((s[i + 1].*coord - s[i].*coord) / h1 - (s[i].*coord - s[i - 1].*coord) / h0);
    if (i > 1) {
      const double f = lower / diag[i - 1];
      diag[i] -= f * upper[i - 1];
      rhs[i] -= f * rhs[i - 1];
    }
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    m[i] = (rhs[i] - upper[i] * m[i + 1]) / diag[i];
    if (i == 1) break;
  }
  return m;
}

double spline_eval(const std::vector<TrackSample>& s, const std::vector<double>& m,
                   double TrackSample::*coord, std::size_t i, Timestamp t) {
  const double h = static_cast<double>(s[i + 1].t - s[i].t);
  const double a = static_cast<double>(s[i + 1].t - t) / h;
  const double b = static_cast<double>(t - s[i].t) / h;
  return a * s[i].*coord + b * s[i + 1].*coord +
         ((a * a * a - a) * m[i] + (b * b * b - b) * m[i + 1]) * h * h / 6.0;
}

}  // namespace

std::optional<Point2> trajectory_position(const Track& track, Timestamp t) {
  const auto i = bracket(track, t);
  if (!i) return std::nullopt;
  const auto& s = track.samples;
  if (s.size() == 1 || s[*i].t == t) return Point2{s[*i].x, s[*i].y};
  const TrackSample& a = s[*i];
  const TrackSample& b = s[*i + 1];
  if (b.t == t) return Point2{b.x, b.y};
  const double u = static_cast<double>(t - a.t) / static_cast<double>(b.t - a.t);
  return Point2{a.x + u * (b.x - a.x), a.y + u * (b.y - a.y)};
}

void TrajectorySet::add(Track track) {
  if (track.samples.empty()) throw ConfigError("track " + std::to_string(track.id) + " has no samples");
  for (std::size_t i = 1; i < track.samples.size(); ++i) {
    if (track.samples[i].t <= track.samples[i - 1].t) {
      throw ConfigError("track " + std::to_string(track.id) + " samples not strictly increasing in t");
    }
  }
  Spline spline{spline_moments(track.samples, &TrackSample::x), spline_moments(track.samples, &TrackSample::y)};
  tracks_.push_back(std::move(track));
  splines_.push_back(std::move(spline));
}

std::optional<Point2> TrajectorySet::position(std::size_t track_index, Timestamp t) const {
  const Track& track = tracks_[track_index];
  if (interpolation_ == Interpolation::kLinear || track.samples.size() < 3) {
    return trajectory_position(track, t);
  }
  const auto i = bracket(track, t);
  if (!i) return std::nullopt;
  const auto& s = track.samples;
  if (s[*i].t == t) return Point2{s[*i].x, s[*i].y};
  const Spline& sp = splines_[track_index];
  return Point2{spline_eval(s, sp.mx, &TrackSample::x, *i, t), spline_eval(s, sp.my, &TrackSample::y, *i, t)};
}

namespace {

bool parse_double(std::string_view token, double& out) {
  while (!token.empty() && (token.front() == ' ' || token.front() == '\t')) token.remove_prefix(1);
  while (!token.empty() && (token.back() == ' ' || token.back() == '\t' || token.back() == '\r')) {
    token.remove_suffix(1);
  }
  if (token.empty()) return false;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size() && std::isfinite(out);
}

}  // namespace

TrajectorySet read_tracks_csv(std::istream& in) {
  std::map<int, Track> by_id;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    while (!view.empty() && (view.back() == '\r' || view.back() == ' ')) view.remove_suffix(1);
    if (view.empty() || view.front() == '#') continue;

    std::array<std::string_view, 4> fields;
    std::size_t n = 0;
    std::size_t start = 0;
    while (n < 5) {
      const std::size_t comma = view.find(',', start);
      const auto field = view.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
      if (n < 4) fields[n] = field;
      ++n;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    double id = 0;
    double t = 0;
    double x = 0;
    double y = 0;
    const bool numeric = n == 4 && parse_double(fields[0], id) && parse_double(fields[1], t) &&
                         parse_double(fields[2], x) && parse_double(fields[3], y);
    if (!numeric) {
      if (line_no == 1 && by_id.empty()) continue;  // header
      throw ParseError(line_no, "expected 'track_id,t_seconds,x,y', got '" + std::string(view) + "'");
    }
    if (id != std::floor(id)) throw ParseError(line_no, "track_id must be an integer");
    if (t < 0) throw ParseError(line_no, "negative track time");
    Track& track = by_id[static_cast<int>(id)];
    track.id = static_cast<int>(id);
    track.samples.push_back(TrackSample{from_seconds(t), x, y});
  }
  TrajectorySet set;
  for (auto& [id, track] : by_id) {
    std::stable_sort(track.samples.begin(), track.samples.end(),
                     [](const TrackSample& a, const TrackSample& b) { return a.t < b.t; });
    set.add(std::move(track));
  }
  return set;
}

TrajectorySet read_tracks_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open track file");
  return read_tracks_csv(in);
}

void write_tracks_csv(std::ostream& out, const TrajectorySet& tracks) {
  out << "track_id,t,x,y\n";
  char buf[128];
  for (const Track& track : tracks.tracks()) {
    for (const TrackSample& s : track.samples) {
      const int n = std::snprintf(buf, sizeof(buf), "%d,%lld.%06lld,%.6f,%.6f\n", track.id,
                                  static_cast<long long>(s.t / 1000000), static_cast<long long>(s.t % 1000000),
                                  s.x, s.y);
      out.write(buf, n);
    }
  }
}

void write_tracks_file(const std::filesystem::path& path, const TrajectorySet& tracks) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path.string(), "cannot write track file");
  write_tracks_csv(out, tracks);
}

EventLabel classify_distance(double distance, const LabelThresholds& thresholds) {
  if (distance <= thresholds.positive_radius) return EventLabel::kPositive;
  if (distance <= thresholds.negative_radius) return EventLabel::kNegative;
  return EventLabel::kDiscarded;
}

LabeledEvent label_event(const Event& e, const TrajectorySet& tracks, const LabelThresholds& thresholds) {
  LabeledEvent out;
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    const auto pos = tracks.position(i, e.t);
    if (!pos) continue;
    out.distance = std::min(out.distance, std::hypot(e.x - pos->x, e.y - pos->y));
  }
  out.label = classify_distance(out.distance, thresholds);
  return out;
}

std::vector<LabeledEvent> label_events(std::span<const Event> events, const TrajectorySet& tracks,
                                       const LabelThresholds& thresholds) {
  std::vector<LabeledEvent> out;
  out.reserve(events.size());
  for (const Event& e : events) out.push_back(label_event(e, tracks, thresholds));
  return out;
}

TimeWindow TimeWindow::frames(int first, int last, double frame_period_s) {
  return TimeWindow{from_seconds(first * frame_period_s), from_seconds(last * frame_period_s)};
}

GroundTruthScore score_ground_truth(std::span<const Event> events, const TrajectorySet& tracks,
                                    const EvHarrisConfig& harris, SensorGeometry geometry,
                                    double frame_period_s, const TimeWindow& window,
                                    const LabelThresholds& thresholds) {
  if (!(frame_period_s > 0.0)) throw ConfigError("frame period must be positive");
  GroundTruthScore out;
  auto detector = make_detector(DetectorKind::kEvHarris, geometry, harris);
  const SurfaceState unused(SensorGeometry{1, 1});  // evHarris reads only its binary surface

  double score_sum = 0.0;
  std::size_t scored = 0;
  Timestamp first = 0;
  Timestamp last = 0;
  bool any = false;
  for (const Event& e : events) {
    const auto det = detector->detect(unused, e);
    if (!window.contains(e.t)) continue;
    if (!any) first = e.t;
    last = e.t;
    any = true;
    if (label_event(e, tracks, thresholds).label != EventLabel::kPositive) continue;
    ++out.n_positive;
    if (det) {
      score_sum += det->score;
      ++scored;
    }
  }
  if (scored > 0) out.mean_score = score_sum / static_cast<double>(scored);
  if (any) {
    const double frames = to_seconds(last - first) / frame_period_s;
    out.count_per_frame = frames > 0.0 ? static_cast<double>(out.n_positive) / frames
                                       : static_cast<double>(out.n_positive);
  }
  return out;
}

}  // namespace evnms
