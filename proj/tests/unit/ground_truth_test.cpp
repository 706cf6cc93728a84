#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "evnms/errors.hpp"
#include "evnms/ground_truth.hpp"
#include "evnms/synth.hpp"

namespace evnms {
namespace {

Track line_track() {
  Track t;
  t.id = 3;
  t.samples = {{0, 0.0, 0.0}, {100, 2.0, 4.0}};
  return t;
}

TEST(Trajectory, ExactAtSamplesAndMidpoint) {
  const Track t = line_track();
  EXPECT_DOUBLE_EQ(trajectory_position(t, 0)->x, 0.0);
  EXPECT_DOUBLE_EQ(trajectory_position(t, 100)->y, 4.0);
  const auto mid = trajectory_position(t, 50);
  ASSERT_TRUE(mid);
  EXPECT_DOUBLE_EQ(mid->x, 1.0);
  EXPECT_DOUBLE_EQ(mid->y, 2.0);
  EXPECT_FALSE(trajectory_position(t, 101));
  EXPECT_FALSE(trajectory_position(t, -1));
}

TEST(Trajectory, MatchesDensePolyline) {
  Track t;
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i <= 20; ++i) {
    t.samples.push_back({i * 1000, std::sin(i * 0.3) * 10, i * 0.5 + std::cos(i) });
  }
  TrajectorySet set;
  set.add(t);
  for (Timestamp q = 0; q <= 20000; q += 37) {
    // Independent evaluation: locate the segment by integer division.
    const auto k = static_cast<std::size_t>(std::min<Timestamp>(q / 1000, 19));
    const auto& a = t.samples[k];
    const auto& b = t.samples[k + 1];
    const double u = static_cast<double>(q - a.t) / static_cast<double>(b.t - a.t);
    const auto p = set.position(0, q);
    ASSERT_TRUE(p);
    EXPECT_NEAR(p->x, a.x + u * (b.x - a.x), 1e-9);
    EXPECT_NEAR(p->y, a.y + u * (b.y - a.y), 1e-9);
  }
}

TEST(Trajectory, CubicInterpolatesSamples) {
  Track t;
  for (int i = 0; i <= 10; ++i) t.samples.push_back({i * 1000, i * i * 0.1, 5.0});
  TrajectorySet set(Interpolation::kCubic);
  set.add(t);
  for (const auto& s : t.samples) {
    EXPECT_NEAR(set.position(0, s.t)->x, s.x, 1e-9);
  }
  // Between samples the spline stays close to the smooth curve.
  EXPECT_NEAR(set.position(0, 4500)->x, 4.5 * 4.5 * 0.1, 0.05);
}

TEST(Trajectory, RejectsNonIncreasingSamples) {
  TrajectorySet set;
  Track t;
  EXPECT_THROW(set.add(t), ConfigError);
  t.samples = {{0, 0, 0}, {0, 1, 1}};
  EXPECT_THROW(set.add(t), ConfigError);
}

TEST(Labels, Thresholds) {
  EXPECT_EQ(classify_distance(0.5), EventLabel::kPositive);
  EXPECT_EQ(classify_distance(1.0), EventLabel::kPositive);
  EXPECT_EQ(classify_distance(3.0), EventLabel::kNegative);
  EXPECT_EQ(classify_distance(5.0), EventLabel::kNegative);
  EXPECT_EQ(classify_distance(6.0), EventLabel::kDiscarded);
}

TEST(Labels, MonotoneInDistance) {
  int prev = 0;
  for (double d = 0.0; d < 10.0; d += 0.01) {
    const int rank = static_cast<int>(classify_distance(d));
    EXPECT_GE(rank, prev);
    prev = rank;
  }
  LabelThresholds tight{0.5, 5.0};
  for (double d = 0.0; d < 10.0; d += 0.01) {
    if (classify_distance(d, tight) == EventLabel::kPositive) EXPECT_EQ(classify_distance(d), EventLabel::kPositive);
  }
}

TEST(Labels, NearestLiveTrackAndPolarityIndependence) {
  TrajectorySet set;
  Track a;
  a.samples = {{0, 10.0, 10.0}, {1000, 10.0, 10.0}};
  Track b;
  b.samples = {{500, 20.0, 10.0}, {2000, 20.0, 10.0}};
  set.add(a);
  set.add(b);
  const Event near_a{100, 13, 10, Polarity::kPositive};
  EXPECT_EQ(label_event(near_a, set).label, EventLabel::kNegative);
  EXPECT_DOUBLE_EQ(label_event(near_a, set).distance, 3.0);
  const Event flipped{100, 13, 10, Polarity::kNegative};
  EXPECT_EQ(label_event(flipped, set).label, EventLabel::kNegative);
  // Track b is not live at t = 100.
  EXPECT_EQ(label_event(Event{100, 20, 10, Polarity::kPositive}, set).label, EventLabel::kDiscarded);
  EXPECT_EQ(label_event(Event{600, 20, 10, Polarity::kPositive}, set).label, EventLabel::kPositive);
  EXPECT_TRUE(std::isinf(label_event(Event{5000, 20, 10, Polarity::kPositive}, set).distance));
}

TEST(TracksCsv, ParseAndRoundTrip) {
  std::istringstream in("track_id,t,x,y\n1,0.0,1.5,2.5\n2,0.0,5,5\n1,0.001,2.5,3.5\n");
  const auto set = read_tracks_csv(in);
  ASSERT_EQ(set.size(), 2u);
  EXPECT_EQ(set.tracks()[0].id, 1);
  EXPECT_EQ(set.tracks()[0].samples.size(), 2u);
  EXPECT_EQ(set.tracks()[0].samples[1].t, 1000);
  std::ostringstream out;
  write_tracks_csv(out, set);
  std::istringstream again(out.str());
  const auto back = read_tracks_csv(again);
  EXPECT_EQ(back.tracks()[0].samples[1].x, 2.5);

  std::istringstream bad("1,0.0,1,2\n1,0.1,x,2\n");
  EXPECT_THROW(read_tracks_csv(bad), ParseError);
}

TEST(ScoreGroundTruth, EmptyPositivesGiveAbsentScore) {
  const auto s = score_ground_truth({}, TrajectorySet{}, EvHarrisConfig{}, SensorGeometry{}, 1.0 / 24);
  EXPECT_EQ(s.n_positive, 0u);
  EXPECT_FALSE(s.mean_score);
  EXPECT_EQ(s.count_per_frame, 0.0);
}

TEST(ScoreGroundTruth, SingleCornerScene) {
  SceneSpec spec;
  spec.duration = 1.0;
  ShapeSpec tri;
  tri.vertices = {{60, 60}, {100, 60}, {60, 100}};
  tri.velocity = {50, 20};
  spec.shapes = {tri};
  auto out = generate(spec, 1);
  // Keep only the right-angle vertex as ground truth.
  TrajectorySet one;
  one.add(out.corner_tracks.tracks()[0]);
  const double frame = 1.0 / 24;
  const auto s = score_ground_truth(out.events, one, EvHarrisConfig{}, spec.geometry, frame);
  // Direct count of events within 1 px of the analytic vertex position.
  std::size_t n = 0;
  for (const Event& e : out.events) {
    const auto v = tri.vertices_at(to_seconds(e.t))[0];
    if (std::hypot(e.x - v.x, e.y - v.y) <= 1.0) ++n;
  }
  EXPECT_EQ(s.n_positive, n);
  ASSERT_GT(n, 0u);
  const double span_s = to_seconds(out.events.back().t - out.events.front().t);
  EXPECT_NEAR(s.count_per_frame, n / (span_s / frame), 1e-9);
  ASSERT_TRUE(s.mean_score);
}

TEST(ScoreGroundTruth, ShapesSceneScoresAboveBoxesScene) {
  const auto shapes = generate(shapes_like_scene(), 7);
  const auto boxes = generate(boxes_like_scene(), 7);
  const double frame = 1.0 / 24;
  const auto a = score_ground_truth(shapes.events, shapes.corner_tracks, EvHarrisConfig{}, SensorGeometry{}, frame);
  const auto b = score_ground_truth(boxes.events, boxes.corner_tracks, EvHarrisConfig{}, SensorGeometry{}, frame);
  ASSERT_TRUE(a.mean_score && b.mean_score);
  EXPECT_GT(*a.mean_score, *b.mean_score);
}

}  // namespace
}  // namespace evnms
