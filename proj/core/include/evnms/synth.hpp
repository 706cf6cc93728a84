#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "evnms/errors.hpp"
#include "evnms/event.hpp"
#include "evnms/ground_truth.hpp"

namespace evnms {

/// A polygon translating at constant velocity and rotating about its initial
/// centroid at constant angular velocity.
struct ShapeSpec {
  std::vector<Point2> vertices;  // pixels, at t = 0
  Point2 velocity;               // px/s
  double angular_velocity = 0.0; // rad/s
  double contrast = 1.0;         // log-intensity step across the boundary
  bool darker = true;            // shape darker than the background

  Point2 centroid() const;
  std::vector<Point2> vertices_at(double t_s) const;
};

struct SceneSpec {
  SensorGeometry geometry;
  double duration = 1.0;            // s
  double contrast_threshold = 0.5;  // log-intensity per emitted event
  double noise_rate = 0.0;          // background events per pixel per second
  double track_period = 0.001;      // s between corner-track samples
  std::vector<ShapeSpec> shapes;

  /// Throws SceneError for the first shape leaving the sensor, ConfigError otherwise.
  void validate() const;
};

class SceneError : public ConfigError {
 public:
  SceneError(std::size_t shape, double t_s, const std::string& what);
  std::size_t shape() const { return shape_; }
  double time() const { return t_s_; }

 private:
  std::size_t shape_;
  double t_s_;
};

struct SynthOutput {
  std::vector<Event> events;  // sorted by (t, y, x, p)
  TrajectorySet corner_tracks;
};

/// Idealised edge-crossing emission: as a boundary sweeps over a pixel centre
/// its log intensity changes by `contrast`, emitting one event per
/// `contrast_threshold`, spread uniformly across the one-pixel-wide edge.
/// Entering a darker shape emits negative events, leaving it positive ones.
/// Deterministic for a given seed.
SynthOutput generate(const SceneSpec& spec, std::uint64_t seed);

/// Four polygons (square, triangle, pentagon, rectangle) drifting and
/// slowly rotating across a 240x180 sensor with light background noise.
SceneSpec shapes_like_scene();

/// A dense, cluttered field of irregular quads with more background noise.
SceneSpec boxes_like_scene();

// Key/value scene description:
//   width = 240            height = 180          duration = 2.0
//   contrast_threshold = 0.5   noise_rate = 0.05   track_period = 0.001
//   [shape]
//   vertices = 40,40 70,40 70,70 40,70
//   velocity = 30,12
//   angular_velocity = 0.1
//   contrast = 1.0
//   darker = true
SceneSpec read_scene(std::istream& in);
SceneSpec read_scene_file(const std::filesystem::path& path);
void write_scene(std::ostream& out, const SceneSpec& spec);

}  // namespace evnms
