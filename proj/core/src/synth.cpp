#include "evnms/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

namespace evnms {

SceneError::SceneError(std::size_t shape, double t_s, const std::string& what)
    : ConfigError("shape " + std::to_string(shape) + " at t=" + std::to_string(t_s) + " s: " + what),
      shape_(shape),
      t_s_(t_s) {}

Point2 ShapeSpec::centroid() const {
  Point2 c;
  for (const Point2& v : vertices) {
    c.x += v.x;
    c.y += v.y;
  }
  const double n = static_cast<double>(std::max<std::size_t>(1, vertices.size()));
  return {c.x / n, c.y / n};
}

std::vector<Point2> ShapeSpec::vertices_at(double t_s) const {
  const Point2 c = centroid();
  const double a = angular_velocity * t_s;
  const double ca = std::cos(a);
  const double sa = std::sin(a);
  std::vector<Point2> out;
  out.reserve(vertices.size());
  for (const Point2& v : vertices) {
    const double rx = v.x - c.x;
    const double ry = v.y - c.y;
    out.push_back({c.x + velocity.x * t_s + ca * rx - sa * ry, c.y + velocity.y * t_s + sa * rx + ca * ry});
  }
  return out;
}

namespace {

double validation_step(const SceneSpec& spec) { return std::min(spec.track_period, 1e-3); }

}  // namespace

void SceneSpec::validate() const {
  if (geometry.width <= 0 || geometry.height <= 0) throw ConfigError("scene geometry must be positive");
  if (!(duration > 0.0)) throw ConfigError("scene duration must be positive");
  if (!(contrast_threshold > 0.0)) throw ConfigError("contrast_threshold must be positive");
  if (!(noise_rate >= 0.0)) throw ConfigError("noise_rate must be >= 0");
  if (!(track_period > 0.0)) throw ConfigError("track_period must be positive");
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    if (shapes[i].vertices.size() < 3) throw SceneError(i, 0.0, "polygon needs at least 3 vertices");
    if (!(shapes[i].contrast > 0.0)) throw SceneError(i, 0.0, "contrast must be positive");
  }
  const double step = validation_step(*this);
  const auto steps = static_cast<long>(std::ceil(duration / step));
  for (long s = 0; s <= steps; ++s) {
    const double t = std::min(duration, static_cast<double>(s) * step);
    for (std::size_t i = 0; i < shapes.size(); ++i) {
      for (const Point2& v : shapes[i].vertices_at(t)) {
        if (!(v.x >= 0.0 && v.y >= 0.0 && v.x <= geometry.width - 1 && v.y <= geometry.height - 1)) {
          throw SceneError(i, t, "vertex (" + std::to_string(v.x) + ", " + std::to_string(v.y) +
                                     ") outside the sensor");
        }
      }
    }
  }
}

namespace {

double segment_distance(const Point2& p, const Point2& a, const Point2& b) {
  const double ex = b.x - a.x;
  const double ey = b.y - a.y;
  const double len2 = ex * ex + ey * ey;
  double u = len2 > 0.0 ? ((p.x - a.x) * ex + (p.y - a.y) * ey) / len2 : 0.0;
  u = std::clamp(u, 0.0, 1.0);
  return std::hypot(p.x - (a.x + u * ex), p.y - (a.y + u * ey));
}

/// Negative inside, positive outside.
double signed_distance(const std::vector<Point2>& poly, const Point2& p) {
  double d = std::numeric_limits<double>::infinity();
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2& a = poly[j];
    const Point2& b = poly[i];
    d = std::min(d, segment_distance(p, a, b));
    if ((b.y > p.y) != (a.y > p.y) && p.x < (a.x - b.x) * (p.y - b.y) / (a.y - b.y) + b.x) inside = !inside;
  }
  return inside ? -d : d;
}

struct Box {
  int x0, y0, x1, y1;
};

Box bounds(const std::vector<Point2>& a, const std::vector<Point2>& b, const SensorGeometry& g) {
  double x0 = std::numeric_limits<double>::infinity();
  double y0 = x0;
  double x1 = -x0;
  double y1 = -x0;
  for (const auto* poly : {&a, &b}) {
    for (const Point2& v : *poly) {
      x0 = std::min(x0, v.x);
      y0 = std::min(y0, v.y);
      x1 = std::max(x1, v.x);
      y1 = std::max(y1, v.y);
    }
  }
  return Box{std::max(0, static_cast<int>(std::floor(x0)) - 1), std::max(0, static_cast<int>(std::floor(y0)) - 1),
             std::min(g.width - 1, static_cast<int>(std::ceil(x1)) + 1),
             std::min(g.height - 1, static_cast<int>(std::ceil(y1)) + 1)};
}

void emit_shape(const ShapeSpec& shape, const SceneSpec& spec, std::vector<Event>& out) {
  const Point2 c = shape.centroid();
  double radius = 0.0;
  for (const Point2& v : shape.vertices) radius = std::max(radius, std::hypot(v.x - c.x, v.y - c.y));
  const double max_speed = std::hypot(shape.velocity.x, shape.velocity.y) + std::abs(shape.angular_velocity) * radius;
  if (max_speed <= 0.0) return;

  // The boundary moves at most 0.1 px per step.
  const long steps = std::max(1L, static_cast<long>(std::ceil(spec.duration * max_speed / 0.1)));
  const double dt = spec.duration / static_cast<double>(steps);
  const double step_disp = max_speed * dt;

  const int levels = std::max(1, static_cast<int>(std::lround(shape.contrast / spec.contrast_threshold)));
  std::vector<double> level_d(static_cast<std::size_t>(levels));
  for (int j = 0; j < levels; ++j) level_d[static_cast<std::size_t>(j)] = -0.5 + (j + 0.5) / levels;
  const Polarity entering = shape.darker ? Polarity::kNegative : Polarity::kPositive;

  const SensorGeometry& g = spec.geometry;
  Grid<double> cached(g.width, g.height, 0.0);
  Grid<long> cached_step(g.width, g.height, -2);
  Grid<long> next_check(g.width, g.height, 0);

  std::vector<Point2> prev = shape.vertices_at(0.0);
  for (long s = 1; s <= steps; ++s) {
    const double t0 = static_cast<double>(s - 1) * dt;
    const std::vector<Point2> cur = shape.vertices_at(static_cast<double>(s) * dt);
    const Box box = bounds(prev, cur, g);
    for (int y = box.y0; y <= box.y1; ++y) {
      for (int x = box.x0; x <= box.x1; ++x) {
        if (s < next_check.at(x, y)) continue;
        const Point2 p{static_cast<double>(x), static_cast<double>(y)};
        const double d0 = cached_step.at(x, y) == s - 1 ? cached.at(x, y) : signed_distance(prev, p);
        const double d1 = signed_distance(cur, p);
        cached.at(x, y) = d1;
        cached_step.at(x, y) = s;
        const double far = std::abs(d1) - 0.5;
        if (far > 2.0 * step_disp) next_check.at(x, y) = s + static_cast<long>(far / step_disp) - 1;

        for (const double level : level_d) {
          const bool enters = d0 > level && d1 <= level;
          const bool leaves = d0 <= level && d1 > level;
          if (!enters && !leaves) continue;
          const double t = t0 + (d0 - level) / (d0 - d1) * dt;
          out.push_back(Event{from_seconds(t), static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y),
                              enters ? entering : opposite(entering)});
        }
      }
    }
    prev = cur;
  }
}

void emit_noise(const SceneSpec& spec, std::mt19937_64& rng, std::vector<Event>& out) {
  if (spec.noise_rate <= 0.0) return;
  const double mean = spec.noise_rate * spec.geometry.width * spec.geometry.height * spec.duration;
  std::poisson_distribution<long> count_dist(mean);
  std::uniform_real_distribution<double> t_dist(0.0, spec.duration);
  std::uniform_int_distribution<int> x_dist(0, spec.geometry.width - 1);
  std::uniform_int_distribution<int> y_dist(0, spec.geometry.height - 1);
  std::bernoulli_distribution p_dist(0.5);
  const long n = count_dist(rng);
  for (long i = 0; i < n; ++i) {
    const double t = t_dist(rng);
    const int x = x_dist(rng);
    const int y = y_dist(rng);
    const bool positive = p_dist(rng);
    out.push_back(Event{from_seconds(t), static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y),
                        positive ? Polarity::kPositive : Polarity::kNegative});
  }
}

}  // namespace

SynthOutput generate(const SceneSpec& spec, std::uint64_t seed) {
  spec.validate();
  SynthOutput out;
  for (const ShapeSpec& shape : spec.shapes) emit_shape(shape, spec, out.events);
  std::mt19937_64 rng(seed);
  emit_noise(spec, rng, out.events);

  const Timestamp end = from_seconds(spec.duration);
  for (Event& e : out.events) e.t = std::clamp<Timestamp>(e.t, 0, end);
  std::sort(out.events.begin(), out.events.end(), [](const Event& a, const Event& b) {
    if (a.t != b.t) return a.t < b.t;
    if (a.y != b.y) return a.y < b.y;
    if (a.x != b.x) return a.x < b.x;
    return a.p < b.p;
  });

  const auto samples = static_cast<long>(std::floor(spec.duration / spec.track_period + 1e-9));
  int id = 0;
  for (const ShapeSpec& shape : spec.shapes) {
    std::vector<Track> tracks(shape.vertices.size());
    for (auto& track : tracks) track.id = id++;
    auto push = [&](double t) {
      const auto vs = shape.vertices_at(t);
      for (std::size_t i = 0; i < vs.size(); ++i) tracks[i].samples.push_back({from_seconds(t), vs[i].x, vs[i].y});
    };
    for (long k = 0; k <= samples; ++k) push(static_cast<double>(k) * spec.track_period);
    if (tracks.front().samples.back().t < end) push(spec.duration);
    for (auto& track : tracks) out.corner_tracks.add(std::move(track));
  }
  return out;
}

namespace {

ShapeSpec regular_polygon(Point2 center, double radius, int sides, double phase) {
  ShapeSpec s;
  for (int i = 0; i < sides; ++i) {
    const double a = phase + 2.0 * std::numbers::pi * i / sides;
    s.vertices.push_back({center.x + radius * std::cos(a), center.y + radius * std::sin(a)});
  }
  return s;
}

}  // namespace

SceneSpec shapes_like_scene() {
  SceneSpec spec;
  spec.duration = 2.0;
  spec.contrast_threshold = 0.5;
  spec.noise_rate = 0.05;

  ShapeSpec square;
  square.vertices = {{30, 30}, {60, 30}, {60, 60}, {30, 60}};
  square.velocity = {40, 20};
  square.angular_velocity = 0.15;

  ShapeSpec triangle;
  triangle.vertices = {{150, 30}, {190, 42}, {158, 75}};
  triangle.velocity = {-25, 28};
  triangle.angular_velocity = -0.2;
  triangle.darker = false;

  ShapeSpec pentagon = regular_polygon({60, 130}, 18, 5, 0.3);
  pentagon.velocity = {45, -10};
  pentagon.angular_velocity = 0.1;

  ShapeSpec rectangle;
  rectangle.vertices = {{160, 110}, {210, 110}, {210, 140}, {160, 140}};
  rectangle.velocity = {-30, -15};

  spec.shapes = {square, triangle, pentagon, rectangle};
  return spec;
}

SceneSpec boxes_like_scene() {
  SceneSpec spec;
  spec.duration = 1.5;
  spec.contrast_threshold = 0.5;
  spec.noise_rate = 2.5;
  // Irregular, overlapping quads with mixed contrast: a cluttered texture
  // whose corners are rarely clean right angles. Fixed layout, independent of
  // the generation seed.
  std::mt19937_64 layout(20240601);
  std::uniform_real_distribution<double> jitter(-4.0, 4.0);
  std::uniform_real_distribution<double> size(10.0, 18.0);
  std::uniform_real_distribution<double> spin(-0.6, 0.6);
  std::uniform_real_distribution<double> contrast(0.5, 1.5);
  for (int row = 0; row < 5; ++row) {
    for (int col = 0; col < 7; ++col) {
      const double x = 14.0 + col * 17.0;
      const double y = 14.0 + row * 17.0;
      const double w = size(layout);
      const double h = size(layout);
      ShapeSpec quad;
      quad.vertices = {{x + jitter(layout), y + jitter(layout)},
                       {x + w + jitter(layout), y + jitter(layout)},
                       {x + w + jitter(layout), y + h + jitter(layout)},
                       {x + jitter(layout), y + h + jitter(layout)}};
      quad.velocity = {35, 15};
      quad.angular_velocity = spin(layout);
      quad.contrast = contrast(layout);
      quad.darker = (row + col) % 2 == 0;
      spec.shapes.push_back(quad);
    }
  }
  return spec;
}

}  // namespace evnms
