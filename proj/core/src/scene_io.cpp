#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <iomanip>
#include <sstream>
#include <string>

#include "evnms/synth.hpp"

namespace evnms {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double to_double(std::string_view v, std::size_t line) {
  v = trim(v);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ParseError(line, "expected a number, got '" + std::string(v) + "'");
  }
  return out;
}

int to_int(std::string_view v, std::size_t line) {
  v = trim(v);
  int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ParseError(line, "expected an integer, got '" + std::string(v) + "'");
  }
  return out;
}

bool to_bool(std::string_view v, std::size_t line) {
  v = trim(v);
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ParseError(line, "expected true|false, got '" + std::string(v) + "'");
}

Point2 to_point(std::string_view v, std::size_t line) {
  const std::size_t comma = v.find(',');
  if (comma == std::string_view::npos) throw ParseError(line, "expected 'x,y', got '" + std::string(v) + "'");
  return {to_double(v.substr(0, comma), line), to_double(v.substr(comma + 1), line)};
}

std::vector<Point2> to_points(std::string_view v, std::size_t line) {
  std::vector<Point2> out;
  std::istringstream in{std::string(v)};
  std::string token;
  while (in >> token) out.push_back(to_point(token, line));
  return out;
}

}  // namespace

SceneSpec read_scene(std::istream& in) {
  SceneSpec spec;
  ShapeSpec* shape = nullptr;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view view = raw;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    if (view == "[shape]") {
      spec.shapes.emplace_back();
      shape = &spec.shapes.back();
      continue;
    }
    const std::size_t eq = view.find('=');
    if (eq == std::string_view::npos) throw ParseError(line, "expected 'key = value'");
    const std::string key{trim(view.substr(0, eq))};
    const std::string_view value = trim(view.substr(eq + 1));

    if (shape == nullptr) {
      if (key == "width") spec.geometry.width = to_int(value, line);
      else if (key == "height") spec.geometry.height = to_int(value, line);
      else if (key == "duration") spec.duration = to_double(value, line);
      else if (key == "contrast_threshold") spec.contrast_threshold = to_double(value, line);
      else if (key == "noise_rate") spec.noise_rate = to_double(value, line);
      else if (key == "track_period") spec.track_period = to_double(value, line);
      else throw ParseError(line, "unknown scene key '" + key + "'");
    } else {
      if (key == "vertices") shape->vertices = to_points(value, line);
      else if (key == "velocity") shape->velocity = to_point(value, line);
      else if (key == "angular_velocity") shape->angular_velocity = to_double(value, line);
      else if (key == "contrast") shape->contrast = to_double(value, line);
      else if (key == "darker") shape->darker = to_bool(value, line);
      else throw ParseError(line, "unknown shape key '" + key + "'");
    }
  }
  return spec;
}

SceneSpec read_scene_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open scene file");
  return read_scene(in);
}

void write_scene(std::ostream& out, const SceneSpec& spec) {
  out << std::setprecision(12);
  out << "width = " << spec.geometry.width << "\n"
      << "height = " << spec.geometry.height << "\n"
      << "duration = " << spec.duration << "\n"
      << "contrast_threshold = " << spec.contrast_threshold << "\n"
      << "noise_rate = " << spec.noise_rate << "\n"
      << "track_period = " << spec.track_period << "\n";
  for (const ShapeSpec& s : spec.shapes) {
    out << "\n[shape]\nvertices =";
    for (const Point2& v : s.vertices) out << ' ' << v.x << ',' << v.y;
    out << "\nvelocity = " << s.velocity.x << ',' << s.velocity.y << "\n"
        << "angular_velocity = " << s.angular_velocity << "\n"
        << "contrast = " << s.contrast << "\n"
        << "darker = " << (s.darker ? "true" : "false") << "\n";
  }
}

}  // namespace evnms
