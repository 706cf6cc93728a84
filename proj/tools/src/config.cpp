#include "evnms_cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "evnms/errors.hpp"

namespace evnms::cli {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
bool parse_full(std::string_view text, T& out) {
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : "|") + s;
  return out;
}

}  // namespace

Config::Config() {
  define("sensor.width", Kind::kUInt, "240");
  define("sensor.height", Kind::kUInt, "180");
  define("stream.order_policy", Kind::kChoice, "reject", {"reject", "clamp"});

  define("detector", Kind::kChoice, "arcfast", {"evharris", "evfast", "arcfast"});
  define("evharris.queue_capacity", Kind::kUInt, "2000");
  define("evharris.patch", Kind::kUInt, "9");
  define("evharris.gauss_sigma", Kind::kDouble, "1.0");
  define("evharris.harris_k", Kind::kDouble, "0.04");
  define("evharris.threshold", Kind::kDouble, "9.5");

  define("anms.window_radius", Kind::kUInt, "4");
  define("anms.k", Kind::kDouble, "20");
  define("anms.tau_fallback", Kind::kDouble, "0.05");
  define("anms.tau_neighbors", Kind::kUInt, "5");
  define("anms.sae_policy", Kind::kChoice, "all", {"all", "corners"});

  define("gt.positive_radius", Kind::kDouble, "1.0");
  define("gt.negative_radius", Kind::kDouble, "5.0");
  define("gt.interpolation", Kind::kChoice, "linear", {"linear", "cubic"});

  define("eval.frame_rate", Kind::kDouble, "24");
  define("eval.window", Kind::kChoice, "frames", {"frames", "all"});
  define("eval.first_frame", Kind::kUInt, "100");
  define("eval.last_frame", Kind::kUInt, "400");

  define("bench.repetitions", Kind::kUInt, "5");
  define("bench.min_events", Kind::kUInt, "100000");

  define("seed", Kind::kOptionalUInt, "");
}

void Config::define(std::string key, Kind kind, std::string value, std::vector<std::string> choices) {
  entries_.emplace(std::move(key), Entry{kind, std::move(value), std::move(choices)});
}

const Config::Entry& Config::entry(std::string_view key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("unknown config key '" + std::string(key) + "'");
  return it->second;
}

void Config::set(std::string_view key, std::string_view raw) {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("unknown config key '" + std::string(key) + "'");
  Entry& e = it->second;
  const std::string_view value = trim(raw);
  const std::string k(key);
  switch (e.kind) {
    case Kind::kUInt: {
      unsigned long long v = 0;
      if (!parse_full(value, v)) {
        throw ConfigError(k + ": expected a non-negative integer, got '" + std::string(value) + "'");
      }
      break;
    }
    case Kind::kOptionalUInt: {
      unsigned long long v = 0;
      if (!value.empty() && !parse_full(value, v)) {
        throw ConfigError(k + ": expected a non-negative integer, got '" + std::string(value) + "'");
      }
      break;
    }
    case Kind::kDouble: {
      double v = 0;
      if (!parse_full(value, v)) throw ConfigError(k + ": expected a number, got '" + std::string(value) + "'");
      break;
    }
    case Kind::kChoice:
      if (std::find(e.choices.begin(), e.choices.end(), value) == e.choices.end()) {
        throw ConfigError(k + ": expected " + join(e.choices) + ", got '" + std::string(value) + "'");
      }
      break;
  }
  e.value = std::string(value);
}

void Config::assign(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("expected key=value, got '" + std::string(assignment) + "'");
  }
  set(trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

void Config::load(std::istream& in, std::string_view source) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = line;
    if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    text = trim(text);
    if (text.empty()) continue;
    try {
      if (text.find('=') == std::string_view::npos) {
        throw ConfigError("expected 'key = value', got '" + std::string(text) + "'");
      }
      assign(text);
    } catch (const ConfigError& err) {
      throw ConfigError(std::string(source) + ":" + std::to_string(line_no) + ": " + err.what());
    }
  }
}

void Config::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open config file");
  load(in, path.string());
}

const std::string& Config::get(std::string_view key) const { return entry(key).value; }

double Config::get_double(std::string_view key) const {
  double v = 0;
  parse_full(std::string_view(get(key)), v);
  return v;
}

long long Config::get_int(std::string_view key) const {
  long long v = 0;
  parse_full(std::string_view(get(key)), v);
  return v;
}

void Config::dump(std::ostream& out) const {
  for (const auto& [key, e] : entries_) out << key << " = " << e.value << '\n';
}

std::vector<std::string> Config::keys() const {
  std::vector<std::string> out;
  for (const auto& kv : entries_) out.push_back(kv.first);
  return out;
}

SensorGeometry Config::geometry() const {
  return SensorGeometry{static_cast<int>(get_int("sensor.width")), static_cast<int>(get_int("sensor.height"))};
}

DetectorKind Config::detector() const { return detector_kind_from_string(get("detector")); }

EvHarrisConfig Config::harris() const {
  EvHarrisConfig h;
  h.queue_capacity = static_cast<std::size_t>(get_int("evharris.queue_capacity"));
  h.patch = static_cast<int>(get_int("evharris.patch"));
  h.gauss_sigma = get_double("evharris.gauss_sigma");
  h.harris_k = get_double("evharris.harris_k");
  h.threshold = get_double("evharris.threshold");
  return h;
}

AnmsConfig Config::anms() const {
  AnmsConfig a;
  a.window_radius = static_cast<int>(get_int("anms.window_radius"));
  a.k = get_double("anms.k");
  a.tau_fallback = get_double("anms.tau_fallback");
  a.tau_neighbors = static_cast<int>(get_int("anms.tau_neighbors"));
  a.sae_policy = sae_policy_from_string(get("anms.sae_policy"));
  return a;
}

PipelineConfig Config::pipeline(bool with_anms) const {
  PipelineConfig p;
  p.geometry = geometry();
  p.detector = detector();
  p.harris = harris();
  p.anms = with_anms ? std::optional<AnmsConfig>(anms()) : std::nullopt;
  p.order_policy = order_policy_from_string(get("stream.order_policy"));
  p.validate();
  return p;
}

LabelThresholds Config::label_thresholds() const {
  LabelThresholds t{get_double("gt.positive_radius"), get_double("gt.negative_radius")};
  if (!(t.positive_radius >= 0.0) || !(t.negative_radius >= t.positive_radius)) {
    throw ConfigError("gt radii must satisfy 0 <= positive_radius <= negative_radius");
  }
  return t;
}

Interpolation Config::interpolation() const { return interpolation_from_string(get("gt.interpolation")); }

double Config::frame_period() const {
  const double rate = get_double("eval.frame_rate");
  if (!(rate > 0.0)) throw ConfigError("eval.frame_rate must be positive");
  return 1.0 / rate;
}

TimeWindow Config::eval_window() const {
  if (get("eval.window") == "all") return TimeWindow{};
  const auto first = static_cast<int>(get_int("eval.first_frame"));
  const auto last = static_cast<int>(get_int("eval.last_frame"));
  if (last <= first) throw ConfigError("eval.last_frame must exceed eval.first_frame");
  return TimeWindow::frames(first, last, frame_period());
}

BenchOptions Config::bench_options() const {
  BenchOptions b;
  b.repetitions = static_cast<int>(get_int("bench.repetitions"));
  b.min_events = static_cast<std::size_t>(get_int("bench.min_events"));
  if (b.repetitions < 1) throw ConfigError("bench.repetitions must be >= 1");
  return b;
}

std::optional<std::uint64_t> Config::seed() const {
  if (!has_value("seed")) return std::nullopt;
  std::uint64_t v = 0;
  parse_full(std::string_view(get("seed")), v);
  return v;
}

}  // namespace evnms::cli
