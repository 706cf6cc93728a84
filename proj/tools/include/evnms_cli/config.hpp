#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "evnms/bench.hpp"
#include "evnms/ground_truth.hpp"
#include "evnms/pipeline.hpp"

namespace evnms::cli {

/// Flat key = value settings with a fixed key registry. Later assignments win,
/// so callers apply defaults, then a config file, then command-line flags.
class Config {
 public:
  Config();

  /// Throws ConfigError for unknown keys and values that do not parse.
  void set(std::string_view key, std::string_view value);
  /// `key=value`, as given to --set.
  void assign(std::string_view assignment);
  /// `key = value` lines; '#' starts a comment. Throws IoError / ConfigError.
  void load_file(const std::filesystem::path& path);
  void load(std::istream& in, std::string_view source);

  const std::string& get(std::string_view key) const;
  double get_double(std::string_view key) const;
  long long get_int(std::string_view key) const;
  bool has_value(std::string_view key) const { return !get(key).empty(); }

  /// Every key with its effective value, in key order, as config-file lines.
  void dump(std::ostream& out) const;
  std::vector<std::string> keys() const;

  SensorGeometry geometry() const;
  DetectorKind detector() const;
  EvHarrisConfig harris() const;
  AnmsConfig anms() const;
  PipelineConfig pipeline(bool with_anms) const;
  LabelThresholds label_thresholds() const;
  Interpolation interpolation() const;
  double frame_period() const;
  TimeWindow eval_window() const;
  BenchOptions bench_options() const;
  std::optional<std::uint64_t> seed() const;

 private:
  enum class Kind { kUInt, kDouble, kChoice, kOptionalUInt };
  struct Entry {
    Kind kind;
    std::string value;
    std::vector<std::string> choices;
  };

  void define(std::string key, Kind kind, std::string value, std::vector<std::string> choices = {});
  const Entry& entry(std::string_view key) const;

  std::map<std::string, Entry, std::less<>> entries_;
};

}  // namespace evnms::cli
