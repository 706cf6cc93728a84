#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "evnms/detectors.hpp"
#include "evnms/event.hpp"

namespace evnms::testing {

struct ScriptedVerdict {
  bool corner = false;
  double score = 0.0;
};

struct ScriptedStream {
  std::vector<Event> events;
  std::vector<ScriptedVerdict> verdicts;
};

/// Dense random stream on a small sensor with random corner verdicts.
/// Scores come from a small integer set so exact ties occur.
inline ScriptedStream random_corner_stream(std::uint64_t seed, std::size_t n, SensorGeometry g,
                                           double accept_rate = 0.5) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> xd(0, g.width - 1);
  std::uniform_int_distribution<int> yd(0, g.height - 1);
  std::uniform_int_distribution<int> gap(0, 40);
  std::uniform_int_distribution<int> score(1, 8);
  std::bernoulli_distribution pol(0.5);
  std::bernoulli_distribution accept(accept_rate);
  ScriptedStream s;
  Timestamp t = 0;
  for (std::size_t i = 0; i < n; ++i) {
    t += gap(rng);
    s.events.push_back(Event{t, static_cast<std::uint16_t>(xd(rng)), static_cast<std::uint16_t>(yd(rng)),
                             pol(rng) ? Polarity::kPositive : Polarity::kNegative});
    const bool c = accept(rng);
    s.verdicts.push_back({c, static_cast<double>(score(rng))});
  }
  return s;
}

/// Replays fixed verdicts in stream order, ignoring the surfaces.
class ScriptedDetector final : public CornerDetector {
 public:
  explicit ScriptedDetector(std::vector<ScriptedVerdict> verdicts) : verdicts_(std::move(verdicts)) {}

  std::optional<DetectionResult> detect(const SurfaceState&, const Event&) override {
    const ScriptedVerdict& v = verdicts_.at(next_++);
    return DetectionResult{v.corner, v.score};
  }
  int margin() const override { return 0; }

 private:
  std::vector<ScriptedVerdict> verdicts_;
  std::size_t next_ = 0;
};

/// Accepts everything with a constant score.
class AcceptAllDetector final : public CornerDetector {
 public:
  explicit AcceptAllDetector(double score) : score_(score) {}
  std::optional<DetectionResult> detect(const SurfaceState&, const Event&) override {
    return DetectionResult{true, score_};
  }
  int margin() const override { return 0; }

 private:
  double score_;
};

}  // namespace evnms::testing
