#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "evnms/anms.hpp"
#include "evnms/detectors.hpp"
#include "evnms/event.hpp"

namespace evnms {

struct PipelineConfig {
  SensorGeometry geometry;
  DetectorKind detector = DetectorKind::kArcFast;
  EvHarrisConfig harris;
  /// Absent disables the suppression stage; every accepted corner is kept.
  std::optional<AnmsConfig> anms = AnmsConfig{};
  OrderPolicy order_policy = OrderPolicy::kReject;

  void validate() const;
};

struct StepResult {
  bool skipped = false;   // too close to the border for the detector
  bool accepted = false;  // detector verdict
  bool kept = false;      // survived suppression (== accepted without it)
  double score = 0.0;
};

/// Single-writer streaming pipeline: admit -> SAE update -> detect -> suppress.
class Pipeline {
 public:
  explicit Pipeline(const PipelineConfig& cfg);
  /// Uses a caller-supplied detector instead of cfg.detector.
  Pipeline(const PipelineConfig& cfg, std::unique_ptr<CornerDetector> detector);

  StepResult step(const Event& e);

  const SurfaceState& state() const { return state_; }
  /// Surfaces the filter decays against (distinct from state() only under
  /// SaePolicy::kCornerEvents).
  const SurfaceState& filter_state() const { return filter_state_ ? *filter_state_ : state_; }

  std::size_t n_events() const { return guard_.position(); }
  std::size_t n_skipped() const { return n_skipped_; }
  std::size_t n_accepted() const { return n_accepted_; }
  std::size_t n_kept() const { return n_kept_; }

 private:
  PipelineConfig cfg_;
  StreamGuard guard_;
  SurfaceState state_;
  std::optional<SurfaceState> filter_state_;
  std::unique_ptr<CornerDetector> detector_;
  std::size_t n_skipped_ = 0;
  std::size_t n_accepted_ = 0;
  std::size_t n_kept_ = 0;
};

/// One detector-accepted event. The event itself is never modified.
struct CornerRecord {
  std::size_t index = 0;  // position in the input stream
  Event event;
  double score = 0.0;
  bool kept = false;
};

struct PipelineOutput {
  std::size_t n_events = 0;
  std::size_t n_skipped = 0;
  std::vector<CornerRecord> corners;

  std::size_t n_raw() const { return corners.size(); }
  std::size_t n_kept() const;
  std::vector<Event> raw_events() const;
  std::vector<Event> kept_events() const;
  /// Per input event: kept by the full pipeline.
  std::vector<bool> kept_mask() const;
  /// Per input event: accepted by the detector.
  std::vector<bool> raw_mask() const;
};

PipelineOutput run_pipeline(std::span<const Event> events, const PipelineConfig& cfg);
PipelineOutput run_pipeline(std::span<const Event> events, const PipelineConfig& cfg,
                            std::unique_ptr<CornerDetector> detector);

}  // namespace evnms
