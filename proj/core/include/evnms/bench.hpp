#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "evnms/event.hpp"
#include "evnms/metrics.hpp"
#include "evnms/pipeline.hpp"

namespace evnms {

struct BenchOptions {
  int repetitions = 5;
  std::size_t min_events = 100000;
};

struct BenchResult {
  std::size_t n_events = 0;
  int repetitions = 0;
  TimingSummary without_anms;
  TimingSummary with_anms;
  /// Per-repetition ns/event, warm-up excluded.
  std::vector<double> without_runs;
  std::vector<double> with_runs;
  /// (median_with - median_without) / median_without
  double increase_rate = 0.0;
  bool low_confidence = false;
};

/// Times the detector alone and detector + suppression on preloaded events.
/// One warm-up run of each variant is discarded; variants are interleaved per
/// repetition so drift affects both alike.
BenchResult bench(std::span<const Event> events, const PipelineConfig& cfg, const BenchOptions& options = {});

/// ns/event of one full pass over `events`.
double time_pipeline_ns_per_event(std::span<const Event> events, const PipelineConfig& cfg);

}  // namespace evnms
