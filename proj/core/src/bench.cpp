#include "evnms/bench.hpp"

#include <chrono>

#include "evnms/errors.hpp"

namespace evnms {

double time_pipeline_ns_per_event(std::span<const Event> events, const PipelineConfig& cfg) {
  if (events.empty()) return 0.0;
  Pipeline pipeline(cfg);
  std::size_t kept = 0;
  const auto start = std::chrono::steady_clock::now();
  for (const Event& e : events) kept += pipeline.step(e).kept ? 1 : 0;
  const auto stop = std::chrono::steady_clock::now();
  // Keeps the loop observable.
  if (kept > events.size()) throw Error("impossible keep count");
  const double ns = std::chrono::duration<double, std::nano>(stop - start).count();
  return ns / static_cast<double>(events.size());
}

BenchResult bench(std::span<const Event> events, const PipelineConfig& cfg, const BenchOptions& options) {
  if (options.repetitions < 1) throw ConfigError("bench.repetitions must be >= 1");
  PipelineConfig without = cfg;
  without.anms.reset();
  PipelineConfig with = cfg;
  if (!with.anms) with.anms = AnmsConfig{};

  BenchResult out;
  out.n_events = events.size();
  out.repetitions = options.repetitions;
  out.low_confidence = events.size() < options.min_events;

  time_pipeline_ns_per_event(events, without);
  time_pipeline_ns_per_event(events, with);
  for (int i = 0; i < options.repetitions; ++i) {
    out.without_runs.push_back(time_pipeline_ns_per_event(events, without));
    out.with_runs.push_back(time_pipeline_ns_per_event(events, with));
  }
  out.without_anms = summarize_timings(out.without_runs);
  out.with_anms = summarize_timings(out.with_runs);
  if (out.without_anms.median_ns > 0.0) {
    out.increase_rate = (out.with_anms.median_ns - out.without_anms.median_ns) / out.without_anms.median_ns;
  }
  return out;
}

}  // namespace evnms
