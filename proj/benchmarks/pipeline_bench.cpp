#include <benchmark/benchmark.h>

#include "evnms/anms.hpp"
#include "evnms/detectors.hpp"
#include "evnms/pipeline.hpp"
#include "evnms/synth.hpp"

namespace {

const std::vector<evnms::Event>& scene_events() {
  static const auto events = evnms::generate(evnms::shapes_like_scene(), 7).events;
  return events;
}

// range(0): detector kind, range(1): suppression on/off.
void BM_Pipeline(benchmark::State& state) {
  const auto& events = scene_events();
  evnms::PipelineConfig cfg;
  cfg.detector = static_cast<evnms::DetectorKind>(state.range(0));
  if (state.range(1) == 0) cfg.anms.reset();
  for (auto _ : state) {
    evnms::Pipeline p(cfg);
    std::size_t kept = 0;
    for (const auto& e : events) kept += p.step(e).kept;
    benchmark::DoNotOptimize(kept);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * events.size()));
  state.SetLabel(std::string(evnms::to_string(cfg.detector)) + (cfg.anms ? "+anms" : ""));
}
BENCHMARK(BM_Pipeline)
    ->ArgsProduct({{0, 1, 2}, {0, 1}})
    ->Unit(benchmark::kMillisecond);

void BM_SplitRing(benchmark::State& state) {
  std::array<evnms::Timestamp, 20> ring{};
  for (std::size_t i = 0; i < ring.size(); ++i) ring[i] = static_cast<evnms::Timestamp>((i * 7919) % 101);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ring.data());
    benchmark::DoNotOptimize(evnms::split_ring(ring));
  }
}
BENCHMARK(BM_SplitRing);

void BM_ProcessCornerEvent(benchmark::State& state) {
  evnms::SurfaceState s;
  const evnms::AnmsConfig cfg;
  evnms::Timestamp t = 0;
  for (int y = 40; y < 60; ++y) {
    for (int x = 40; x < 60; ++x) evnms::process_corner_event(s, {t += 10, static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y), evnms::Polarity::kPositive}, (x * y) % 17, cfg);
  }
  for (auto _ : state) {
    const evnms::Event e{t += 10, 50, 50, evnms::Polarity::kPositive};
    benchmark::DoNotOptimize(evnms::process_corner_event(s, e, 9.0, cfg));
  }
}
BENCHMARK(BM_ProcessCornerEvent);

}  // namespace

BENCHMARK_MAIN();
