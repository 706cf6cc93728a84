#include "evnms/detectors.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <string>

#include "evnms/errors.hpp"

namespace evnms {

SegmentSplit split_ring(std::span<const Timestamp> ring) {
  constexpr std::size_t kMaxRing = 64;
  const int n = static_cast<int>(ring.size());
  if (n < 3 || ring.size() > kMaxRing) {
    throw ConfigError("ring size must lie in [3, 64], got " + std::to_string(n));
  }

  std::array<std::uint8_t, kMaxRing> order;
  std::iota(order.begin(), order.begin() + n, std::uint8_t{0});
  std::sort(order.begin(), order.begin() + n, [&](std::uint8_t a, std::uint8_t b) {
    return ring[a] > ring[b] || (ring[a] == ring[b] && a < b);
  });

  // Grow the newest-first prefix one pixel at a time; the prefix of size k is
  // a valid arc iff it forms a single run and is strictly newer than the rest.
  std::array<bool, kMaxRing> in{};
  int runs = 0;
  int best_k = 0;
  Timestamp best_gap = -1;
  bool best_infinite = false;
  for (int k = 1; k < n; ++k) {
    const int i = order[k - 1];
    const int left = in[(i + n - 1) % n] ? 1 : 0;
    const int right = in[(i + 1) % n] ? 1 : 0;
    runs += 1 - left - right;
    in[i] = true;
    if (runs != 1) continue;

    const Timestamp high_min = ring[order[k - 1]];
    const Timestamp low_max = ring[order[k]];
    if (high_min <= low_max) continue;
    if (low_max == kNever) {
      if (!best_infinite) {
        best_infinite = true;
        best_k = k;
      }
      continue;
    }
    if (!best_infinite && high_min - low_max > best_gap) {
      best_gap = high_min - low_max;
      best_k = k;
    }
  }
  if (best_k == 0) return {n, 0};
  return {best_k, n - best_k};
}

std::optional<SegmentSplit> segment_circle(const SurfaceState& state, const Event& e,
                                           std::span<const Offset> circle) {
  int radius = 0;
  for (const Offset& o : circle) radius = std::max({radius, std::abs(o.dx), std::abs(o.dy)});
  if (!state.geometry.inside_margin(e.x, e.y, radius)) return std::nullopt;

  std::array<Timestamp, 64> ring;
  const auto& sae = state.sae[index_of(e.p)];
  const std::size_t n = std::min(circle.size(), ring.size());
  for (std::size_t i = 0; i < n; ++i) {
    ring[i] = sae.at(e.x + circle[i].dx, e.y + circle[i].dy);
  }
  return split_ring(std::span<const Timestamp>(ring.data(), n));
}

std::optional<SegmentationResult> segment_both_circles(const SurfaceState& state, const Event& e) {
  const auto inner = segment_circle(state, e, kInnerCircle);
  if (!inner) return std::nullopt;
  const auto outer = segment_circle(state, e, kOuterCircle);
  if (!outer) return std::nullopt;
  return SegmentationResult{inner->n_high, inner->n_low, outer->n_high, outer->n_low};
}

int fast_corner_score(const SegmentationResult& seg) {
  return std::max(seg.n_ih, seg.n_il) + std::max(seg.n_oh, seg.n_ol);
}

bool ArcBands::accepts(const SegmentationResult& seg) const {
  const auto in_any = [](const std::vector<Range>& ranges, int len) {
    return std::any_of(ranges.begin(), ranges.end(),
                       [len](const Range& r) { return len >= r.lo && len <= r.hi; });
  };
  return in_any(inner, seg.n_ih) && in_any(outer, seg.n_oh);
}

const ArcBands& ev_fast_bands() {
  static const ArcBands bands{{{3, 6}}, {{4, 8}}};
  return bands;
}

const ArcBands& arc_fast_bands() {
  static const ArcBands bands{{{3, 6}, {10, 13}}, {{4, 8}, {13, 16}}};
  return bands;
}

namespace {

std::optional<DetectionResult> fast_detect(const SurfaceState& state, const Event& e,
                                           const ArcBands& bands) {
  const auto seg = segment_both_circles(state, e);
  if (!seg) return std::nullopt;
  return DetectionResult{bands.accepts(*seg), static_cast<double>(fast_corner_score(*seg))};
}

class FastDetector final : public CornerDetector {
 public:
  explicit FastDetector(const ArcBands& bands) : bands_(bands) {}

  std::optional<DetectionResult> detect(const SurfaceState& state, const Event& e) override {
    return fast_detect(state, e, bands_);
  }
  int margin() const override { return kFastMargin; }

 private:
  const ArcBands& bands_;
};

}  // namespace

std::optional<DetectionResult> ev_fast_detect(const SurfaceState& state, const Event& e) {
  return fast_detect(state, e, ev_fast_bands());
}

std::optional<DetectionResult> arc_fast_detect(const SurfaceState& state, const Event& e) {
  return fast_detect(state, e, arc_fast_bands());
}

std::string_view to_string(DetectorKind kind) {
  switch (kind) {
    case DetectorKind::kEvHarris: return "evharris";
    case DetectorKind::kEvFast: return "evfast";
    case DetectorKind::kArcFast: return "arcfast";
  }
  return "unknown";
}

DetectorKind detector_kind_from_string(std::string_view name) {
  if (name == "evharris") return DetectorKind::kEvHarris;
  if (name == "evfast") return DetectorKind::kEvFast;
  if (name == "arcfast") return DetectorKind::kArcFast;
  throw ConfigError("unknown detector '" + std::string(name) + "' (expected evharris|evfast|arcfast)");
}

std::unique_ptr<CornerDetector> make_harris_detector(SensorGeometry geometry, const EvHarrisConfig& cfg);

std::unique_ptr<CornerDetector> make_detector(DetectorKind kind, SensorGeometry geometry,
                                              const EvHarrisConfig& harris) {
  switch (kind) {
    case DetectorKind::kEvHarris: return make_harris_detector(geometry, harris);
    case DetectorKind::kEvFast: return std::make_unique<FastDetector>(ev_fast_bands());
    case DetectorKind::kArcFast: return std::make_unique<FastDetector>(arc_fast_bands());
  }
  throw ConfigError("unknown detector kind");
}

}  // namespace evnms
