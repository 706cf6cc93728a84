#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "evnms/event.hpp"

namespace evnms {

struct Offset {
  int dx;
  int dy;
};

// Bresenham rings used by the event-based FAST family, circularly ordered.
inline constexpr std::array<Offset, 16> kInnerCircle{{
    {0, 3}, {1, 3}, {2, 2}, {3, 1}, {3, 0}, {3, -1}, {2, -2}, {1, -3},
    {0, -3}, {-1, -3}, {-2, -2}, {-3, -1}, {-3, 0}, {-3, 1}, {-2, 2}, {-1, 3},
}};
inline constexpr std::array<Offset, 20> kOuterCircle{{
    {0, 4}, {1, 4}, {2, 3}, {3, 2}, {4, 1}, {4, 0}, {4, -1}, {3, -2}, {2, -3}, {1, -4},
    {0, -4}, {-1, -4}, {-2, -3}, {-3, -2}, {-4, -1}, {-4, 0}, {-4, 1}, {-3, 2}, {-2, 3}, {-1, 4},
}};

/// Border margin required by both rings.
inline constexpr int kFastMargin = 4;

/// A split of one ring into a contiguous newer arc and its older complement.
struct SegmentSplit {
  int n_high = 0;
  int n_low = 0;
  friend bool operator==(const SegmentSplit&, const SegmentSplit&) = default;
};

struct SegmentationResult {
  int n_ih = 0;
  int n_il = 0;
  int n_oh = 0;
  int n_ol = 0;
  friend bool operator==(const SegmentationResult&, const SegmentationResult&) = default;
};

struct DetectionResult {
  bool is_corner = false;
  double score = 0.0;
};

/// Splits a circular sequence of timestamps into one contiguous arc whose
/// oldest entry is strictly newer than every entry of the complement.
///
/// Among all valid splits the one with the widest time gap between the two
/// sides wins; a complement made only of never-fired pixels counts as an
/// infinite gap. Equal gaps resolve to the shorter arc. When no valid split
/// exists the degenerate (size, 0) is returned.
SegmentSplit split_ring(std::span<const Timestamp> ring);

/// Reads the ring around `e` from the SAE of e.p and splits it. Returns
/// nullopt when the ring would leave the sensor.
std::optional<SegmentSplit> segment_circle(const SurfaceState& state, const Event& e,
                                           std::span<const Offset> circle);

std::optional<SegmentationResult> segment_both_circles(const SurfaceState& state, const Event& e);

/// Sum of the two major arcs, one per ring.
int fast_corner_score(const SegmentationResult& seg);

/// Inclusive length ranges accepted for the newer arc on each ring.
struct ArcBands {
  struct Range {
    int lo;
    int hi;
  };
  std::vector<Range> inner;
  std::vector<Range> outer;

  bool accepts(const SegmentationResult& seg) const;
};

const ArcBands& ev_fast_bands();
const ArcBands& arc_fast_bands();

std::optional<DetectionResult> ev_fast_detect(const SurfaceState& state, const Event& e);
std::optional<DetectionResult> arc_fast_detect(const SurfaceState& state, const Event& e);

// ---------------------------------------------------------------------------
// evHarris

struct EvHarrisConfig {
  std::size_t queue_capacity = 2000;
  int patch = 9;
  double gauss_sigma = 1.0;
  double harris_k = 0.04;
  /// Calibrated on the built-in shapes scene, see README.
  double threshold = 9.5;

  /// Throws ConfigError on invalid values.
  void validate() const;
  /// ceil(patch / 2); the Sobel stencil reads one pixel beyond the patch.
  int margin() const { return patch / 2 + 1; }
};

/// Binary surface of the most recent `capacity` events per polarity.
class BinarySurface {
 public:
  BinarySurface(SensorGeometry geometry, std::size_t capacity);

  void push(const Event& e);
  bool active(Polarity p, int x, int y) const { return counts_[index_of(p)].at(x, y) > 0; }
  std::size_t size(Polarity p) const { return rings_[index_of(p)].size; }
  std::size_t capacity() const { return capacity_; }
  const SensorGeometry& geometry() const { return geometry_; }

 private:
  struct Ring {
    std::vector<std::uint32_t> cells;  // packed y * width + x
    std::size_t head = 0;
    std::size_t size = 0;
  };

  SensorGeometry geometry_;
  std::size_t capacity_;
  std::array<Ring, 2> rings_;
  std::array<Grid<std::uint32_t>, 2> counts_;
};

/// Harris response on the binary surface patch around `e`; nullopt on border violation.
std::optional<DetectionResult> ev_harris_detect(const BinarySurface& surface, const Event& e,
                                                const EvHarrisConfig& cfg);

// ---------------------------------------------------------------------------

enum class DetectorKind { kEvHarris, kEvFast, kArcFast };

std::string_view to_string(DetectorKind kind);
DetectorKind detector_kind_from_string(std::string_view name);

/// Stateful per-stream detector. `detect` is called once per admitted event,
/// after the event has been written into the SAE.
class CornerDetector {
 public:
  virtual ~CornerDetector() = default;
  virtual std::optional<DetectionResult> detect(const SurfaceState& state, const Event& e) = 0;
  /// Border margin below which events are skipped.
  virtual int margin() const = 0;
};

std::unique_ptr<CornerDetector> make_detector(DetectorKind kind, SensorGeometry geometry,
                                              const EvHarrisConfig& harris = {});

}  // namespace evnms
