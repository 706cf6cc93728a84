#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string_view>
#include <vector>

namespace evnms {

/// Integer microseconds since stream start.
using Timestamp = std::int64_t;

/// SAE value of a pixel that has never fired. Compares older than any real timestamp.
inline constexpr Timestamp kNever = std::numeric_limits<Timestamp>::min();

inline constexpr double kMicrosPerSecond = 1e6;

constexpr double to_seconds(Timestamp t) { return static_cast<double>(t) / kMicrosPerSecond; }
Timestamp from_seconds(double seconds);

enum class Polarity : std::uint8_t { kNegative = 0, kPositive = 1 };

constexpr std::size_t index_of(Polarity p) { return static_cast<std::size_t>(p); }
constexpr Polarity opposite(Polarity p) {
  return p == Polarity::kPositive ? Polarity::kNegative : Polarity::kPositive;
}

struct Event {
  Timestamp t = 0;
  std::uint16_t x = 0;
  std::uint16_t y = 0;
  Polarity p = Polarity::kNegative;

  friend bool operator==(const Event&, const Event&) = default;
};

struct SensorGeometry {
  int width = 240;
  int height = 180;

  constexpr bool contains(int x, int y) const {
    return x >= 0 && y >= 0 && x < width && y < height;
  }
  /// True when (x, y) is at least `margin` pixels away from every border.
  constexpr bool inside_margin(int x, int y, int margin) const {
    return x >= margin && y >= margin && x < width - margin && y < height - margin;
  }
  friend bool operator==(const SensorGeometry&, const SensorGeometry&) = default;
};

/// Dense row-major per-pixel grid.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(int width, int height, T fill)
      : width_(width), height_(height),
        cells_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill) {}

  int width() const { return width_; }
  int height() const { return height_; }

  T& at(int x, int y) { return cells_[offset(x, y)]; }
  const T& at(int x, int y) const { return cells_[offset(x, y)]; }

  void fill(T value) { std::fill(cells_.begin(), cells_.end(), value); }
  const std::vector<T>& cells() const { return cells_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t offset(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> cells_;
};

/// Per-polarity surface of active events (latest timestamp) and latest score.
/// The pipeline is the only writer; snapshots are plain copies.
struct SurfaceState {
  explicit SurfaceState(SensorGeometry g = {});

  SensorGeometry geometry;
  std::array<Grid<Timestamp>, 2> sae;
  std::array<Grid<double>, 2> ssae;

  Timestamp sae_at(Polarity p, int x, int y) const { return sae[index_of(p)].at(x, y); }
  double ssae_at(Polarity p, int x, int y) const { return ssae[index_of(p)].at(x, y); }

  friend bool operator==(const SurfaceState&, const SurfaceState&) = default;
};

/// Writes e.t into the SAE cell of (e.x, e.y, e.p). The event must already be
/// admitted (in bounds, ordered); see StreamGuard.
void update_sae(SurfaceState& state, const Event& e);

enum class OrderPolicy { kReject, kClamp };

std::string_view to_string(OrderPolicy policy);
OrderPolicy order_policy_from_string(std::string_view name);

/// Enforces the ingestion contract of a single stream: events in bounds and
/// timestamps non-decreasing. Throws StreamError carrying the stream position.
class StreamGuard {
 public:
  explicit StreamGuard(SensorGeometry geometry, OrderPolicy policy = OrderPolicy::kReject)
      : geometry_(geometry), policy_(policy) {}

  /// Returns the event to ingest, which differs from `e` only when a
  /// decreasing timestamp is clamped to the previous one.
  Event admit(const Event& e);

  std::size_t position() const { return position_; }
  std::size_t clamped() const { return clamped_; }

 private:
  SensorGeometry geometry_;
  OrderPolicy policy_;
  std::size_t position_ = 0;
  std::size_t clamped_ = 0;
  Timestamp last_t_ = 0;
};

}  // namespace evnms
