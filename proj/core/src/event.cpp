#include "evnms/event.hpp"

#include <cmath>
#include <string>

#include "evnms/errors.hpp"

namespace evnms {

Timestamp from_seconds(double seconds) {
  return static_cast<Timestamp>(std::llround(seconds * kMicrosPerSecond));
}

SurfaceState::SurfaceState(SensorGeometry g)
    : geometry(g),
      sae{Grid<Timestamp>(g.width, g.height, kNever), Grid<Timestamp>(g.width, g.height, kNever)},
      ssae{Grid<double>(g.width, g.height, 0.0), Grid<double>(g.width, g.height, 0.0)} {}

void update_sae(SurfaceState& state, const Event& e) {
  state.sae[index_of(e.p)].at(e.x, e.y) = e.t;
}

std::string_view to_string(OrderPolicy policy) {
  return policy == OrderPolicy::kClamp ? "clamp" : "reject";
}

OrderPolicy order_policy_from_string(std::string_view name) {
  if (name == "reject") return OrderPolicy::kReject;
  if (name == "clamp") return OrderPolicy::kClamp;
  throw ConfigError("unknown order policy '" + std::string(name) + "' (expected reject|clamp)");
}

Event StreamGuard::admit(const Event& e) {
  const std::size_t pos = position_;
  if (!geometry_.contains(e.x, e.y)) {
    throw StreamError(pos, "pixel (" + std::to_string(e.x) + ", " + std::to_string(e.y) +
                               ") outside " + std::to_string(geometry_.width) + "x" +
                               std::to_string(geometry_.height) + " sensor");
  }
  if (e.t < 0) {
    throw StreamError(pos, "negative timestamp " + std::to_string(e.t) + " us");
  }
  Event out = e;
  if (pos > 0 && e.t < last_t_) {
    if (policy_ == OrderPolicy::kReject) {
      throw StreamError(pos, "timestamp " + std::to_string(e.t) + " us precedes previous " +
                                 std::to_string(last_t_) + " us");
    }
    out.t = last_t_;
    ++clamped_;
  }
  last_t_ = out.t;
  ++position_;
  return out;
}

}  // namespace evnms
