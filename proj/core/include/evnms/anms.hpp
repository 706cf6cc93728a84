#pragma once

#include <string_view>
#include <vector>

#include "evnms/event.hpp"

namespace evnms {

/// Which events advance the timestamps the filter decays against.
enum class SaePolicy {
  kAllEvents,     ///< the detector-side SAE, written by every event
  kCornerEvents,  ///< a filter-private SAE, written only by accepted corners
};

std::string_view to_string(SaePolicy policy);
SaePolicy sae_policy_from_string(std::string_view name);

struct AnmsConfig {
  int window_radius = 4;      // 9x9 window
  double k = 20.0;            // decay multiplier
  double tau_fallback = 0.05; // seconds, used when the window holds no history
  int tau_neighbors = 5;
  SaePolicy sae_policy = SaePolicy::kAllEvents;

  void validate() const;
};

/// exp(-age / (k * tau)); ages and tau in seconds.
double decay_coefficient(double age_s, double k, double tau_s);

/// k * tau in microseconds, floored at one microsecond.
double time_constant_us(double k, double tau_s);

/// Speed-adaptive tau in seconds: mean age (relative to e.t) of the
/// `tau_neighbors` newest SAE timestamps of e.p inside the window, the
/// event's own pixel excluded. Never-fired pixels do not count. Falls back
/// to cfg.tau_fallback for an empty window and is floored at 1 us.
double compute_tau(const SurfaceState& state, const Event& e, const AnmsConfig& cfg);

/// Decayed score surface around one event, clipped to the sensor.
struct DecayedWindow {
  int x0 = 0;  // sensor coordinates of the top-left cell
  int y0 = 0;
  int width = 0;
  int height = 0;
  std::vector<double> values;  // row-major
  double center = 0.0;

  double at(int x, int y) const {
    return values[static_cast<std::size_t>((y - y0) * width + (x - x0))];
  }
  double max() const;
};

DecayedWindow decayed_window(const SurfaceState& state, const Event& e, double tau_s,
                             const AnmsConfig& cfg);

/// Writes (e.t, score) into the surfaces of e.p, then keeps the event iff its
/// decayed score (which is `score`) is not exceeded anywhere in its window.
/// Ties keep the event. `score` must be non-negative.
bool process_corner_event(SurfaceState& state, const Event& e, double score, const AnmsConfig& cfg);

}  // namespace evnms
