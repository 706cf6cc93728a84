#include "evnms/anms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "evnms/errors.hpp"

namespace evnms {

namespace {
constexpr int kMaxTauNeighbors = 64;
}

std::string_view to_string(SaePolicy policy) {
  return policy == SaePolicy::kCornerEvents ? "corners" : "all";
}

SaePolicy sae_policy_from_string(std::string_view name) {
  if (name == "all") return SaePolicy::kAllEvents;
  if (name == "corners") return SaePolicy::kCornerEvents;
  throw ConfigError("unknown SAE policy '" + std::string(name) + "' (expected all|corners)");
}

void AnmsConfig::validate() const {
  if (window_radius < 1) throw ConfigError("anms.window_radius must be >= 1");
  if (!(k > 0.0)) throw ConfigError("anms.k must be positive");
  if (!(tau_fallback > 0.0)) throw ConfigError("anms.tau_fallback must be positive");
  if (tau_neighbors < 1 || tau_neighbors > kMaxTauNeighbors) {
    throw ConfigError("anms.tau_neighbors must lie in [1, 64]");
  }
}

double decay_coefficient(double age_s, double k, double tau_s) {
  return std::exp(-age_s / (k * tau_s));
}

double time_constant_us(double k, double tau_s) {
  return std::max(1.0, k * tau_s * kMicrosPerSecond);
}

double compute_tau(const SurfaceState& state, const Event& e, const AnmsConfig& cfg) {
  const auto& sae = state.sae[index_of(e.p)];
  const int r = cfg.window_radius;
  const int x_lo = std::max(0, e.x - r);
  const int x_hi = std::min(state.geometry.width - 1, e.x + r);
  const int y_lo = std::max(0, e.y - r);
  const int y_hi = std::min(state.geometry.height - 1, e.y + r);

  // Newest-first buffer of the n newest neighbour timestamps.
  std::array<Timestamp, kMaxTauNeighbors> newest;
  int count = 0;
  const int n = cfg.tau_neighbors;
  for (int y = y_lo; y <= y_hi; ++y) {
    for (int x = x_lo; x <= x_hi; ++x) {
      if (x == e.x && y == e.y) continue;
      const Timestamp t = sae.at(x, y);
      if (t == kNever) continue;
      if (count == n && t <= newest[n - 1]) continue;
      int i = count < n ? count++ : n - 1;
      while (i > 0 && newest[i - 1] < t) {
        newest[i] = newest[i - 1];
        --i;
      }
      newest[i] = t;
    }
  }
  if (count == 0) return cfg.tau_fallback;
  Timestamp sum = 0;
  for (int i = 0; i < count; ++i) sum += e.t - newest[i];
  const double mean_us = std::max(1.0, static_cast<double>(sum) / count);
  return mean_us / kMicrosPerSecond;
}

double DecayedWindow::max() const {
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

DecayedWindow decayed_window(const SurfaceState& state, const Event& e, double tau_s,
                             const AnmsConfig& cfg) {
  const auto& sae = state.sae[index_of(e.p)];
  const auto& ssae = state.ssae[index_of(e.p)];
  const int r = cfg.window_radius;
  DecayedWindow w;
  w.x0 = std::max(0, e.x - r);
  w.y0 = std::max(0, e.y - r);
  w.width = std::min(state.geometry.width - 1, e.x + r) - w.x0 + 1;
  w.height = std::min(state.geometry.height - 1, e.y + r) - w.y0 + 1;
  w.values.assign(static_cast<std::size_t>(w.width * w.height), 0.0);

  const double kt_us = time_constant_us(cfg.k, tau_s);
  for (int y = w.y0; y < w.y0 + w.height; ++y) {
    for (int x = w.x0; x < w.x0 + w.width; ++x) {
      const Timestamp t = sae.at(x, y);
      if (t == kNever) continue;
      const double lambda = std::exp(-static_cast<double>(e.t - t) / kt_us);
      w.values[static_cast<std::size_t>((y - w.y0) * w.width + (x - w.x0))] = lambda * ssae.at(x, y);
    }
  }
  w.center = w.at(e.x, e.y);
  return w;
}

bool process_corner_event(SurfaceState& state, const Event& e, double score, const AnmsConfig& cfg) {
  auto& sae = state.sae[index_of(e.p)];
  auto& ssae = state.ssae[index_of(e.p)];
  sae.at(e.x, e.y) = e.t;
  ssae.at(e.x, e.y) = score;

  const double kt_us = time_constant_us(cfg.k, compute_tau(state, e, cfg));
  const int r = cfg.window_radius;
  const int x_lo = std::max(0, e.x - r);
  const int x_hi = std::min(state.geometry.width - 1, e.x + r);
  const int y_lo = std::max(0, e.y - r);
  const int y_hi = std::min(state.geometry.height - 1, e.y + r);

  // The centre decays by exp(0) = 1. A neighbour's decayed value never
  // exceeds its raw score, so only raw scores above `score` need the exp.
  for (int y = y_lo; y <= y_hi; ++y) {
    for (int x = x_lo; x <= x_hi; ++x) {
      const double s = ssae.at(x, y);
      if (s <= score) continue;
      const Timestamp t = sae.at(x, y);
      if (t == kNever) continue;
      if (std::exp(-static_cast<double>(e.t - t) / kt_us) * s > score) return false;
    }
  }
  return true;
}

}  // namespace evnms
