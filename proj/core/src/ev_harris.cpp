#include <cmath>
#include <string>

#include "evnms/detectors.hpp"
#include "evnms/errors.hpp"

namespace evnms {

void EvHarrisConfig::validate() const {
  if (patch < 5 || patch > 61 || patch % 2 == 0) {
    throw ConfigError("evharris.patch must be odd and in [5, 61], got " + std::to_string(patch));
  }
  if (queue_capacity < static_cast<std::size_t>(patch) * static_cast<std::size_t>(patch)) {
    throw ConfigError("evharris.queue_capacity must be >= patch^2");
  }
  if (!(harris_k > 0.0 && harris_k < 0.25)) {
    throw ConfigError("evharris.k must lie in (0, 0.25)");
  }
  if (!(gauss_sigma > 0.0)) throw ConfigError("evharris.sigma must be positive");
  // Accepted scores feed the score surface, which must stay non-negative.
  if (!(threshold >= 0.0)) throw ConfigError("evharris.threshold must be >= 0");
}

BinarySurface::BinarySurface(SensorGeometry geometry, std::size_t capacity)
    : geometry_(geometry),
      capacity_(capacity),
      counts_{Grid<std::uint32_t>(geometry.width, geometry.height, 0),
              Grid<std::uint32_t>(geometry.width, geometry.height, 0)} {
  for (Ring& ring : rings_) ring.cells.assign(capacity_, 0);
}

void BinarySurface::push(const Event& e) {
  if (capacity_ == 0) return;
  Ring& ring = rings_[index_of(e.p)];
  auto& counts = counts_[index_of(e.p)];
  const auto w = static_cast<std::uint32_t>(geometry_.width);
  if (ring.size == capacity_) {
    const std::uint32_t old = ring.cells[ring.head];
    --counts.at(static_cast<int>(old % w), static_cast<int>(old / w));
  } else {
    ++ring.size;
  }
  ring.cells[ring.head] = static_cast<std::uint32_t>(e.y) * w + e.x;
  ++counts.at(e.x, e.y);
  ring.head = (ring.head + 1) % capacity_;
}

namespace {

std::vector<double> gaussian_weights(const EvHarrisConfig& cfg) {
  const int half = cfg.patch / 2;
  std::vector<double> w(static_cast<std::size_t>(cfg.patch * cfg.patch));
  double sum = 0.0;
  for (int dy = -half; dy <= half; ++dy) {
    for (int dx = -half; dx <= half; ++dx) {
      const double v = std::exp(-(dx * dx + dy * dy) / (2.0 * cfg.gauss_sigma * cfg.gauss_sigma));
      w[static_cast<std::size_t>((dy + half) * cfg.patch + dx + half)] = v;
      sum += v;
    }
  }
  for (double& v : w) v /= sum;
  return w;
}

// Structure tensor of 3x3 Sobel gradients over the patch, Gaussian weighted.
double harris_response(const BinarySurface& surface, const Event& e, const EvHarrisConfig& cfg,
                       const std::vector<double>& weights) {
  const int half = cfg.patch / 2;
  const int side = cfg.patch + 2;
  constexpr int kMaxSide = 64;
  std::array<std::uint8_t, kMaxSide * kMaxSide> b{};
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      b[r * side + c] = surface.active(e.p, e.x - half - 1 + c, e.y - half - 1 + r) ? 1 : 0;
    }
  }
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (int r = 1; r <= cfg.patch; ++r) {
    const std::uint8_t* up = &b[(r - 1) * side];
    const std::uint8_t* mid = &b[r * side];
    const std::uint8_t* down = &b[(r + 1) * side];
    for (int c = 1; c <= cfg.patch; ++c) {
      const int gx = (up[c + 1] + 2 * mid[c + 1] + down[c + 1]) - (up[c - 1] + 2 * mid[c - 1] + down[c - 1]);
      const int gy = (down[c - 1] + 2 * down[c] + down[c + 1]) - (up[c - 1] + 2 * up[c] + up[c + 1]);
      if (gx == 0 && gy == 0) continue;
      const double w = weights[static_cast<std::size_t>((r - 1) * cfg.patch + (c - 1))];
      sxx += w * gx * gx;
      syy += w * gy * gy;
      sxy += w * gx * gy;
    }
  }
  const double det = sxx * syy - sxy * sxy;
  const double trace = sxx + syy;
  return det - cfg.harris_k * trace * trace;
}

class HarrisDetector final : public CornerDetector {
 public:
  HarrisDetector(SensorGeometry geometry, const EvHarrisConfig& cfg)
      : cfg_(cfg), surface_(geometry, cfg.queue_capacity), weights_(gaussian_weights(cfg)) {}

  std::optional<DetectionResult> detect(const SurfaceState&, const Event& e) override {
    surface_.push(e);
    if (!surface_.geometry().inside_margin(e.x, e.y, cfg_.margin())) return std::nullopt;
    const double score = harris_response(surface_, e, cfg_, weights_);
    return DetectionResult{score > cfg_.threshold, score};
  }
  int margin() const override { return cfg_.margin(); }

 private:
  EvHarrisConfig cfg_;
  BinarySurface surface_;
  std::vector<double> weights_;
};

}  // namespace

std::optional<DetectionResult> ev_harris_detect(const BinarySurface& surface, const Event& e,
                                                const EvHarrisConfig& cfg) {
  cfg.validate();
  if (!surface.geometry().inside_margin(e.x, e.y, cfg.margin())) return std::nullopt;
  const double score = harris_response(surface, e, cfg, gaussian_weights(cfg));
  return DetectionResult{score > cfg.threshold, score};
}

std::unique_ptr<CornerDetector> make_harris_detector(SensorGeometry geometry, const EvHarrisConfig& cfg) {
  cfg.validate();
  return std::make_unique<HarrisDetector>(geometry, cfg);
}

}  // namespace evnms
