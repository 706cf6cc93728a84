#include "evnms/pipeline.hpp"

#include "evnms/errors.hpp"

namespace evnms {

void PipelineConfig::validate() const {
  if (geometry.width <= 0 || geometry.height <= 0 || geometry.width > 0xFFFF || geometry.height > 0xFFFF) {
    throw ConfigError("sensor geometry must be positive and fit 16-bit coordinates");
  }
  if (detector == DetectorKind::kEvHarris) harris.validate();
  if (anms) anms->validate();
}

Pipeline::Pipeline(const PipelineConfig& cfg)
    : Pipeline(cfg, (cfg.validate(), make_detector(cfg.detector, cfg.geometry, cfg.harris))) {}

Pipeline::Pipeline(const PipelineConfig& cfg, std::unique_ptr<CornerDetector> detector)
    : cfg_(cfg), guard_(cfg.geometry, cfg.order_policy), state_(cfg.geometry), detector_(std::move(detector)) {
  if (cfg_.anms) {
    cfg_.anms->validate();
    if (cfg_.anms->sae_policy == SaePolicy::kCornerEvents) filter_state_.emplace(cfg.geometry);
  }
}

StepResult Pipeline::step(const Event& raw) {
  const Event e = guard_.admit(raw);
  update_sae(state_, e);

  StepResult out;
  const auto det = detector_->detect(state_, e);
  if (!det) {
    out.skipped = true;
    ++n_skipped_;
    return out;
  }
  out.score = det->score;
  if (!det->is_corner) return out;

  out.accepted = true;
  ++n_accepted_;
  if (cfg_.anms) {
    SurfaceState& surfaces = filter_state_ ? *filter_state_ : state_;
    out.kept = process_corner_event(surfaces, e, det->score, *cfg_.anms);
  } else {
    out.kept = true;
  }
  if (out.kept) ++n_kept_;
  return out;
}

std::size_t PipelineOutput::n_kept() const {
  std::size_t n = 0;
  for (const auto& c : corners) n += c.kept ? 1 : 0;
  return n;
}

std::vector<Event> PipelineOutput::raw_events() const {
  std::vector<Event> out;
  out.reserve(corners.size());
  for (const auto& c : corners) out.push_back(c.event);
  return out;
}

std::vector<Event> PipelineOutput::kept_events() const {
  std::vector<Event> out;
  for (const auto& c : corners) {
    if (c.kept) out.push_back(c.event);
  }
  return out;
}

std::vector<bool> PipelineOutput::kept_mask() const {
  std::vector<bool> mask(n_events, false);
  for (const auto& c : corners) mask[c.index] = c.kept;
  return mask;
}

std::vector<bool> PipelineOutput::raw_mask() const {
  std::vector<bool> mask(n_events, false);
  for (const auto& c : corners) mask[c.index] = true;
  return mask;
}

namespace {

PipelineOutput drain(std::span<const Event> events, Pipeline& pipeline) {
  PipelineOutput out;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const StepResult r = pipeline.step(events[i]);
    if (r.accepted) out.corners.push_back(CornerRecord{i, events[i], r.score, r.kept});
  }
  out.n_events = pipeline.n_events();
  out.n_skipped = pipeline.n_skipped();
  return out;
}

}  // namespace

PipelineOutput run_pipeline(std::span<const Event> events, const PipelineConfig& cfg) {
  Pipeline pipeline(cfg);
  return drain(events, pipeline);
}

PipelineOutput run_pipeline(std::span<const Event> events, const PipelineConfig& cfg,
                            std::unique_ptr<CornerDetector> detector) {
  Pipeline pipeline(cfg, std::move(detector));
  return drain(events, pipeline);
}

}  // namespace evnms
