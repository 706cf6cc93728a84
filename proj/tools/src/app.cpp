#include "evnms_cli/app.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "evnms/bench.hpp"
#include "evnms/errors.hpp"
#include "evnms/event_io.hpp"
#include "evnms/ground_truth.hpp"
#include "evnms/metrics.hpp"
#include "evnms/pipeline.hpp"
#include "evnms/synth.hpp"
#include "evnms_cli/config.hpp"

namespace evnms::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

constexpr const char* kFormats = R"(File formats:
  events      text, one event per line: 't x y p' (t in seconds with
              microsecond digits, p in {0,1})
  tracks      CSV 'track_id,t,x,y' (t in seconds, x/y in pixels), header optional
  labels      CSV 't,x,y,p,label,distance' with a header line
  scene       key = value lines; each [shape] section starts a polygon
  config      key = value lines, '#' comments; see --print-config for keys
  eval CSV    one row per run, header written when the file is new
  JSON        one report object per file

Exit codes: 0 ok, 2 usage, 3 config, 4 file i/o, 5 malformed input,
6 stream contract violation, 1 other.)";

/// Options shared by every subcommand plus flags mapped onto config keys.
struct CommonOptions {
  std::string config_file;
  std::vector<std::string> sets;
  bool print_config = false;
  std::map<std::string, std::string> flag_values;  // config key -> flag value
};

void add_common(CLI::App* sub, CommonOptions& common) {
  sub->add_option("--config", common.config_file, "key = value config file");
  sub->add_option("--set", common.sets, "override one config key (key=value), repeatable");
  sub->add_flag("--print-config", common.print_config, "print the effective configuration and exit");
}

void bind(CLI::App* sub, CommonOptions& common, const std::string& flag, const std::string& key,
          const std::string& help) {
  sub->add_option_function<std::string>(
      flag, [&common, key](const std::string& v) { common.flag_values[key] = v; }, help + " [" + key + "]");
}

Config resolve(const CommonOptions& common) {
  Config cfg;
  if (!common.config_file.empty()) cfg.load_file(common.config_file);
  for (const auto& s : common.sets) cfg.assign(s);
  for (const auto& [key, value] : common.flag_values) cfg.set(key, value);
  return cfg;
}

/// Tracks the current stage so diagnostics can name it.
struct Stage {
  std::string name = "loading configuration";
};

std::vector<Event> load_events(Stage& stage, const std::string& path) {
  stage.name = "reading events from '" + path + "'";
  return read_events_file(path);
}

TrajectorySet load_tracks(Stage& stage, const std::string& path, Interpolation interpolation) {
  stage.name = "reading tracks from '" + path + "'";
  TrajectorySet tracks = read_tracks_file(path);
  tracks.set_interpolation(interpolation);
  return tracks;
}

std::ofstream open_output(Stage& stage, const std::string& path, std::ios::openmode mode = std::ios::trunc) {
  stage.name = "writing '" + path + "'";
  std::ofstream out(path, std::ios::binary | std::ios::out | mode);
  if (!out) throw IoError(path, "cannot open output file");
  return out;
}

std::string fmt(double v, int precision = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
  return buf;
}

std::string fmt(const std::optional<double>& v, int precision = 6) { return v ? fmt(*v, precision) : ""; }

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json config_json(const Config& cfg) {
  json j = json::object();
  for (const auto& key : cfg.keys()) j[key] = cfg.get(key);
  return j;
}

// ---------------------------------------------------------------------------

struct SynthArgs {
  std::string spec;
  std::string scene = "shapes";
  std::string out;
  std::string tracks;
};

int cmd_synth(const Config& cfg, const SynthArgs& a, Stage& stage, std::ostream& out) {
  const auto seed = cfg.seed();
  if (!seed) throw ConfigError("synth needs an explicit --seed");
  SceneSpec spec;
  if (!a.spec.empty()) {
    stage.name = "reading scene from '" + a.spec + "'";
    spec = read_scene_file(a.spec);
  } else {
    spec = a.scene == "boxes" ? boxes_like_scene() : shapes_like_scene();
  }
  stage.name = "generating scene";
  const SynthOutput scene = generate(spec, *seed);
  stage.name = "writing '" + a.out + "'";
  write_events_file(a.out, scene.events);
  stage.name = "writing '" + a.tracks + "'";
  write_tracks_file(a.tracks, scene.corner_tracks);
  out << "synth: events=" << scene.events.size() << " tracks=" << scene.corner_tracks.size() << " seed=" << *seed
      << '\n';
  return kExitOk;
}

struct StreamArgs {
  std::string in;
  std::string out;
  std::string raw_out;
};

int cmd_detect(const Config& cfg, const StreamArgs& a, bool with_anms, Stage& stage, std::ostream& out) {
  const PipelineConfig pc = cfg.pipeline(with_anms);
  const auto events = load_events(stage, a.in);
  stage.name = "running " + std::string(to_string(pc.detector)) + " on '" + a.in + "'";
  const PipelineOutput result = run_pipeline(events, pc);

  stage.name = "writing '" + a.out + "'";
  write_events_file(a.out, with_anms ? result.kept_events() : result.raw_events());
  if (!a.raw_out.empty()) {
    stage.name = "writing '" + a.raw_out + "'";
    write_events_file(a.raw_out, result.raw_events());
  }
  const std::size_t n = with_anms ? result.n_kept() : result.n_raw();
  out << (with_anms ? "filter" : "detect") << ": detector=" << to_string(pc.detector) << " events=" << events.size()
      << " skipped=" << result.n_skipped;
  if (with_anms) out << " raw_corners=" << result.n_raw();
  out << " corners=" << n << " reduction_rate=" << fmt(reduction_rate(n, events.size())) << '\n';
  return kExitOk;
}

struct LabelArgs {
  std::string events;
  std::string tracks;
  std::string out;
};

int cmd_label(const Config& cfg, const LabelArgs& a, Stage& stage, std::ostream& out) {
  const LabelThresholds thresholds = cfg.label_thresholds();
  const auto events = load_events(stage, a.events);
  const auto tracks = load_tracks(stage, a.tracks, cfg.interpolation());
  stage.name = "labelling";
  const auto labels = label_events(events, tracks, thresholds);

  auto file = open_output(stage, a.out);
  file << "t,x,y,p,label,distance\n";
  std::size_t counts[3] = {0, 0, 0};
  char buf[128];
  for (std::size_t i = 0; i < events.size(); ++i) {
    const Event& e = events[i];
    const LabeledEvent& l = labels[i];
    ++counts[static_cast<int>(l.label)];
    const std::string d = std::isinf(l.distance) ? "inf" : fmt(l.distance);
    std::snprintf(buf, sizeof(buf), "%lld.%06lld,%u,%u,%d,", static_cast<long long>(e.t / 1000000),
                  static_cast<long long>(e.t % 1000000), e.x, e.y, e.p == Polarity::kPositive ? 1 : 0);
    file << buf << to_string(l.label) << ',' << d << '\n';
  }
  if (!file) throw IoError(a.out, "write failed");
  out << "label: events=" << events.size() << " positive=" << counts[0] << " negative=" << counts[1]
      << " discarded=" << counts[2] << '\n';
  return kExitOk;
}

struct EvalArgs {
  std::string events;
  std::string tracks;
  std::string scene;
  bool anms = false;
  std::string csv;
  std::string json_path;
};

constexpr const char* kReportHeader = "scene,detector,anms,n_total,n_corner,reduction_rate,tp,fp,tn,fn,tpr,fpr,accuracy";

std::string report_row(const MetricsReport& r) {
  std::ostringstream s;
  s << r.scene << ',' << r.detector << ',' << (r.anms ? "with" : "without") << ',' << r.n_total << ','
    << r.n_corner << ',' << fmt(r.reduction_rate) << ',' << r.confusion.tp << ',' << r.confusion.fp << ','
    << r.confusion.tn << ',' << r.confusion.fn << ',' << fmt(r.tpr) << ',' << fmt(r.fpr) << ','
    << fmt(r.accuracy);
  return s.str();
}

json report_json(const MetricsReport& r) {
  return json{{"scene", r.scene},
              {"detector", r.detector},
              {"anms", r.anms},
              {"n_total", r.n_total},
              {"n_corner", r.n_corner},
              {"reduction_rate", opt_json(r.reduction_rate)},
              {"tp", r.confusion.tp},
              {"fp", r.confusion.fp},
              {"tn", r.confusion.tn},
              {"fn", r.confusion.fn},
              {"tpr", opt_json(r.tpr)},
              {"fpr", opt_json(r.fpr)},
              {"accuracy", opt_json(r.accuracy)}};
}

int cmd_eval(const Config& cfg, const EvalArgs& a, Stage& stage, std::ostream& out, std::ostream& err) {
  const PipelineConfig pc = cfg.pipeline(a.anms);
  const LabelThresholds thresholds = cfg.label_thresholds();
  const TimeWindow window = cfg.eval_window();
  const auto events = load_events(stage, a.events);
  const auto tracks = load_tracks(stage, a.tracks, cfg.interpolation());

  stage.name = "running " + std::string(to_string(pc.detector)) + " on '" + a.events + "'";
  const PipelineOutput result = run_pipeline(events, pc);
  stage.name = "labelling";
  const auto labeled = label_events(events, tracks, thresholds);

  const auto kept = result.kept_mask();
  std::vector<bool> kept_in;
  std::vector<EventLabel> labels_in;
  std::size_t n_total = 0;
  std::size_t n_corner = 0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (!window.contains(events[i].t)) continue;
    ++n_total;
    n_corner += kept[i] ? 1 : 0;
    kept_in.push_back(kept[i]);
    labels_in.push_back(labeled[i].label);
  }
  if (n_total == 0) err << "evnms eval: warning: no events inside the evaluation window\n";
  const std::string scene = a.scene.empty() ? fs::path(a.events).stem().string() : a.scene;
  const MetricsReport report = make_report(scene, std::string(to_string(pc.detector)), a.anms, n_total, n_corner,
                                           confusion(kept_in, labels_in));

  out << "scene      detector  anms     n_total   n_corner  reduction  tpr       fpr       accuracy\n";
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-10s %-9s %-8s %-9zu %-9zu %-10s %-9s %-9s %s\n", report.scene.c_str(),
                report.detector.c_str(), report.anms ? "with" : "without", report.n_total, report.n_corner,
                fmt(report.reduction_rate, 4).c_str(), fmt(report.tpr, 4).c_str(), fmt(report.fpr, 4).c_str(),
                fmt(report.accuracy, 4).c_str());
  out << buf;

  if (!a.csv.empty()) {
    const bool fresh = !fs::exists(a.csv) || fs::file_size(a.csv) == 0;
    auto file = open_output(stage, a.csv, std::ios::app);
    if (fresh) file << kReportHeader << '\n';
    file << report_row(report) << '\n';
  }
  if (!a.json_path.empty()) {
    auto file = open_output(stage, a.json_path);
    json j = report_json(report);
    j["config"] = config_json(cfg);
    file << j.dump(2) << '\n';
  }
  return kExitOk;
}

struct BenchArgs {
  std::string events;
  std::string json_path;
};

int cmd_bench(const Config& cfg, const BenchArgs& a, Stage& stage, std::ostream& out, std::ostream& err) {
  const PipelineConfig pc = cfg.pipeline(true);
  const BenchOptions options = cfg.bench_options();
  const auto events = load_events(stage, a.events);
  stage.name = "benchmarking " + std::string(to_string(pc.detector));
  const BenchResult r = bench(events, pc, options);
  if (r.low_confidence) {
    err << "evnms bench: warning: " << r.n_events << " events is below bench.min_events=" << options.min_events
        << "; results are low-confidence\n";
  }
  out << "detector  events     reps  without_ns(median/mean)  with_ns(median/mean)  increase\n";
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-9s %-10zu %-5d %9.1f / %-12.1f %9.1f / %-10.1f %+.2f%%\n",
                std::string(to_string(pc.detector)).c_str(), r.n_events, r.repetitions, r.without_anms.median_ns,
                r.without_anms.mean_ns, r.with_anms.median_ns, r.with_anms.mean_ns, 100.0 * r.increase_rate);
  out << buf;
  if (!a.json_path.empty()) {
    auto file = open_output(stage, a.json_path);
    json j{{"detector", to_string(pc.detector)},
           {"n_events", r.n_events},
           {"repetitions", r.repetitions},
           {"without_anms", {{"median_ns", r.without_anms.median_ns}, {"mean_ns", r.without_anms.mean_ns}}},
           {"with_anms", {{"median_ns", r.with_anms.median_ns}, {"mean_ns", r.with_anms.mean_ns}}},
           {"without_runs_ns", r.without_runs},
           {"with_runs_ns", r.with_runs},
           {"increase_rate", r.increase_rate},
           {"low_confidence", r.low_confidence}};
    file << j.dump(2) << '\n';
  }
  return kExitOk;
}

void print_diagnostic(std::ostream& err, const std::string& command, const Stage& stage, const char* kind,
                      const std::exception& e) {
  err << "evnms " << command << ": " << kind << " while " << stage.name << ": " << e.what() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Event-camera corner detection with asynchronous non-maximum suppression", "evnms"};
  app.footer(kFormats);
  app.require_subcommand(1);

  CommonOptions common;
  SynthArgs synth;
  StreamArgs detect;
  StreamArgs filter;
  LabelArgs label;
  EvalArgs eval;
  BenchArgs benchmark;

  auto* s = app.add_subcommand("synth", "generate a synthetic scene with exact corner tracks");
  add_common(s, common);
  s->add_option("--spec", synth.spec, "scene description file (default: built-in scene)");
  s->add_option("--scene", synth.scene, "built-in scene when --spec is absent")->check(CLI::IsMember({"shapes", "boxes"}));
  bind(s, common, "--seed", "seed", "random seed (required)");
  s->add_option("--out", synth.out, "events output")->required();
  s->add_option("--tracks", synth.tracks, "corner tracks CSV output")->required();

  auto* d = app.add_subcommand("detect", "run a corner detector, write accepted events");
  add_common(d, common);
  bind(d, common, "--detector", "detector", "evharris|evfast|arcfast");
  bind(d, common, "--threshold", "evharris.threshold", "evHarris response threshold");
  d->add_option("--in", detect.in, "events input")->required();
  d->add_option("--out", detect.out, "corner events output")->required();

  auto* f = app.add_subcommand("filter", "run a detector followed by non-maximum suppression");
  add_common(f, common);
  bind(f, common, "--detector", "detector", "evharris|evfast|arcfast");
  bind(f, common, "--threshold", "evharris.threshold", "evHarris response threshold");
  bind(f, common, "--k", "anms.k", "decay multiplier");
  bind(f, common, "--tau-fallback", "anms.tau_fallback", "time constant (s) when the window is empty");
  bind(f, common, "--window-radius", "anms.window_radius", "suppression window radius (px)");
  bind(f, common, "--tau-neighbors", "anms.tau_neighbors", "timestamps averaged for tau");
  bind(f, common, "--sae-policy", "anms.sae_policy", "all|corners");
  f->add_option("--in", filter.in, "events input")->required();
  f->add_option("--out", filter.out, "kept corner events output")->required();
  f->add_option("--raw-out", filter.raw_out, "detector output before suppression");

  auto* l = app.add_subcommand("label", "label events by distance to corner tracks");
  add_common(l, common);
  bind(l, common, "--interpolation", "gt.interpolation", "linear|cubic");
  l->add_option("--events", label.events, "events input")->required();
  l->add_option("--tracks", label.tracks, "tracks CSV input")->required();
  l->add_option("--out", label.out, "labels CSV output")->required();

  auto* e = app.add_subcommand("eval", "reduction rate and classification metrics for one run");
  add_common(e, common);
  bind(e, common, "--detector", "detector", "evharris|evfast|arcfast");
  bind(e, common, "--threshold", "evharris.threshold", "evHarris response threshold");
  bind(e, common, "--window", "eval.window", "frames|all");
  bind(e, common, "--interpolation", "gt.interpolation", "linear|cubic");
  e->add_option("--events", eval.events, "events input")->required();
  e->add_option("--tracks", eval.tracks, "tracks CSV input")->required();
  e->add_flag("--anms", eval.anms, "enable non-maximum suppression");
  e->add_option("--scene", eval.scene, "scene name in reports (default: events file stem)");
  e->add_option("--csv", eval.csv, "append a report row to this CSV");
  e->add_option("--json", eval.json_path, "write the report as JSON");

  auto* b = app.add_subcommand("bench", "per-event processing time with and without suppression");
  add_common(b, common);
  bind(b, common, "--detector", "detector", "evharris|evfast|arcfast");
  bind(b, common, "--repetitions", "bench.repetitions", "timed repetitions per variant");
  bind(b, common, "--min-events", "bench.min_events", "below this the result is flagged low-confidence");
  b->add_option("--events", benchmark.events, "events input")->required();
  b->add_option("--json", benchmark.json_path, "write the timings as JSON");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& pe) {
    const int code = app.exit(pe, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  Stage stage;
  try {
    const Config cfg = resolve(common);
    if (common.print_config) {
      cfg.dump(out);
      return kExitOk;
    }
    if (command == "synth") return cmd_synth(cfg, synth, stage, out);
    if (command == "detect") return cmd_detect(cfg, detect, false, stage, out);
    if (command == "filter") return cmd_detect(cfg, filter, true, stage, out);
    if (command == "label") return cmd_label(cfg, label, stage, out);
    if (command == "eval") return cmd_eval(cfg, eval, stage, out, err);
    return cmd_bench(cfg, benchmark, stage, out, err);
  } catch (const ConfigError& ex) {
    print_diagnostic(err, command, stage, "config error", ex);
    return kExitConfig;
  } catch (const IoError& ex) {
    print_diagnostic(err, command, stage, "i/o error", ex);
    return kExitIo;
  } catch (const ParseError& ex) {
    print_diagnostic(err, command, stage, "malformed input", ex);
    return kExitParse;
  } catch (const StreamError& ex) {
    print_diagnostic(err, command, stage, "stream error", ex);
    return kExitStream;
  } catch (const std::exception& ex) {
    print_diagnostic(err, command, stage, "error", ex);
    return kExitFailure;
  }
}

}  // namespace evnms::cli
