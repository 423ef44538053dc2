#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <optional>

#include <CLI11.hpp>

#include "flowsep/camera_model.hpp"
#include "flowsep/color_code.hpp"
#include "flowsep/event_fusion.hpp"
#include "flowsep/flow_io.hpp"
#include "flowsep/manifest.hpp"
#include "flowsep/metrics.hpp"
#include "flowsep/pipeline.hpp"
#include "flowsep/synth.hpp"

namespace fs = std::filesystem;

namespace flowsep::cli {

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

struct SeparateArgs {
  std::vector<std::string> inputs;
  double theta = kDefaultLocalThreshold;
  std::string out_dir;
  bool viz = false;
};

struct VisualizeArgs {
  std::string input;
  std::optional<double> max_mag;
  std::string out;
};

struct FitArgs {
  std::string input;
  CameraMotionTolerances tol;
};

struct SynthArgs {
  int per_class = 10;
  std::uint64_t seed = 0;
  std::string out_dir;
  DatasetOptions options;
};

struct TrainArgs {
  std::string manifest;
  std::string stream = "two";
  std::uint64_t seed = 0;
  std::string out;
  TrainConfig train;
  DescriptorConfig descriptor;
  double theta = kDefaultLocalThreshold;
};

struct EvalArgs {
  std::string manifest;
  std::string model;
  double fuse_ratio = 1.0;
  double theta = kDefaultLocalThreshold;
  double sf_threshold = 0.7;
};

int cmd_separate(const SeparateArgs& a, std::ostream& out) {
  for (const std::string& input : a.inputs) {
    const fs::path in(input);
    const FlowField mixed = read_flow_file(in);
    const SeparationResult r = separate(mixed, a.theta);
    const fs::path dir = a.out_dir.empty() ? in.parent_path() : fs::path(a.out_dir);
    if (!dir.empty()) fs::create_directories(dir);
    const std::string stem = in.stem().string();
    write_flow_file(r.global, dir / (stem + ".global.flo"));
    write_flow_file(r.local, dir / (stem + ".local.flo"));
    if (a.viz) {
      // One scale for all three images so colors are comparable.
      double scale = flow_stats(mixed).max_magnitude;
      if (scale == 0.0) scale = 1.0;
      write_ppm_file(color_code(mixed, scale), dir / (stem + ".mixed.ppm"));
      write_ppm_file(color_code(r.global, scale), dir / (stem + ".global.ppm"));
      write_ppm_file(color_code(r.local, scale), dir / (stem + ".local.ppm"));
    }
    out << stem << ": corners x_left=" << fmt("%.6g", r.corners.x_left) << " x_right=" << fmt("%.6g", r.corners.x_right)
        << " y_top=" << fmt("%.6g", r.corners.y_top) << " y_bottom=" << fmt("%.6g", r.corners.y_bottom)
        << " local_fraction=" << fmt("%.4f", flow_stats(r.local).fraction_above(0.0)) << "\n";
  }
  return kExitOk;
}

int cmd_visualize(const VisualizeArgs& a, std::ostream& out) {
  const fs::path in(a.input);
  const FlowField field = read_flow_file(in);
  const fs::path target = a.out.empty() ? fs::path(in).replace_extension(".ppm") : fs::path(a.out);
  write_ppm_file(color_code(field, a.max_mag), target);
  out << "wrote " << target.string() << "\n";
  return kExitOk;
}

int cmd_fit(const FitArgs& a, std::ostream& out) {
  const FlowField field = read_flow_file(a.input);
  const GlobalMotionModel m = fit_model(field);
  out << "[" << fmt("%.10g", m.m0()) << ", " << fmt("%.10g", m.m1()) << ", " << fmt("%.10g", m.m2()) << ", "
      << fmt("%.10g", m.m3()) << "]\n";
  out << "label " << to_string(classify_camera_motion(m, field.width(), field.height(), a.tol)) << "\n";
  return kExitOk;
}

int cmd_synth(const SynthArgs& a, std::ostream& out) {
  const auto motifs = default_motifs();
  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  std::vector<ManifestEntry> entries;
  std::size_t index = 0;
  for (int activity = 0; activity < kActivityClasses; ++activity) {
    for (int i = 0; i < a.per_class; ++i, ++index) {
      // One clip at a time keeps memory flat for large datasets.
      const SynthClip clip = generate_clip(dataset_clip_spec(activity, i, motifs, a.seed, a.options));
      char id[32];
      std::snprintf(id, sizeof id, "clip_%04zu", index);
      entries.push_back(write_clip(clip, dir / id, id));
    }
  }
  const fs::path manifest = dir / "manifest.jsonl";
  save_manifest(entries, manifest);
  out << "wrote " << entries.size() << " clips, manifest " << manifest.string() << "\n";
  return kExitOk;
}

std::vector<ClipDescriptors> describe_manifest(const std::vector<ManifestEntry>& entries,
                                               const DescriptorConfig& config, double theta) {
  std::vector<ClipDescriptors> out;
  out.reserve(entries.size());
  for (const ManifestEntry& e : entries) {
    out.push_back(describe_clip(ClipStream(StreamKind::Mixed, load_frames(e.frames)), config, theta));
  }
  return out;
}

int cmd_train(const TrainArgs& a, std::ostream& out) {
  std::vector<StreamKind> streams;
  if (a.stream == "two") {
    streams = {StreamKind::Global, StreamKind::Local};
  } else {
    streams = {*parse_stream_kind(a.stream)};
  }
  a.descriptor.validate();
  const auto entries = load_manifest(a.manifest);
  const auto descriptors = describe_manifest(entries, a.descriptor, a.theta);
  std::vector<int> labels;
  for (const auto& e : entries) labels.push_back(e.activity);

  TrainConfig config = a.train;
  config.seed = a.seed;
  const ModelBundle bundle = train_bundle(descriptors, labels, streams, a.descriptor, config);
  save_model(bundle, a.out);

  for (const StreamClassifier& s : bundle.streams) {
    std::vector<LabeledFeatures> data;
    for (std::size_t i = 0; i < descriptors.size(); ++i) data.push_back({descriptors[i].of(s.stream).values, labels[i]});
    out << to_string(s.stream) << " training loss " << fmt("%.6f", mean_cross_entropy(s.model, data)) << "\n";
  }
  out << "wrote " << a.out << "\n";
  return kExitOk;
}

std::vector<std::string> activity_names() { return {kActivityNames.begin(), kActivityNames.end()}; }

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  const ModelBundle bundle = load_model(a.model);
  const auto entries = load_manifest(a.manifest);
  std::vector<int> truth, predicted;
  for (const ManifestEntry& e : entries) {
    const auto d = describe_clip(ClipStream(StreamKind::Mixed, load_frames(e.frames)), bundle.descriptor, a.theta);
    truth.push_back(e.activity);
    predicted.push_back(static_cast<int>(predict_activity(bundle, d, a.fuse_ratio).argmax()));
  }
  const ConfusionMatrix cm = confusion(truth, predicted, kActivityClasses);
  out << "clips " << entries.size() << "\n";
  out << "accuracy " << fmt("%.4f", accuracy(cm)) << "\n";
  out << "map " << fmt("%.4f", mean_average_precision(cm)) << "\n";
  const auto names = activity_names();
  out << format_confusion(cm, names);
  return kExitOk;
}

int cmd_sweep(const std::string& manifest, std::ostream& out) {
  std::vector<ScoredClip> clips;
  for (const ManifestEntry& e : load_manifest(manifest)) {
    if (e.scores && e.sf) clips.push_back({*e.scores, *e.sf});
  }
  if (clips.empty()) throw Error(Errc::EmptyDataset, manifest + " has no clips with both scores and an sf label");
  out << format_sweep_table(threshold_sweep(clips));
  return kExitOk;
}

int cmd_events(const EvalArgs& a, std::ostream& out) {
  const ModelBundle bundle = load_model(a.model);
  const auto entries = load_manifest(a.manifest);
  std::vector<int> truth, predicted;
  for (const ManifestEntry& e : entries) {
    if (!e.scores) throw Error(Errc::InvalidArgument, "clip " + e.id + " has no frame scores");
    if (e.activity != kStealActivity && !e.sf) {
      throw Error(Errc::InvalidArgument, "clip " + e.id + " needs an sf label");
    }
    const auto d = describe_clip(ClipStream(StreamKind::Mixed, load_frames(e.frames)), bundle.descriptor, a.theta);
    const EventVector activity = binarize(predict_activity(bundle, d, a.fuse_ratio), EventKind::Activity6);
    const EventVector sf = clip_success(*e.scores, a.sf_threshold);
    const EventVector event = merge_steal(kronecker_fuse(activity, sf));
    predicted.push_back(static_cast<int>(event.hot_index()));
    truth.push_back(static_cast<int>(event11_index(e.activity, e.sf.value_or(Outcome::Failure))));
  }
  const ConfusionMatrix cm = confusion(truth, predicted, 11);
  out << "clips " << entries.size() << "\n";
  out << "accuracy " << fmt("%.4f", accuracy(cm)) << "\n";
  out << "map " << fmt("%.4f", mean_average_precision(cm)) << "\n";
  std::vector<std::string> names;
  for (std::size_t i = 0; i < 11; ++i) names.push_back(event_name(i));
  out << format_confusion(cm, names);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"flowsep: global/local motion separation and motion-pattern event recognition"};
  app.name("flowsep");
  app.require_subcommand(1);

  SeparateArgs separate_args;
  auto* separate_cmd = app.add_subcommand("separate", "Split mixed flow into global and local fields");
  separate_cmd->add_option("inputs", separate_args.inputs, "Input .flo files")->required();
  separate_cmd->add_option("--theta", separate_args.theta, "Local motion threshold in pixels")
      ->check(CLI::NonNegativeNumber);
  separate_cmd->add_option("--out-dir", separate_args.out_dir, "Output directory (default: next to input)");
  separate_cmd->add_flag("--viz", separate_args.viz, "Also write PPM color-coded images");

  VisualizeArgs visualize_args;
  auto* visualize_cmd = app.add_subcommand("visualize", "Render a .flo file as a color-coded PPM");
  visualize_cmd->add_option("input", visualize_args.input, "Input .flo file")->required();
  visualize_cmd->add_option("--max-mag", visualize_args.max_mag, "Magnitude mapped to full saturation")
      ->check(CLI::PositiveNumber);
  visualize_cmd->add_option("--out", visualize_args.out, "Output .ppm (default: input with .ppm extension)");

  FitArgs fit_args;
  auto* fit_cmd = app.add_subcommand("fit", "Fit the camera model to a .flo file and label it");
  fit_cmd->add_option("input", fit_args.input, "Input .flo file")->required();
  fit_cmd->add_option("--translation-tol", fit_args.tol.translation, "Static/pan tolerance in pixels")
      ->check(CLI::PositiveNumber);
  fit_cmd->add_option("--scale-tol", fit_args.tol.scale, "Scale tolerance")->check(CLI::PositiveNumber);

  SynthArgs synth_args;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a labeled synthetic dataset");
  synth_cmd->add_option("--per-class", synth_args.per_class, "Clips per activity")->required()->check(CLI::PositiveNumber);
  synth_cmd->add_option("--seed", synth_args.seed, "Random seed");
  synth_cmd->add_option("--out-dir", synth_args.out_dir, "Output directory")->required();
  synth_cmd->add_option("--width", synth_args.options.width, "Frame width")->check(CLI::Range(2, 4096));
  synth_cmd->add_option("--height", synth_args.options.height, "Frame height")->check(CLI::Range(2, 4096));
  synth_cmd->add_option("--frames", synth_args.options.frames, "Frames per clip")->check(CLI::Range(1, 1024));
  synth_cmd->add_option("--noise", synth_args.options.noise_sigma, "Mixed-stream noise sigma in pixels")
      ->check(CLI::NonNegativeNumber);

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "Train activity classifiers from a manifest");
  train_cmd->add_option("--manifest", train_args.manifest, "Clip manifest")->required();
  train_cmd->add_option("--stream", train_args.stream, "global, local, mixed or two")
      ->check(CLI::IsMember({"global", "local", "mixed", "two"}));
  train_cmd->add_option("--seed", train_args.seed, "Random seed");
  train_cmd->add_option("--out", train_args.out, "Output model file")->required();
  train_cmd->add_option("--lr", train_args.train.learning_rate, "Learning rate")->check(CLI::PositiveNumber);
  train_cmd->add_option("--epochs", train_args.train.epochs, "Training epochs")->check(CLI::PositiveNumber);
  train_cmd->add_option("--theta", train_args.theta, "Local motion threshold in pixels")
      ->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--grid", train_args.descriptor.grid, "Spatial cells per side")->check(CLI::PositiveNumber);
  train_cmd->add_option("--segments", train_args.descriptor.segments, "Temporal segments")
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--bins", train_args.descriptor.bins, "Direction bins")->check(CLI::PositiveNumber);

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate 6-class activity recognition");
  eval_cmd->add_option("--manifest", eval_args.manifest, "Clip manifest")->required();
  eval_cmd->add_option("--model", eval_args.model, "Model file")->required();
  eval_cmd->add_option("--fuse-ratio", eval_args.fuse_ratio, "Global:local fusion weight ratio")
      ->check(CLI::PositiveNumber);
  eval_cmd->add_option("--theta", eval_args.theta, "Local motion threshold in pixels")->check(CLI::NonNegativeNumber);

  std::string sweep_manifest;
  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep the frame success threshold over 0.50..1.00");
  sweep_cmd->add_option("--manifest", sweep_manifest, "Clip manifest with scores")
      ->required();

  EvalArgs events_args;
  auto* events_cmd = app.add_subcommand("events", "Full pipeline: 11-class semantic event recognition");
  events_cmd->add_option("--manifest", events_args.manifest, "Clip manifest with scores")
      ->required();
  events_cmd->add_option("--model", events_args.model, "Model file")->required();
  events_cmd->add_option("--sf-threshold", events_args.sf_threshold, "Frame success threshold")
      ->check(CLI::Range(0.0, 1.0));
  events_cmd->add_option("--fuse-ratio", events_args.fuse_ratio, "Global:local fusion weight ratio")
      ->check(CLI::PositiveNumber);
  events_cmd->add_option("--theta", events_args.theta, "Local motion threshold in pixels")
      ->check(CLI::NonNegativeNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "flowsep: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*separate_cmd) return cmd_separate(separate_args, out);
    if (*visualize_cmd) return cmd_visualize(visualize_args, out);
    if (*fit_cmd) return cmd_fit(fit_args, out);
    if (*synth_cmd) return cmd_synth(synth_args, out);
    if (*train_cmd) return cmd_train(train_args, out);
    if (*eval_cmd) return cmd_eval(eval_args, out);
    if (*sweep_cmd) return cmd_sweep(sweep_manifest, out);
    if (*events_cmd) return cmd_events(events_args, out);
  } catch (const Error& e) {
    err << "flowsep: error: " << e.what() << "\n";
    return kExitDataError;
  } catch (const fs::filesystem_error& e) {
    err << "flowsep: error: " << e.what() << "\n";
    return kExitDataError;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace flowsep::cli
