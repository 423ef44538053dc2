#include "flowsep/pipeline.hpp"

namespace flowsep {

SeparatedClip separate_clip(const ClipStream& mixed, double threshold) {
  std::vector<FlowField> global, local;
  global.reserve(mixed.length());
  local.reserve(mixed.length());
  for (const FlowField& frame : mixed.frames()) {
    SeparationResult r = separate(frame, threshold);
    global.push_back(std::move(r.global));
    local.push_back(std::move(r.local));
  }
  return {ClipStream(StreamKind::Global, std::move(global)), ClipStream(StreamKind::Local, std::move(local))};
}

const MotionDescriptor& ClipDescriptors::of(StreamKind kind) const {
  switch (kind) {
    case StreamKind::Global: return global;
    case StreamKind::Local: return local;
    case StreamKind::Mixed: return mixed;
  }
  return mixed;
}

ClipDescriptors describe_clip(const ClipStream& mixed, const DescriptorConfig& config, double threshold) {
  const SeparatedClip parts = separate_clip(mixed, threshold);
  return {compute_descriptor(parts.global, config), compute_descriptor(parts.local, config),
          compute_descriptor(mixed, config)};
}

ProbVector predict_activity(const ModelBundle& bundle, const ClipDescriptors& descriptors, double weight_ratio) {
  const StreamClassifier* global = bundle.find(StreamKind::Global);
  const StreamClassifier* local = bundle.find(StreamKind::Local);
  if (global && local) {
    return fuse_streams(predict(global->model, descriptors.global), predict(local->model, descriptors.local),
                        weight_ratio);
  }
  if (bundle.streams.size() != 1) throw Error(Errc::InvalidArgument, "model bundle has no usable stream layout");
  const StreamClassifier& only = bundle.streams.front();
  return predict(only.model, descriptors.of(only.stream));
}

ModelBundle train_bundle(std::span<const ClipDescriptors> clips, std::span<const int> labels,
                         std::span<const StreamKind> streams, const DescriptorConfig& config,
                         const TrainConfig& train_config) {
  if (clips.size() != labels.size()) throw Error(Errc::LengthMismatch, "clips and labels differ in count");
  if (clips.empty()) throw Error(Errc::EmptyDataset, "no training clips");
  ModelBundle bundle{config, {}};
  for (StreamKind kind : streams) {
    std::vector<LabeledFeatures> data;
    data.reserve(clips.size());
    for (std::size_t i = 0; i < clips.size(); ++i) data.push_back({clips[i].of(kind).values, labels[i]});
    bundle.streams.push_back({kind, train_softmax(data, kActivityClasses, train_config).model});
  }
  return bundle;
}

}  // namespace flowsep
