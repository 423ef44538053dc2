#pragma once

#include <span>
#include <vector>

#include "flowsep/classifier.hpp"
#include "flowsep/motion_descriptor.hpp"
#include "flowsep/separation.hpp"

namespace flowsep {

struct SeparatedClip {
  ClipStream global;
  ClipStream local;
};

/// Runs separate() on every frame of a mixed clip.
SeparatedClip separate_clip(const ClipStream& mixed, double threshold = kDefaultLocalThreshold);

struct ClipDescriptors {
  MotionDescriptor global;
  MotionDescriptor local;
  MotionDescriptor mixed;

  const MotionDescriptor& of(StreamKind kind) const;
};

ClipDescriptors describe_clip(const ClipStream& mixed, const DescriptorConfig& config,
                              double threshold = kDefaultLocalThreshold);

/// Activity probabilities from a model bundle: single-stream bundles use
/// their one classifier, global+local bundles fuse with weight_ratio.
ProbVector predict_activity(const ModelBundle& bundle, const ClipDescriptors& descriptors, double weight_ratio = 1.0);

/// Trains a bundle over the requested streams (one kind, or global + local).
ModelBundle train_bundle(std::span<const ClipDescriptors> clips, std::span<const int> labels,
                         std::span<const StreamKind> streams, const DescriptorConfig& config,
                         const TrainConfig& train_config);

}  // namespace flowsep
