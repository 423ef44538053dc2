#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "flowsep/camera_model.hpp"
#include "flowsep/event_fusion.hpp"
#include "flowsep/motion_descriptor.hpp"

namespace flowsep {

/// Camera model active for frames [begin, end).
struct CameraSegment {
  GlobalMotionModel model;
  int begin = 0;
  int end = 0;
};

/// Rigid disk moving with a constant per-frame velocity. When turn_at >= 0 the
/// velocity switches to `turn_velocity` from that frame on.
struct Actor {
  double x0 = 0.0;
  double y0 = 0.0;
  double radius = 4.0;
  double vx = 0.0;
  double vy = 0.0;
  int turn_at = -1;
  FlowVector turn_velocity;

  FlowVector velocity(int frame) const {
    return (turn_at >= 0 && frame >= turn_at) ? turn_velocity : FlowVector{vx, vy};
  }
};

struct SynthClipSpec {
  int width = 112;
  int height = 112;
  int frames = 16;
  std::vector<CameraSegment> camera_script;  // must partition [0, frames)
  std::vector<Actor> actors;
  int activity_label = 0;
  std::optional<Outcome> sf_label;
  double noise_sigma = 0.0;  // px, mixed stream only
  std::uint64_t seed = 0;
  // Keep every actor at least one pixel away from the frame border, so the
  // edge lines carry camera motion only.
  bool clean_edges = true;

  void validate() const;
};

struct SynthClip {
  ClipStream global;
  ClipStream local;
  ClipStream mixed;
  std::vector<double> scores;  // per-frame success responses in [0, 1]
  int activity_label;
  std::optional<Outcome> sf_label;
};

/// Scores: baseline in [0.02, 0.3]; a success clip gets one frame in its last
/// six raised into [0.8, 0.98].
SynthClip generate_clip(const SynthClipSpec& spec);

/// Disk center of `actor` at `frame`, before edge clamping.
FlowVector actor_center(const Actor& actor, int frame);

struct DatasetOptions {
  int width = 112;
  int height = 112;
  int frames = 16;
  double noise_sigma = 0.2;
};

/// Builds a randomized clip spec for one activity; geometry, speeds and
/// actor placement are drawn from the generator.
using MotifTemplate = std::function<SynthClipSpec(std::mt19937_64& rng, const DatasetOptions& options)>;

/// Templates indexed by activity:
///   3-point     pan, then zoom in; two actors converging on the basket
///   free-throw  near-static camera; lane actors drifting sideways
///   layup       steady pan; the same lane actors as free-throw
///   2-point     the 3-point camera; a dense converging cluster
///   slam dunk   fast zoom in; one fast actor
///   steal       pan that reverses mid-clip together with the actors
/// 3-point / 2-point differ only locally, free-throw / layup only globally.
std::array<MotifTemplate, kActivityClasses> default_motifs();

struct SynthDataset {
  std::vector<SynthClip> clips;
};

/// Spec of clip `index` (0-based within its class) of a generated dataset.
/// Non-steal clips alternate success / failure starting with success; steal
/// clips carry no outcome. Specs depend only on (activity, index, seed).
SynthClipSpec dataset_clip_spec(int activity, int index, const std::array<MotifTemplate, kActivityClasses>& motifs,
                                std::uint64_t seed, const DatasetOptions& options = {});

/// per_class clips for every activity, ordered class-major. Holds every
/// frame in memory; large datasets should walk dataset_clip_spec instead.
SynthDataset generate_dataset(int per_class, const std::array<MotifTemplate, kActivityClasses>& motifs,
                              std::uint64_t seed, const DatasetOptions& options = {});

}  // namespace flowsep
