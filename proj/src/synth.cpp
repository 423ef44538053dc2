#include "flowsep/synth.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace flowsep {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double uniform(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

double random_sign(std::mt19937_64& rng) { return std::bernoulli_distribution(0.5)(rng) ? 1.0 : -1.0; }

const GlobalMotionModel& model_at(const SynthClipSpec& spec, int frame) {
  for (const CameraSegment& s : spec.camera_script) {
    if (frame >= s.begin && frame < s.end) return s.model;
  }
  throw Error(Errc::InvalidSpec, "no camera segment covers frame " + std::to_string(frame));
}

void paint_disk(std::vector<FlowVector>& data, int width, int height, FlowVector center, double radius,
                FlowVector velocity) {
  const int x_lo = std::max(0, static_cast<int>(std::ceil(center.dx - radius)));
  const int x_hi = std::min(width - 1, static_cast<int>(std::floor(center.dx + radius)));
  const int y_lo = std::max(0, static_cast<int>(std::ceil(center.dy - radius)));
  const int y_hi = std::min(height - 1, static_cast<int>(std::floor(center.dy + radius)));
  const double r2 = radius * radius;
  for (int y = y_lo; y <= y_hi; ++y) {
    for (int x = x_lo; x <= x_hi; ++x) {
      const double ex = x - center.dx;
      const double ey = y - center.dy;
      if (ex * ex + ey * ey <= r2) {
        data[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)] = velocity;
      }
    }
  }
}

// Actor whose path over `frames` frames heads from a random start toward
// `target` at `speed` px/frame.
Actor converging_actor(std::mt19937_64& rng, const DatasetOptions& o, FlowVector target, double speed,
                       double radius) {
  Actor a;
  a.radius = radius;
  a.x0 = uniform(rng, 0.15, 0.85) * (o.width - 1);
  a.y0 = uniform(rng, 0.15, 0.85) * (o.height - 1);
  const double ex = target.dx - a.x0;
  const double ey = target.dy - a.y0;
  const double len = std::hypot(ex, ey);
  if (len < 1e-9) {
    a.vx = speed;
  } else {
    a.vx = speed * ex / len;
    a.vy = speed * ey / len;
  }
  return a;
}

std::vector<Actor> lane_actors(std::mt19937_64& rng, const DatasetOptions& o) {
  std::vector<Actor> actors;
  const int count = std::uniform_int_distribution<int>(3, 4)(rng);
  for (int i = 0; i < count; ++i) {
    Actor a;
    a.radius = uniform(rng, 0.05, 0.07) * o.width;
    a.x0 = uniform(rng, 0.2, 0.8) * (o.width - 1);
    a.y0 = uniform(rng, 0.25, 0.75) * (o.height - 1);
    a.vx = random_sign(rng) * uniform(rng, 2.5, 3.5);
    a.vy = uniform(rng, -0.5, 0.5);
    actors.push_back(a);
  }
  return actors;
}

SynthClipSpec base_spec(std::mt19937_64& rng, const DatasetOptions& o, int activity) {
  SynthClipSpec s;
  s.width = o.width;
  s.height = o.height;
  s.frames = o.frames;
  s.activity_label = activity;
  s.noise_sigma = o.noise_sigma;
  s.seed = rng();
  return s;
}

struct PanThenZoom {
  std::vector<CameraSegment> script;
  int split;
  double pan_sign;
  FlowVector zoom_center;
};

// Translation for the first half of the clip, then a zoom in about a point
// near the frame center.
PanThenZoom pan_then_zoom(std::mt19937_64& rng, const DatasetOptions& o) {
  const int split = std::clamp(o.frames / 2, 1, std::max(1, o.frames - 1));
  const double tx = random_sign(rng) * uniform(rng, 3.0, 5.0);
  const double ty = uniform(rng, -0.5, 0.5);
  const double scale = uniform(rng, 1.03, 1.05);
  const FlowVector c{uniform(rng, 0.45, 0.55) * (o.width - 1), uniform(rng, 0.45, 0.55) * (o.height - 1)};
  if (o.frames < 2) return {{{GlobalMotionModel::translation(tx, ty), 0, o.frames}}, o.frames, tx > 0 ? 1.0 : -1.0, c};
  return {{{GlobalMotionModel::translation(tx, ty), 0, split},
           {GlobalMotionModel::zoom_about(scale, c.dx, c.dy), split, o.frames}},
          split,
          tx > 0 ? 1.0 : -1.0,
          c};
}

// Players run with the camera: along the pan while it translates, then
// radially away from the zoom center once it zooms. Their flow is parallel
// to the camera flow, so only its magnitude differs from the background.
SynthClipSpec three_point(std::mt19937_64& rng, const DatasetOptions& o, int activity, int actor_count) {
  SynthClipSpec s = base_spec(rng, o, activity);
  const PanThenZoom cam = pan_then_zoom(rng, o);
  s.camera_script = cam.script;
  for (int i = 0; i < actor_count; ++i) {
    Actor a;
    a.radius = uniform(rng, 0.045, 0.06) * o.width;
    a.x0 = uniform(rng, 0.2, 0.8) * (o.width - 1);
    a.y0 = uniform(rng, 0.2, 0.8) * (o.height - 1);
    const double speed = uniform(rng, 2.0, 3.0);
    a.vx = cam.pan_sign * speed;
    a.turn_at = cam.split;
    const FlowVector at_split = actor_center(a, cam.split);
    const FlowVector out = at_split - cam.zoom_center;
    const double len = std::hypot(out.dx, out.dy);
    a.turn_velocity = len < 1e-9 ? FlowVector{speed, 0.0} : FlowVector{speed * out.dx / len, speed * out.dy / len};
    s.actors.push_back(a);
  }
  return s;
}

}  // namespace

void SynthClipSpec::validate() const {
  if (width < 2 || height < 2) throw Error(Errc::InvalidSpec, "synthetic clips need at least 2x2 frames");
  if (frames < 1) throw Error(Errc::InvalidSpec, "synthetic clips need at least one frame");
  if (camera_script.empty()) throw Error(Errc::InvalidSpec, "camera script is empty");
  int expected = 0;
  for (const CameraSegment& s : camera_script) {
    if (s.begin != expected || s.end <= s.begin) {
      throw Error(Errc::InvalidSpec, "camera segments must partition [0, frames) in order");
    }
    expected = s.end;
  }
  if (expected != frames) throw Error(Errc::InvalidSpec, "camera segments must end at the last frame");
  if (activity_label < 0 || activity_label >= kActivityClasses) {
    throw Error(Errc::InvalidSpec, "activity label " + std::to_string(activity_label) + " out of range");
  }
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) throw Error(Errc::InvalidSpec, "noise sigma must be >= 0");
  for (const Actor& a : actors) {
    if (!(a.radius > 0.0) || !std::isfinite(a.x0) || !std::isfinite(a.y0) || !std::isfinite(a.vx) ||
        !std::isfinite(a.vy) || !std::isfinite(a.turn_velocity.dx) || !std::isfinite(a.turn_velocity.dy)) {
      throw Error(Errc::InvalidSpec, "actor parameters must be finite with a positive radius");
    }
    if (clean_edges && (1.0 + a.radius > width - 2 - a.radius || 1.0 + a.radius > height - 2 - a.radius)) {
      throw Error(Errc::InvalidSpec, "actor radius too large to keep clear of the frame edges");
    }
  }
}

FlowVector actor_center(const Actor& actor, int frame) {
  FlowVector c{actor.x0, actor.y0};
  for (int t = 0; t < frame; ++t) c = c + actor.velocity(t);
  return c;
}

SynthClip generate_clip(const SynthClipSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> noise(0.0, spec.noise_sigma > 0.0 ? spec.noise_sigma : 1.0);

  std::vector<FlowField> global, local, mixed;
  for (int t = 0; t < spec.frames; ++t) {
    FlowField g = displacement_field(model_at(spec, t), spec.width, spec.height);

    std::vector<FlowVector> l(g.size());
    for (const Actor& a : spec.actors) {
      FlowVector c = actor_center(a, t);
      if (spec.clean_edges) {
        c.dx = std::clamp(c.dx, 1.0 + a.radius, spec.width - 2 - a.radius);
        c.dy = std::clamp(c.dy, 1.0 + a.radius, spec.height - 2 - a.radius);
      }
      paint_disk(l, spec.width, spec.height, c, a.radius, a.velocity(t));
    }

    std::vector<FlowVector> m(g.size());
    auto gp = g.pixels();
    for (std::size_t i = 0; i < m.size(); ++i) {
      m[i] = gp[i] + l[i];
      if (spec.noise_sigma > 0.0) {
        m[i].dx += noise(rng);
        m[i].dy += noise(rng);
      }
    }
    local.emplace_back(spec.width, spec.height, std::move(l));
    mixed.emplace_back(spec.width, spec.height, std::move(m));
    global.push_back(std::move(g));
  }

  std::vector<double> scores(static_cast<std::size_t>(spec.frames));
  for (double& s : scores) s = uniform(rng, 0.02, 0.3);
  if (spec.sf_label == Outcome::Success) {
    const int window = std::min(6, spec.frames);
    const int frame = spec.frames - 1 - std::uniform_int_distribution<int>(0, window - 1)(rng);
    scores[static_cast<std::size_t>(frame)] = uniform(rng, 0.8, 0.98);
  }

  return {ClipStream(StreamKind::Global, std::move(global)),
          ClipStream(StreamKind::Local, std::move(local)),
          ClipStream(StreamKind::Mixed, std::move(mixed)),
          std::move(scores),
          spec.activity_label,
          spec.sf_label};
}

std::array<MotifTemplate, kActivityClasses> default_motifs() {
  std::array<MotifTemplate, kActivityClasses> m;

  m[0] = [](std::mt19937_64& rng, const DatasetOptions& o) { return three_point(rng, o, 0, 1); };

  m[1] = [](std::mt19937_64& rng, const DatasetOptions& o) {
    SynthClipSpec s = base_spec(rng, o, 1);
    // Hand-held jitter: a fresh sub-pixel translation every frame.
    for (int t = 0; t < o.frames; ++t) {
      s.camera_script.push_back(
          {GlobalMotionModel::translation(uniform(rng, -0.3, 0.3), uniform(rng, -0.3, 0.3)), t, t + 1});
    }
    s.actors = lane_actors(rng, o);
    return s;
  };

  m[2] = [](std::mt19937_64& rng, const DatasetOptions& o) {
    SynthClipSpec s = base_spec(rng, o, 2);
    s.camera_script = {{GlobalMotionModel::translation(random_sign(rng) * uniform(rng, 1.5, 4.0),
                                                       uniform(rng, -0.5, 0.5)),
                        0, o.frames}};
    s.actors = lane_actors(rng, o);
    return s;
  };

  m[3] = [](std::mt19937_64& rng, const DatasetOptions& o) { return three_point(rng, o, 3, 12); };

  m[4] = [](std::mt19937_64& rng, const DatasetOptions& o) {
    SynthClipSpec s = base_spec(rng, o, 4);
    const double cx = uniform(rng, 0.4, 0.6) * (o.width - 1);
    const double cy = uniform(rng, 0.3, 0.5) * (o.height - 1);
    s.camera_script = {{GlobalMotionModel::zoom_about(uniform(rng, 1.06, 1.09), cx, cy), 0, o.frames}};
    s.actors.push_back(converging_actor(rng, o, {cx, cy}, uniform(rng, 4.0, 6.0), uniform(rng, 0.05, 0.07) * o.width));
    return s;
  };

  m[5] = [](std::mt19937_64& rng, const DatasetOptions& o) {
    SynthClipSpec s = base_spec(rng, o, 5);
    const int flip = std::clamp(static_cast<int>(std::lround(uniform(rng, 0.4, 0.6) * o.frames)), 1,
                                std::max(1, o.frames - 1));
    // Play always breaks rightward first, then reverses.
    const double tx = uniform(rng, 1.5, 4.0);
    const double ty = uniform(rng, -0.5, 0.5);
    if (o.frames >= 2) {
      s.camera_script = {{GlobalMotionModel::translation(tx, ty), 0, flip},
                         {GlobalMotionModel::translation(-tx, -ty), flip, o.frames}};
    } else {
      s.camera_script = {{GlobalMotionModel::translation(tx, ty), 0, o.frames}};
    }
    const int count = std::uniform_int_distribution<int>(2, 3)(rng);
    for (int i = 0; i < count; ++i) {
      Actor a;
      a.radius = uniform(rng, 0.05, 0.07) * o.width;
      a.x0 = uniform(rng, 0.25, 0.75) * (o.width - 1);
      a.y0 = uniform(rng, 0.25, 0.75) * (o.height - 1);
      // Players run against the camera pan until the turnover, then everyone reverses.
      a.vx = -std::copysign(uniform(rng, 2.0, 3.0), tx);
      a.vy = uniform(rng, -0.5, 0.5);
      a.turn_at = flip;
      a.turn_velocity = {-a.vx, -a.vy};
      s.actors.push_back(a);
    }
    return s;
  };

  return m;
}

SynthClipSpec dataset_clip_spec(int activity, int index, const std::array<MotifTemplate, kActivityClasses>& motifs,
                                std::uint64_t seed, const DatasetOptions& options) {
  if (activity < 0 || activity >= kActivityClasses) {
    throw Error(Errc::InvalidSpec, "activity " + std::to_string(activity) + " out of range");
  }
  if (index < 0) throw Error(Errc::InvalidSpec, "clip index must be >= 0");
  const auto& motif = motifs[static_cast<std::size_t>(activity)];
  if (!motif) throw Error(Errc::InvalidSpec, "missing motif template for activity " + std::to_string(activity));

  std::mt19937_64 rng(
      splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(activity) * 1000003ULL + static_cast<std::uint64_t>(index))));
  SynthClipSpec spec = motif(rng, options);
  spec.activity_label = activity;
  if (activity == kStealActivity) {
    spec.sf_label.reset();
  } else {
    spec.sf_label = index % 2 == 0 ? Outcome::Success : Outcome::Failure;
  }
  return spec;
}

SynthDataset generate_dataset(int per_class, const std::array<MotifTemplate, kActivityClasses>& motifs,
                              std::uint64_t seed, const DatasetOptions& options) {
  if (per_class < 1) throw Error(Errc::InvalidSpec, "per_class must be >= 1");
  SynthDataset ds;
  ds.clips.reserve(static_cast<std::size_t>(per_class) * kActivityClasses);
  for (int activity = 0; activity < kActivityClasses; ++activity) {
    for (int i = 0; i < per_class; ++i) {
      ds.clips.push_back(generate_clip(dataset_clip_spec(activity, i, motifs, seed, options)));
    }
  }
  return ds;
}

}  // namespace flowsep
