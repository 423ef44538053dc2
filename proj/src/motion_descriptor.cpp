#include "flowsep/motion_descriptor.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace flowsep {

std::string_view to_string(StreamKind kind) {
  switch (kind) {
    case StreamKind::Global: return "global";
    case StreamKind::Local: return "local";
    case StreamKind::Mixed: return "mixed";
  }
  return "unknown";
}

std::optional<StreamKind> parse_stream_kind(std::string_view text) {
  if (text == "global") return StreamKind::Global;
  if (text == "local") return StreamKind::Local;
  if (text == "mixed") return StreamKind::Mixed;
  return std::nullopt;
}

ClipStream::ClipStream(StreamKind kind, std::vector<FlowField> frames) : kind_(kind), frames_(std::move(frames)) {
  if (frames_.empty()) throw Error(Errc::EmptyInput, "clip stream has no frames");
  for (const FlowField& f : frames_) {
    if (!f.same_shape(frames_.front())) throw Error(Errc::DimensionMismatch, "clip frames differ in shape");
  }
}

void DescriptorConfig::validate() const {
  if (grid < 1 || segments < 1 || bins < 1) {
    throw Error(Errc::InvalidArgument, "descriptor grid, segments and bins must all be >= 1");
  }
}

MotionDescriptor compute_descriptor(const ClipStream& clip, const DescriptorConfig& config) {
  config.validate();
  const std::size_t n = clip.length();
  const auto segments = static_cast<std::size_t>(config.segments);
  if (n < segments) {
    throw Error(Errc::ClipTooShort,
                "clip has " + std::to_string(n) + " frames, need at least " + std::to_string(segments));
  }

  MotionDescriptor out{config, std::vector<double>(config.length(), 0.0)};
  const std::size_t per_segment = n / segments;
  const int width = clip.frames().front().width();
  const int height = clip.frames().front().height();
  const int grid = config.grid;
  const std::size_t block = config.block_size();
  const double bin_width = 2.0 * std::numbers::pi / config.bins;

  std::vector<std::size_t> cell_col(static_cast<std::size_t>(width));
  for (int x = 0; x < width; ++x) cell_col[static_cast<std::size_t>(x)] = static_cast<std::size_t>(x * grid / width);

  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t segment = std::min(t / per_segment, segments - 1);
    const FlowField& frame = clip.frames()[t];
    for (int y = 0; y < height; ++y) {
      const auto cell_row = static_cast<std::size_t>(y * grid / height);
      const std::size_t row_base = (segment * grid + cell_row) * grid;
      for (int x = 0; x < width; ++x) {
        const FlowVector v = frame.at(x, y);
        const double r = v.magnitude();
        if (r <= 0.0) continue;
        const double angle = std::atan2(v.dy, v.dx);
        auto bin = static_cast<long>(std::floor(angle / bin_width + 0.5));
        bin = ((bin % config.bins) + config.bins) % config.bins;
        double* cell = out.values.data() + (row_base + cell_col[static_cast<std::size_t>(x)]) * block;
        cell[bin] += r;
        cell[config.bins] += r;
      }
    }
  }

  for (std::size_t offset = 0; offset < out.values.size(); offset += block) {
    double norm = 0.0;
    for (std::size_t i = 0; i < block; ++i) norm += out.values[offset + i] * out.values[offset + i];
    if (norm == 0.0) continue;
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < block; ++i) out.values[offset + i] /= norm;
  }
  return out;
}

}  // namespace flowsep
