#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "flowsep/flow_field.hpp"

namespace flowsep {

enum class StreamKind { Global, Local, Mixed };

std::string_view to_string(StreamKind kind);
std::optional<StreamKind> parse_stream_kind(std::string_view text);

/// Ordered frames of one motion stream; all frames share one shape.
class ClipStream {
 public:
  ClipStream(StreamKind kind, std::vector<FlowField> frames);

  StreamKind kind() const noexcept { return kind_; }
  const std::vector<FlowField>& frames() const noexcept { return frames_; }
  std::size_t length() const noexcept { return frames_.size(); }

 private:
  StreamKind kind_;
  std::vector<FlowField> frames_;
};

struct DescriptorConfig {
  int grid = 4;      // S: spatial cells per side
  int segments = 4;  // T: temporal segments
  int bins = 8;      // B: direction bins, centered on angles 2*pi*k/B

  std::size_t block_size() const { return static_cast<std::size_t>(bins) + 1; }
  std::size_t length() const {
    return static_cast<std::size_t>(grid) * static_cast<std::size_t>(grid) * static_cast<std::size_t>(segments) *
           block_size();
  }
  void validate() const;

  friend bool operator==(const DescriptorConfig&, const DescriptorConfig&) = default;
};

/// Spatiotemporal histogram of flow directions.
///
/// Layout: block (segment, cell_row, cell_col) at offset
/// ((segment * S + cell_row) * S + cell_col) * (B + 1); inside a block the
/// first B entries are magnitude-weighted direction votes and the last entry
/// is the summed magnitude. Each block is L2-normalized; empty blocks stay 0.
struct MotionDescriptor {
  DescriptorConfig config;
  std::vector<double> values;
};

/// Frames are split into T contiguous segments of floor(n / T) frames, the
/// remainder going to the last one. Throws ClipTooShort when n < T.
MotionDescriptor compute_descriptor(const ClipStream& clip, const DescriptorConfig& config = {});

}  // namespace flowsep
