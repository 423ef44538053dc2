#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "flowsep/error.hpp"

namespace flowsep {

struct FlowVector {
  double dx = 0.0;
  double dy = 0.0;

  double magnitude() const { return std::sqrt(dx * dx + dy * dy); }

  friend FlowVector operator+(FlowVector a, FlowVector b) { return {a.dx + b.dx, a.dy + b.dy}; }
  friend FlowVector operator-(FlowVector a, FlowVector b) { return {a.dx - b.dx, a.dy - b.dy}; }
  friend bool operator==(FlowVector a, FlowVector b) = default;
};

/// Dense H x W field of per-pixel displacements, row-major, origin top-left,
/// x to the right and y downward.
///
/// Every component is finite. Operations that need four distinct corners
/// (model fitting, separation) additionally require both sides >= 2.
class FlowField {
 public:
  static constexpr int kMinSide = 1;
  static constexpr int kMaxSide = 1 << 15;

  /// Zero field.
  FlowField(int width, int height);
  /// Takes ownership of `data` (width * height vectors, row-major).
  FlowField(int width, int height, std::vector<FlowVector> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }

  const FlowVector& at(int x, int y) const { return data_[index(x, y)]; }
  /// Writes must stay finite; set() enforces it, the mutable span does not.
  void set(int x, int y, FlowVector v);

  std::span<const FlowVector> pixels() const noexcept { return data_; }

  bool same_shape(const FlowField& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const FlowField&, const FlowField&) = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_;
  int height_;
  std::vector<FlowVector> data_;
};

struct FlowStats {
  double min_magnitude = 0.0;
  double max_magnitude = 0.0;
  double mean_magnitude = 0.0;
  // Sorted per-pixel magnitudes, kept so that fraction_above() is exact.
  std::vector<double> sorted_magnitudes;

  /// Fraction of pixels whose magnitude is strictly greater than `threshold`.
  double fraction_above(double threshold) const;
};

FlowStats flow_stats(const FlowField& field);

/// Pixelwise sum / difference of equally-shaped fields.
FlowField add(const FlowField& a, const FlowField& b);
FlowField subtract(const FlowField& a, const FlowField& b);

}  // namespace flowsep
