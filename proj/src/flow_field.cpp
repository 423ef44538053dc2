#include "flowsep/flow_field.hpp"

#include <algorithm>
#include <string>

namespace flowsep {

namespace {

void check_dims(int width, int height) {
  if (width < FlowField::kMinSide || height < FlowField::kMinSide || width > FlowField::kMaxSide ||
      height > FlowField::kMaxSide) {
    throw Error(Errc::BadDimensions,
                "flow field must be between 1x1 and 32768x32768, got " + std::to_string(width) + "x" +
                    std::to_string(height));
  }
}

bool finite(FlowVector v) { return std::isfinite(v.dx) && std::isfinite(v.dy); }

}  // namespace

FlowField::FlowField(int width, int height) : width_(width), height_(height) {
  check_dims(width, height);
  data_.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
}

FlowField::FlowField(int width, int height, std::vector<FlowVector> data)
    : width_(width), height_(height), data_(std::move(data)) {
  check_dims(width, height);
  if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error(Errc::DimensionMismatch, "pixel count " + std::to_string(data_.size()) + " does not match " +
                                             std::to_string(width) + "x" + std::to_string(height));
  }
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!finite(data_[i])) throw Error(Errc::NonFinite, "non-finite component at pixel " + std::to_string(i));
  }
}

void FlowField::set(int x, int y, FlowVector v) {
  if (x < 0 || y < 0 || x >= width_ || y >= height_) {
    throw Error(Errc::InvalidArgument, "pixel (" + std::to_string(x) + "," + std::to_string(y) + ") out of range");
  }
  if (!finite(v)) throw Error(Errc::NonFinite, "non-finite flow vector");
  data_[index(x, y)] = v;
}

double FlowStats::fraction_above(double threshold) const {
  if (sorted_magnitudes.empty()) return 0.0;
  auto first_above = std::upper_bound(sorted_magnitudes.begin(), sorted_magnitudes.end(), threshold);
  return static_cast<double>(sorted_magnitudes.end() - first_above) / static_cast<double>(sorted_magnitudes.size());
}

FlowStats flow_stats(const FlowField& field) {
  FlowStats stats;
  stats.sorted_magnitudes.reserve(field.size());
  double sum = 0.0;
  for (const FlowVector& v : field.pixels()) {
    const double r = v.magnitude();
    stats.sorted_magnitudes.push_back(r);
    sum += r;
  }
  std::sort(stats.sorted_magnitudes.begin(), stats.sorted_magnitudes.end());
  stats.min_magnitude = stats.sorted_magnitudes.front();
  stats.max_magnitude = stats.sorted_magnitudes.back();
  // Clamp guards min <= mean <= max against summation rounding.
  stats.mean_magnitude =
      std::clamp(sum / static_cast<double>(field.size()), stats.min_magnitude, stats.max_magnitude);
  return stats;
}

FlowField add(const FlowField& a, const FlowField& b) {
  if (!a.same_shape(b)) throw Error(Errc::DimensionMismatch, "cannot add fields of different shape");
  std::vector<FlowVector> out(a.size());
  auto pa = a.pixels();
  auto pb = b.pixels();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = pa[i] + pb[i];
  return FlowField(a.width(), a.height(), std::move(out));
}

FlowField subtract(const FlowField& a, const FlowField& b) {
  if (!a.same_shape(b)) throw Error(Errc::DimensionMismatch, "cannot subtract fields of different shape");
  std::vector<FlowVector> out(a.size());
  auto pa = a.pixels();
  auto pb = b.pixels();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = pa[i] - pb[i];
  return FlowField(a.width(), a.height(), std::move(out));
}

}  // namespace flowsep
