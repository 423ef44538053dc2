#include "flowsep/separation.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace flowsep {

namespace {

void require_corners(const FlowField& field) {
  if (field.width() < 2 || field.height() < 2) {
    throw Error(Errc::BadDimensions, "separation needs a field of at least 2x2, got " +
                                         std::to_string(field.width()) + "x" + std::to_string(field.height()));
  }
}

// Scratch buffer reused across the four edge lines.
double trimmed_line(std::vector<double>& scratch) {
  const std::size_t n = scratch.size();
  const std::size_t cut = n / 5;  // floor(0.2 n)
  std::sort(scratch.begin(), scratch.end());
  double sum = 0.0;
  for (std::size_t i = cut; i < n - cut; ++i) sum += scratch[i];
  return sum / static_cast<double>(n - 2 * cut);
}

}  // namespace

double trimmed_mean_middle60(std::span<const double> values) {
  if (values.empty()) throw Error(Errc::EmptyInput, "trimmed mean of an empty sequence");
  std::vector<double> sorted(values.begin(), values.end());
  for (double v : sorted) {
    if (!std::isfinite(v)) throw Error(Errc::NonFinite, "trimmed mean input must be finite");
  }
  return trimmed_line(sorted);
}

CornerEstimates estimate_corners(const FlowField& mixed) {
  require_corners(mixed);
  const int w = mixed.width();
  const int h = mixed.height();

  std::vector<double> line;
  line.reserve(static_cast<std::size_t>(std::max(w, h)));
  CornerEstimates c;

  auto column_dx = [&](int x) {
    line.clear();
    for (int y = 0; y < h; ++y) line.push_back(mixed.at(x, y).dx);
    return trimmed_line(line);
  };
  auto row_dy = [&](int y) {
    line.clear();
    for (int x = 0; x < w; ++x) line.push_back(mixed.at(x, y).dy);
    return trimmed_line(line);
  };

  c.x_left = column_dx(0);
  c.x_right = column_dx(w - 1);
  c.y_top = row_dy(0);
  c.y_bottom = row_dy(h - 1);
  return c;
}

FlowField interpolate_global(const CornerEstimates& corners, int width, int height) {
  FlowField probe(width, height);
  require_corners(probe);

  std::vector<double> dx(static_cast<std::size_t>(width));
  for (int x = 0; x < width; ++x) {
    const double t = static_cast<double>(x) / (width - 1);
    dx[static_cast<std::size_t>(x)] = corners.x_left + t * (corners.x_right - corners.x_left);
  }
  std::vector<FlowVector> data;
  data.reserve(probe.size());
  for (int y = 0; y < height; ++y) {
    const double t = static_cast<double>(y) / (height - 1);
    const double dy = corners.y_top + t * (corners.y_bottom - corners.y_top);
    for (int x = 0; x < width; ++x) data.push_back({dx[static_cast<std::size_t>(x)], dy});
  }
  return FlowField(width, height, std::move(data));
}

FlowField estimate_global(const FlowField& mixed) {
  return interpolate_global(estimate_corners(mixed), mixed.width(), mixed.height());
}

FlowField estimate_local(const FlowField& mixed, const FlowField& global, double threshold) {
  if (!mixed.same_shape(global)) {
    throw Error(Errc::DimensionMismatch, "mixed and global fields differ in shape");
  }
  if (!(threshold >= 0.0) || !std::isfinite(threshold)) {
    throw Error(Errc::InvalidArgument, "threshold must be a finite non-negative number");
  }
  auto pm = mixed.pixels();
  auto pg = global.pixels();
  std::vector<FlowVector> out(pm.size());
  for (std::size_t i = 0; i < pm.size(); ++i) {
    const double rm = pm[i].magnitude();
    if (rm <= threshold) continue;
    if (std::abs(rm - pg[i].magnitude()) > threshold) out[i] = pm[i] - pg[i];
  }
  return FlowField(mixed.width(), mixed.height(), std::move(out));
}

SeparationResult separate(const FlowField& mixed, double threshold) {
  const CornerEstimates corners = estimate_corners(mixed);
  FlowField global = interpolate_global(corners, mixed.width(), mixed.height());
  FlowField local = estimate_local(mixed, global, threshold);
  return {std::move(global), std::move(local), corners, threshold};
}

}  // namespace flowsep
