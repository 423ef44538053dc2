#pragma once

#include <span>

#include "flowsep/flow_field.hpp"

namespace flowsep {

inline constexpr double kDefaultLocalThreshold = 1.0;  // px

/// Mean of the middle 60% of the sorted values: floor(0.2 n) elements are
/// dropped from each end. Throws EmptyInput on an empty sequence.
double trimmed_mean_middle60(std::span<const double> values);

/// Robust edge-line statistics. Corner vectors are assembled as
/// (x_left, y_top), (x_right, y_top), (x_left, y_bottom), (x_right, y_bottom).
struct CornerEstimates {
  double x_left = 0.0;    // dx, column 0
  double x_right = 0.0;   // dx, column width-1
  double y_top = 0.0;     // dy, row 0
  double y_bottom = 0.0;  // dy, row height-1
};

CornerEstimates estimate_corners(const FlowField& mixed);

/// Global field interpolated from the edge statistics:
///   dx(x) = x_left + x/(w-1) * (x_right - x_left)
///   dy(y) = y_top  + y/(h-1) * (y_bottom - y_top)
FlowField estimate_global(const FlowField& mixed);
FlowField interpolate_global(const CornerEstimates& corners, int width, int height);

/// Thresholded residual. Per pixel, with r_m = |mixed| and r_g = |global|:
/// zero if r_m <= threshold, mixed - global if |r_m - r_g| > threshold, zero
/// otherwise.
FlowField estimate_local(const FlowField& mixed, const FlowField& global, double threshold = kDefaultLocalThreshold);

struct SeparationResult {
  FlowField global;
  FlowField local;
  CornerEstimates corners;
  double threshold;
};

SeparationResult separate(const FlowField& mixed, double threshold = kDefaultLocalThreshold);

}  // namespace flowsep
