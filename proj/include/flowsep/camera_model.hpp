#pragma once

#include <string_view>

#include "flowsep/flow_field.hpp"

namespace flowsep {

/// Per-axis affine camera model: x' = m0*x + m1, y' = m2*y + m3.
///
/// m0 and m2 are scale factors (> 0), m1 and m3 are translations in pixels.
/// Coordinates are 0-based pixel indices from the top-left corner.
class GlobalMotionModel {
 public:
  /// Identity (static camera).
  GlobalMotionModel() = default;
  /// Throws InvalidArgument unless all parameters are finite and m0, m2 > 0.
  GlobalMotionModel(double m0, double m1, double m2, double m3);

  static GlobalMotionModel identity() { return {}; }
  static GlobalMotionModel translation(double tx, double ty) { return {1.0, tx, 1.0, ty}; }
  /// Uniform scale about the fixed point (cx, cy).
  static GlobalMotionModel zoom_about(double scale, double cx, double cy) {
    return {scale, (1.0 - scale) * cx, scale, (1.0 - scale) * cy};
  }

  double m0() const noexcept { return m0_; }
  double m1() const noexcept { return m1_; }
  double m2() const noexcept { return m2_; }
  double m3() const noexcept { return m3_; }

  /// Pixel displacement at (x, y).
  FlowVector displacement(double x, double y) const { return {(m0_ - 1.0) * x + m1_, (m2_ - 1.0) * y + m3_}; }

  friend bool operator==(const GlobalMotionModel&, const GlobalMotionModel&) = default;

 private:
  double m0_ = 1.0;
  double m1_ = 0.0;
  double m2_ = 1.0;
  double m3_ = 0.0;
};

enum class CameraMotionLabel { Static, PanLeft, PanRight, TiltUp, TiltDown, ZoomIn, ZoomOut, Composite };

std::string_view to_string(CameraMotionLabel label);

struct CameraMotionTolerances {
  double translation = 0.5;  // px
  double scale = 0.005;
};

/// Field whose pixel (x, y) holds ((m0-1)x + m1, (m2-1)y + m3).
FlowField displacement_field(const GlobalMotionModel& model, int width, int height);

/// Least-squares line fit of the per-column mean dx against x and the per-row
/// mean dy against y. Exact on fields produced by displacement_field.
/// Throws BadDimensions for sides < 2 and DegenerateFit when the fitted scale
/// is not positive.
GlobalMotionModel fit_model(const FlowField& field);

/// Model of applying `first` and then `second`.
GlobalMotionModel compose(const GlobalMotionModel& first, const GlobalMotionModel& second);

/// Labels follow the image-motion convention: content moving left is a pan
/// right, content moving up is a tilt up, content magnifying about a fixed
/// point inside the width x height frame is a zoom in.
CameraMotionLabel classify_camera_motion(const GlobalMotionModel& model, int width, int height,
                                         const CameraMotionTolerances& tol = {});

}  // namespace flowsep
