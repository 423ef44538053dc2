#include "flowsep/camera_model.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace flowsep {

namespace {

struct Line {
  double slope;
  double intercept;
};

// Ordinary least squares of ys against 0, 1, ..., n-1.
Line fit_line(const std::vector<double>& ys) {
  const double n = static_cast<double>(ys.size());
  const double mean_x = (n - 1.0) / 2.0;
  double mean_y = 0.0;
  for (double y : ys) mean_y += y;
  mean_y /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const double cx = static_cast<double>(i) - mean_x;
    sxy += cx * (ys[i] - mean_y);
    sxx += cx * cx;
  }
  if (sxx == 0.0) throw Error(Errc::DegenerateFit, "need at least two distinct coordinates");
  const double slope = sxy / sxx;
  return {slope, mean_y - slope * mean_x};
}

}  // namespace

GlobalMotionModel::GlobalMotionModel(double m0, double m1, double m2, double m3)
    : m0_(m0), m1_(m1), m2_(m2), m3_(m3) {
  if (!std::isfinite(m0) || !std::isfinite(m1) || !std::isfinite(m2) || !std::isfinite(m3)) {
    throw Error(Errc::InvalidArgument, "model parameters must be finite");
  }
  if (!(m0 > 0.0) || !(m2 > 0.0)) throw Error(Errc::InvalidArgument, "scale factors m0 and m2 must be positive");
}

std::string_view to_string(CameraMotionLabel label) {
  switch (label) {
    case CameraMotionLabel::Static: return "static";
    case CameraMotionLabel::PanLeft: return "pan-left";
    case CameraMotionLabel::PanRight: return "pan-right";
    case CameraMotionLabel::TiltUp: return "tilt-up";
    case CameraMotionLabel::TiltDown: return "tilt-down";
    case CameraMotionLabel::ZoomIn: return "zoom-in";
    case CameraMotionLabel::ZoomOut: return "zoom-out";
    case CameraMotionLabel::Composite: return "composite";
  }
  return "unknown";
}

FlowField displacement_field(const GlobalMotionModel& model, int width, int height) {
  FlowField probe(width, height);  // validates dimensions
  std::vector<FlowVector> data;
  data.reserve(probe.size());
  const double sx = model.m0() - 1.0;
  const double sy = model.m2() - 1.0;
  for (int y = 0; y < height; ++y) {
    const double dy = sy * y + model.m3();
    for (int x = 0; x < width; ++x) data.push_back({sx * x + model.m1(), dy});
  }
  return FlowField(width, height, std::move(data));
}

GlobalMotionModel fit_model(const FlowField& field) {
  const int w = field.width();
  const int h = field.height();
  if (w < 2 || h < 2) {
    throw Error(Errc::BadDimensions, "model fitting needs a field of at least 2x2, got " + std::to_string(w) + "x" +
                                         std::to_string(h));
  }

  std::vector<double> column_dx(static_cast<std::size_t>(w), 0.0);
  std::vector<double> row_dy(static_cast<std::size_t>(h), 0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const FlowVector& v = field.at(x, y);
      column_dx[static_cast<std::size_t>(x)] += v.dx;
      row_dy[static_cast<std::size_t>(y)] += v.dy;
    }
  }
  for (double& s : column_dx) s /= h;
  for (double& s : row_dy) s /= w;

  const Line fx = fit_line(column_dx);
  const Line fy = fit_line(row_dy);
  const double m0 = fx.slope + 1.0;
  const double m2 = fy.slope + 1.0;
  if (!(m0 > 0.0) || !(m2 > 0.0)) {
    throw Error(Errc::DegenerateFit, "fitted scale is not orientation preserving (m0=" + std::to_string(m0) +
                                         ", m2=" + std::to_string(m2) + ")");
  }
  return {m0, fx.intercept, m2, fy.intercept};
}

GlobalMotionModel compose(const GlobalMotionModel& first, const GlobalMotionModel& second) {
  return {second.m0() * first.m0(), second.m0() * first.m1() + second.m1(), second.m2() * first.m2(),
          second.m2() * first.m3() + second.m3()};
}

CameraMotionLabel classify_camera_motion(const GlobalMotionModel& model, int width, int height,
                                         const CameraMotionTolerances& tol) {
  if (!(tol.translation > 0.0) || !(tol.scale > 0.0)) {
    throw Error(Errc::InvalidArgument, "tolerances must be positive");
  }
  const double sx = model.m0() - 1.0;
  const double sy = model.m2() - 1.0;
  const bool scale_flat = std::abs(sx) <= tol.scale && std::abs(sy) <= tol.scale;

  if (scale_flat) {
    const bool moves_x = std::abs(model.m1()) > tol.translation;
    const bool moves_y = std::abs(model.m3()) > tol.translation;
    if (!moves_x && !moves_y) return CameraMotionLabel::Static;
    if (moves_x && !moves_y) return model.m1() < 0.0 ? CameraMotionLabel::PanRight : CameraMotionLabel::PanLeft;
    if (moves_y && !moves_x) return model.m3() < 0.0 ? CameraMotionLabel::TiltUp : CameraMotionLabel::TiltDown;
    return CameraMotionLabel::Composite;
  }

  const bool same_sign = (sx > 0.0 && sy > 0.0) || (sx < 0.0 && sy < 0.0);
  if (same_sign && std::abs(sx) > tol.scale && std::abs(sy) > tol.scale) {
    const double fx = model.m1() / -sx;
    const double fy = model.m3() / -sy;
    const bool inside = fx >= 0.0 && fx <= width - 1 && fy >= 0.0 && fy <= height - 1;
    if (inside) return sx > 0.0 ? CameraMotionLabel::ZoomIn : CameraMotionLabel::ZoomOut;
  }
  return CameraMotionLabel::Composite;
}

}  // namespace flowsep
