#include "flowsep/color_code.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <numbers>
#include <string>

namespace flowsep {

namespace {

// Transition lengths of the Middlebury wheel: RY, YG, GC, CB, BM, MR.
constexpr int kRY = 15, kYG = 6, kGC = 4, kCB = 11, kBM = 13, kMR = 6;
constexpr int kWheelSize = kRY + kYG + kGC + kCB + kBM + kMR;  // 55

using Wheel = std::array<std::array<double, 3>, kWheelSize>;

Wheel make_wheel() {
  Wheel w{};
  int k = 0;
  for (int i = 0; i < kRY; ++i, ++k) w[k] = {255.0, std::floor(255.0 * i / kRY), 0.0};
  for (int i = 0; i < kYG; ++i, ++k) w[k] = {255.0 - std::floor(255.0 * i / kYG), 255.0, 0.0};
  for (int i = 0; i < kGC; ++i, ++k) w[k] = {0.0, 255.0, std::floor(255.0 * i / kGC)};
  for (int i = 0; i < kCB; ++i, ++k) w[k] = {0.0, 255.0 - std::floor(255.0 * i / kCB), 255.0};
  for (int i = 0; i < kBM; ++i, ++k) w[k] = {std::floor(255.0 * i / kBM), 0.0, 255.0};
  for (int i = 0; i < kMR; ++i, ++k) w[k] = {255.0, 0.0, 255.0 - std::floor(255.0 * i / kMR)};
  return w;
}

const Wheel& wheel() {
  static const Wheel w = make_wheel();
  return w;
}

}  // namespace

Rgb flow_color(double dx, double dy) {
  const double rad = std::min(std::hypot(dx, dy), 1.0);
  if (rad == 0.0) return {255, 255, 255};

  const double angle = std::atan2(-dy, -dx) / std::numbers::pi;  // (-1, 1]
  const double fk = (angle + 1.0) / 2.0 * (kWheelSize - 1);
  const int k0 = static_cast<int>(fk);
  const int k1 = (k0 + 1) % kWheelSize;
  const double f = fk - k0;

  std::array<std::uint8_t, 3> rgb{};
  for (int c = 0; c < 3; ++c) {
    const double col0 = wheel()[k0][c] / 255.0;
    const double col1 = wheel()[k1][c] / 255.0;
    const double col = 1.0 - rad * (1.0 - ((1.0 - f) * col0 + f * col1));
    rgb[c] = static_cast<std::uint8_t>(std::clamp(255.0 * col, 0.0, 255.0));
  }
  return {rgb[0], rgb[1], rgb[2]};
}

RgbImage color_code(const FlowField& field, std::optional<double> max_magnitude) {
  double scale = 0.0;
  if (max_magnitude) {
    if (!(*max_magnitude > 0.0) || !std::isfinite(*max_magnitude)) {
      throw Error(Errc::InvalidArgument, "max magnitude must be positive");
    }
    scale = *max_magnitude;
  } else {
    for (const FlowVector& v : field.pixels()) scale = std::max(scale, v.magnitude());
    if (scale == 0.0) scale = 1.0;
  }

  RgbImage image{field.width(), field.height(), {}};
  image.pixels.reserve(field.size());
  for (const FlowVector& v : field.pixels()) image.pixels.push_back(flow_color(v.dx / scale, v.dy / scale));
  return image;
}

std::vector<std::uint8_t> encode_ppm(const RgbImage& image) {
  const std::string header = "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + image.pixels.size() * 3);
  for (const Rgb& p : image.pixels) {
    out.push_back(p.r);
    out.push_back(p.g);
    out.push_back(p.b);
  }
  return out;
}

void write_ppm_file(const RgbImage& image, const std::filesystem::path& path) {
  const auto bytes = encode_ppm(image);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::Io, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::Io, "write failed for " + path.string());
}

}  // namespace flowsep
