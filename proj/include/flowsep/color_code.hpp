#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "flowsep/flow_field.hpp"

namespace flowsep {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(Rgb, Rgb) = default;
};

struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<Rgb> pixels;  // row-major

  const Rgb& at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)];
  }
};

/// Color of a single normalized flow vector (|v| <= 1 is the saturated disk;
/// longer vectors are clamped to the rim).
Rgb flow_color(double dx, double dy);

/// Middlebury color-wheel rendering. Hue follows the flow direction,
/// saturation grows linearly with magnitude / max_magnitude and zero motion is
/// white. Without max_magnitude the field's own maximum is used (1 if the
/// field is all zero).
RgbImage color_code(const FlowField& field, std::optional<double> max_magnitude = std::nullopt);

/// Binary PPM (P6, maxval 255).
std::vector<std::uint8_t> encode_ppm(const RgbImage& image);
void write_ppm_file(const RgbImage& image, const std::filesystem::path& path);

}  // namespace flowsep
