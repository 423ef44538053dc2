#include "flowsep/flow_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

namespace flowsep {

namespace {

constexpr std::size_t kHeaderBytes = 12;

std::uint32_t load_le32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void store_le32(std::uint32_t v, std::vector<std::uint8_t>& out) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 24));
}

float load_float(const std::uint8_t* p) { return std::bit_cast<float>(load_le32(p)); }

void store_float(float f, std::vector<std::uint8_t>& out) { store_le32(std::bit_cast<std::uint32_t>(f), out); }

float narrow(double v) {
  if (!(std::abs(v) <= static_cast<double>(std::numeric_limits<float>::max()))) {
    throw Error(Errc::NonFinite, "component " + std::to_string(v) + " is not representable as float32");
  }
  return static_cast<float>(v);
}

}  // namespace

FlowField read_flow(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderBytes) {
    throw Error(Errc::Truncated, "stream of " + std::to_string(bytes.size()) + " bytes is shorter than the header");
  }
  if (load_float(bytes.data()) != kFloTag) throw Error(Errc::BadMagic, "missing .flo tag 202021.25");

  const auto width = static_cast<std::int32_t>(load_le32(bytes.data() + 4));
  const auto height = static_cast<std::int32_t>(load_le32(bytes.data() + 8));
  if (width <= 0 || height <= 0 || width > FlowField::kMaxSide || height > FlowField::kMaxSide) {
    throw Error(Errc::BadDimensions, "header dimensions " + std::to_string(width) + "x" + std::to_string(height));
  }

  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() < kHeaderBytes + count * 8) {
    throw Error(Errc::Truncated, "header implies " + std::to_string(kHeaderBytes + count * 8) + " bytes, got " +
                                     std::to_string(bytes.size()));
  }

  std::vector<FlowVector> data(count);
  const std::uint8_t* p = bytes.data() + kHeaderBytes;
  for (std::size_t i = 0; i < count; ++i, p += 8) {
    const float dx = load_float(p);
    const float dy = load_float(p + 4);
    if (!std::isfinite(dx) || !std::isfinite(dy)) {
      throw Error(Errc::NonFinite, "non-finite component at pixel " + std::to_string(i));
    }
    data[i] = {dx, dy};
  }
  return FlowField(width, height, std::move(data));
}

std::vector<std::uint8_t> write_flow(const FlowField& field) {
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderBytes + field.size() * 8);
  store_float(kFloTag, out);
  store_le32(static_cast<std::uint32_t>(field.width()), out);
  store_le32(static_cast<std::uint32_t>(field.height()), out);
  for (const FlowVector& v : field.pixels()) {
    store_float(narrow(v.dx), out);
    store_float(narrow(v.dy), out);
  }
  return out;
}

FlowField read_flow_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return read_flow(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void write_flow_file(const FlowField& field, const std::filesystem::path& path) {
  const auto bytes = write_flow(field);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::Io, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::Io, "write failed for " + path.string());
}

}  // namespace flowsep
