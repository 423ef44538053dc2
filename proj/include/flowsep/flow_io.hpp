#pragma once

// Middlebury .flo container: float tag 202021.25 ("PIEH"), int32 width,
// int32 height, then height*width interleaved (dx, dy) float32 pairs, all
// little-endian.

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "flowsep/flow_field.hpp"

namespace flowsep {

inline constexpr float kFloTag = 202021.25f;

FlowField read_flow(std::span<const std::uint8_t> bytes);
/// Components are stored as float32; a component outside float range is
/// rejected with NonFinite rather than silently written as inf.
std::vector<std::uint8_t> write_flow(const FlowField& field);

FlowField read_flow_file(const std::filesystem::path& path);
void write_flow_file(const FlowField& field, const std::filesystem::path& path);

}  // namespace flowsep
