#include <doctest.h>

#include <random>

#include "flowsep/camera_model.hpp"
#include "flowsep/motion_descriptor.hpp"
#include "oracles.hpp"

using namespace flowsep;

namespace {

ClipStream uniform_clip(FlowVector v, int w, int h, int frames) {
  return ClipStream(StreamKind::Mixed,
                    std::vector<FlowField>(static_cast<std::size_t>(frames),
                                           FlowField(w, h, std::vector<FlowVector>(static_cast<std::size_t>(w * h), v))));
}

}  // namespace

TEST_SUITE("motion_descriptor") {
  TEST_CASE("stream kind names") {
    CHECK(to_string(StreamKind::Local) == "local");
    CHECK(parse_stream_kind("global") == StreamKind::Global);
    CHECK_FALSE(parse_stream_kind("both").has_value());
  }

  TEST_CASE("clip stream validation") {
    CHECK_THROWS_AS(ClipStream(StreamKind::Global, {}), Error);
    CHECK_THROWS_AS(ClipStream(StreamKind::Global, {FlowField(4, 4), FlowField(4, 5)}), Error);
  }

  TEST_CASE("config validation and length") {
    CHECK(DescriptorConfig{}.length() == 576);
    CHECK_NOTHROW(DescriptorConfig{}.validate());
    CHECK_THROWS_AS((DescriptorConfig{0, 4, 8}.validate()), Error);
    CHECK_THROWS_AS((DescriptorConfig{4, 0, 8}.validate()), Error);
    CHECK_THROWS_AS((DescriptorConfig{4, 4, 0}.validate()), Error);
  }

  TEST_CASE("all-zero clip gives the all-zero descriptor") {
    const MotionDescriptor d = compute_descriptor(uniform_clip({0.0, 0.0}, 16, 16, 8));
    CHECK(d.values.size() == 576);
    for (double v : d.values) CHECK(v == 0.0);
  }

  TEST_CASE("uniform rightward motion fills the +x bin and magnitude channel equally") {
    const DescriptorConfig cfg{1, 1, 4};
    const MotionDescriptor d = compute_descriptor(uniform_clip({1.0, 0.0}, 8, 8, 3), cfg);
    REQUIRE(d.values.size() == 5);
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(d.values[0] == doctest::Approx(s).epsilon(1e-12));
    CHECK(d.values[1] == 0.0);
    CHECK(d.values[2] == 0.0);
    CHECK(d.values[3] == 0.0);
    CHECK(d.values[4] == doctest::Approx(s).epsilon(1e-12));
  }

  TEST_CASE("cardinal directions map to their bins") {
    const DescriptorConfig cfg{1, 1, 4};
    const FlowVector dirs[] = {{2.0, 0.0}, {0.0, 2.0}, {-2.0, 0.0}, {0.0, -2.0}};
    for (int k = 0; k < 4; ++k) {
      const MotionDescriptor d = compute_descriptor(uniform_clip(dirs[k], 4, 4, 1), cfg);
      for (int b = 0; b < 4; ++b) CHECK((d.values[static_cast<std::size_t>(b)] > 0.0) == (b == k));
    }
  }

  TEST_CASE("motion in one cell and segment lands in the matching block") {
    const DescriptorConfig cfg{2, 2, 8};
    std::vector<FlowField> frames(4, FlowField(8, 8));
    // Bottom-right cell of the second segment.
    frames[3].set(6, 6, {3.0, 0.0});
    const MotionDescriptor d = compute_descriptor(ClipStream(StreamKind::Local, frames), cfg);
    const std::size_t offset = ((1 * 2 + 1) * 2 + 1) * cfg.block_size();
    for (std::size_t i = 0; i < d.values.size(); ++i) {
      const bool inside = i >= offset && i < offset + cfg.block_size();
      if (!inside) CHECK(d.values[i] == 0.0);
    }
    CHECK(d.values[offset] > 0.0);
  }

  TEST_CASE("property: blocks are unit length or empty") {
    std::mt19937_64 rng(79);
    std::vector<FlowField> frames;
    for (int t = 0; t < 10; ++t) frames.push_back(oracle::random_float_field(rng, 20, 16, 3.0));
    const MotionDescriptor d = compute_descriptor(ClipStream(StreamKind::Mixed, frames));
    for (std::size_t b = 0; b < d.values.size(); b += 9) {
      double n2 = 0.0;
      for (std::size_t i = 0; i < 9; ++i) n2 += d.values[b + i] * d.values[b + i];
      CHECK((n2 == 0.0 || std::fabs(n2 - 1.0) < 1e-12));
    }
  }

  TEST_CASE("property: shuffling frames within a segment leaves the descriptor unchanged") {
    std::mt19937_64 rng(83);
    std::vector<FlowField> frames;
    for (int t = 0; t < 16; ++t) frames.push_back(oracle::random_float_field(rng, 12, 12, 5.0));
    const MotionDescriptor base = compute_descriptor(ClipStream(StreamKind::Mixed, frames));
    for (int trial = 0; trial < 5; ++trial) {
      auto shuffled = frames;
      for (int seg = 0; seg < 4; ++seg) std::shuffle(shuffled.begin() + seg * 4, shuffled.begin() + seg * 4 + 4, rng);
      const MotionDescriptor d = compute_descriptor(ClipStream(StreamKind::Mixed, shuffled));
      for (std::size_t i = 0; i < d.values.size(); ++i) CHECK(d.values[i] == doctest::Approx(base.values[i]).epsilon(1e-12));
    }
  }

  TEST_CASE("clips shorter than the segment count are rejected") {
    try {
      compute_descriptor(uniform_clip({1.0, 0.0}, 4, 4, 3));
      FAIL("expected ClipTooShort");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::ClipTooShort);
    }
  }
}
