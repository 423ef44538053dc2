#include <doctest.h>

#include <numeric>
#include <random>

#include "flowsep/camera_model.hpp"
#include "flowsep/separation.hpp"
#include "oracles.hpp"

using namespace flowsep;

namespace {

double max_abs_diff(const FlowField& a, const FlowField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max({m, std::fabs(a.pixels()[i].dx - b.pixels()[i].dx), std::fabs(a.pixels()[i].dy - b.pixels()[i].dy)});
  }
  return m;
}

std::size_t nonzero_count(const FlowField& f) {
  return static_cast<std::size_t>(
      std::count_if(f.pixels().begin(), f.pixels().end(), [](const FlowVector& v) { return v.dx != 0.0 || v.dy != 0.0; }));
}

// Camera pan with a square of extra motion pasted over the center.
FlowField pan_with_blob(std::mt19937_64& rng, int side, int blob, double blob_mag) {
  FlowField f = displacement_field({1.0, -3.0, 1.0, 0.0}, side, side);
  std::uniform_real_distribution<double> u(-blob_mag, blob_mag);
  const int start = (side - blob) / 2;
  for (int y = start; y < start + blob; ++y) {
    for (int x = start; x < start + blob; ++x) {
      FlowVector v{u(rng), u(rng)};
      const double r = v.magnitude();
      if (r > blob_mag) v = {v.dx * blob_mag / r, v.dy * blob_mag / r};
      f.set(x, y, f.at(x, y) + v);
    }
  }
  return f;
}

}  // namespace

TEST_SUITE("separation") {
  TEST_CASE("trimmed mean examples") {
    const std::vector<double> outliers{9, 1, 1, 1, 1, 1, 1, 1, 1, 9};
    CHECK(trimmed_mean_middle60(outliers) == 1.0);
    const std::vector<double> single{5.0};
    CHECK(trimmed_mean_middle60(single) == 5.0);
    for (std::size_t n = 1; n < 40; ++n) {
      const std::vector<double> constant(n, -2.25);
      CHECK(trimmed_mean_middle60(constant) == -2.25);
    }
    CHECK_THROWS_AS(trimmed_mean_middle60(std::span<const double>{}), Error);
    const std::vector<double> bad{1.0, NAN};
    CHECK_THROWS_AS(trimmed_mean_middle60(bad), Error);
  }

  TEST_CASE("property: trimmed mean matches element-removal reference") {
    std::mt19937_64 rng(53);
    std::uniform_int_distribution<int> len(1, 60);
    std::normal_distribution<double> g(0.0, 10.0);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> v(static_cast<std::size_t>(len(rng)));
      for (double& x : v) x = g(rng);
      CHECK(trimmed_mean_middle60(v) == doctest::Approx(oracle::trimmed_mean(v)).epsilon(1e-12));
    }
  }

  TEST_CASE("estimate_corners examples") {
    const CornerEstimates zero = estimate_corners(FlowField(6, 6));
    CHECK(zero.x_left == 0.0);
    CHECK(zero.x_right == 0.0);
    CHECK(zero.y_top == 0.0);
    CHECK(zero.y_bottom == 0.0);

    const CornerEstimates pan = estimate_corners(displacement_field({1.0, -3.0, 1.0, 2.0}, 10, 10));
    CHECK(pan.x_left == -3.0);
    CHECK(pan.x_right == -3.0);
    CHECK(pan.y_top == 2.0);
    CHECK(pan.y_bottom == 2.0);

    FlowField zoom = displacement_field({1.1, 0.0, 1.0, 0.0}, 11, 11);
    zoom.set(0, 3, {1e6, -7.0});
    zoom.set(0, 8, {-55.0, 0.0});
    CHECK(estimate_corners(zoom).x_left == 0.0);

    CHECK_THROWS_AS(estimate_corners(FlowField(1, 8)), Error);
  }

  TEST_CASE("property: corners survive floor(0.2 n) adversarial pixels per tail") {
    std::mt19937_64 rng(59);
    std::uniform_int_distribution<int> side(5, 40);
    std::uniform_real_distribution<double> big(1e3, 1e9);
    for (int trial = 0; trial < 50; ++trial) {
      const int w = side(rng), h = side(rng);
      std::uniform_real_distribution<double> s(-0.2, 0.2), t(-20.0, 20.0);
      FlowField f = displacement_field({1.0 + s(rng), t(rng), 1.0 + s(rng), t(rng)}, w, h);
      const CornerEstimates before = estimate_corners(f);
      const int col_cut = h / 5, row_cut = w / 5;
      // Column 0: col_cut huge positive, col_cut huge negative, at distinct rows.
      std::vector<int> rows(static_cast<std::size_t>(h));
      std::iota(rows.begin(), rows.end(), 0);
      std::shuffle(rows.begin(), rows.end(), rng);
      for (int k = 0; k < 2 * col_cut; ++k) {
        const int y = rows[static_cast<std::size_t>(k)];
        const double v = k < col_cut ? big(rng) : -big(rng);
        f.set(0, y, {v, f.at(0, y).dy});
        f.set(w - 1, y, {-v, f.at(w - 1, y).dy});
      }
      std::vector<int> cols(static_cast<std::size_t>(w));
      std::iota(cols.begin(), cols.end(), 0);
      std::shuffle(cols.begin(), cols.end(), rng);
      for (int k = 0; k < 2 * row_cut; ++k) {
        const int x = cols[static_cast<std::size_t>(k)];
        const double v = k < row_cut ? big(rng) : -big(rng);
        f.set(x, 0, {f.at(x, 0).dx, v});
        f.set(x, h - 1, {f.at(x, h - 1).dx, -v});
      }
      const CornerEstimates after = estimate_corners(f);
      CHECK(after.x_left == before.x_left);
      CHECK(after.x_right == before.x_right);
      CHECK(after.y_top == before.y_top);
      CHECK(after.y_bottom == before.y_bottom);
    }
  }

  TEST_CASE("estimate_global reproduces camera-only fields") {
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> s(-0.2, 0.2), t(-20.0, 20.0);
    for (int trial = 0; trial < 30; ++trial) {
      const FlowField f = displacement_field({1.0 + s(rng), t(rng), 1.0 + s(rng), t(rng)}, 112, 112);
      CHECK(max_abs_diff(estimate_global(f), f) <= 1e-9);
    }
    CHECK(nonzero_count(estimate_global(FlowField(4, 4))) == 0);
  }

  TEST_CASE("central block of local motion leaves the global estimate untouched") {
    std::mt19937_64 rng(67);
    const FlowField camera = displacement_field({1.0, -3.0, 1.0, 0.0}, 112, 112);
    const FlowField mixed = pan_with_blob(rng, 112, 30, 10.0);
    CHECK(max_abs_diff(estimate_global(mixed), camera) <= 1e-9);
  }

  TEST_CASE("estimate_local branches") {
    const FlowField g1(1, 1, {{1.0, 0.0}});
    CHECK(estimate_local(FlowField(1, 1, {{0.5, 0.5}}), FlowField(1, 1)).at(0, 0) == FlowVector{0.0, 0.0});
    CHECK(estimate_local(FlowField(1, 1, {{5.0, 0.0}}), g1).at(0, 0) == FlowVector{4.0, 0.0});
    CHECK(estimate_local(FlowField(1, 1, {{2.0, 0.0}}), FlowField(1, 1, {{1.5, 0.0}})).at(0, 0) ==
          FlowVector{0.0, 0.0});
    // Branch 1 wins even when branch 2 would also fire.
    CHECK(estimate_local(FlowField(1, 1, {{0.9, 0.0}}), FlowField(1, 1, {{-5.0, 0.0}})).at(0, 0) ==
          FlowVector{0.0, 0.0});
    // Threshold 0: any motion that differs in magnitude is kept.
    CHECK(estimate_local(FlowField(1, 1, {{0.25, 0.0}}), FlowField(1, 1), 0.0).at(0, 0) == FlowVector{0.25, 0.0});
    CHECK_THROWS_AS(estimate_local(FlowField(2, 1), FlowField(1, 2)), Error);
    CHECK_THROWS_AS(estimate_local(FlowField(1, 1), FlowField(1, 1), -0.1), Error);
  }

  TEST_CASE("property: estimate_local matches the per-pixel rule, and is sound and monotone") {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 20; ++trial) {
      const FlowField mixed = oracle::random_float_field(rng, 16, 12, 4.0);
      const FlowField global = oracle::random_float_field(rng, 16, 12, 4.0);
      std::size_t previous = mixed.size() + 1;
      for (double theta : {0.0, 0.25, 0.5, 1.0, 1.5, 2.5, 4.0, 8.0}) {
        const FlowField local = estimate_local(mixed, global, theta);
        for (int y = 0; y < mixed.height(); ++y) {
          for (int x = 0; x < mixed.width(); ++x) {
            const FlowVector ref = oracle::local_pixel(mixed.at(x, y), global.at(x, y), theta);
            REQUIRE(local.at(x, y) == ref);
            if (local.at(x, y) != FlowVector{0.0, 0.0}) {
              REQUIRE(local.at(x, y) == mixed.at(x, y) - global.at(x, y));
            }
          }
        }
        const std::size_t count = nonzero_count(local);
        CHECK(count <= previous);
        previous = count;
      }
    }
  }

  TEST_CASE("separate: camera-only and zero fields give zero local") {
    const SeparationResult zero = separate(FlowField(8, 8));
    CHECK(nonzero_count(zero.global) == 0);
    CHECK(nonzero_count(zero.local) == 0);
    const SeparationResult cam = separate(displacement_field(GlobalMotionModel::zoom_about(1.08, 40, 50), 112, 112));
    CHECK(nonzero_count(cam.local) == 0);
    CHECK(cam.threshold == 1.0);
  }

  TEST_CASE("separate: blob pixels are exactly those the rule selects") {
    std::mt19937_64 rng(73);
    const FlowField mixed = pan_with_blob(rng, 112, 30, 8.0);
    const SeparationResult r = separate(mixed);
    std::size_t expected = 0;
    for (int y = 0; y < 112; ++y) {
      for (int x = 0; x < 112; ++x) {
        const FlowVector ref = oracle::local_pixel(mixed.at(x, y), r.global.at(x, y), 1.0);
        REQUIRE(r.local.at(x, y) == ref);
        const bool in_blob = x >= 41 && x < 71 && y >= 41 && y < 71;
        if (!in_blob) REQUIRE(r.local.at(x, y) == FlowVector{0.0, 0.0});
        if (ref != FlowVector{0.0, 0.0}) {
          ++expected;
          const FlowVector sum = r.global.at(x, y) + r.local.at(x, y);
          CHECK(std::fabs(sum.dx - mixed.at(x, y).dx) <= 1e-12);
          CHECK(std::fabs(sum.dy - mixed.at(x, y).dy) <= 1e-12);
        }
      }
    }
    CHECK(expected > 0);
    CHECK(nonzero_count(r.local) == expected);
  }
}
