#include <doctest.h>

#include <functional>
#include <random>
#include <set>

#include "flowsep/event_fusion.hpp"

using namespace flowsep;

namespace {

Errc error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::Io;
}

}  // namespace

TEST_SUITE("event_fusion") {
  TEST_CASE("event vector validation") {
    CHECK(event_length(EventKind::Event11) == 11);
    CHECK(error_of([] { EventVector(EventKind::SF2, {1.0, 0.0, 0.0}); }) == Errc::DimensionMismatch);
    CHECK(error_of([] { EventVector::one_hot(EventKind::SF2, 2); }) == Errc::LabelOutOfRange);
    const EventVector soft(EventKind::SF2, {0.5, 0.5});
    CHECK_FALSE(soft.is_one_hot());
    CHECK(error_of([&] { soft.hot_index(); }) == Errc::NotOneHot);
  }

  TEST_CASE("binarize examples") {
    CHECK(binarize(ProbVector({0.1, 0.7, 0.2, 0, 0, 0})) == EventVector::one_hot(EventKind::Activity6, 1));
    CHECK(binarize(ProbVector(std::vector<double>(6, 1.0 / 6.0))).hot_index() == 0);
    const EventVector hot = EventVector::one_hot(EventKind::Activity6, 4);
    CHECK(binarize(ProbVector(hot.values())) == hot);
    CHECK(binarize(ProbVector({0.3, 0.7})).kind() == EventKind::SF2);
    CHECK(error_of([] { binarize(ProbVector({0.2, 0.3, 0.5})); }) == Errc::DimensionMismatch);
  }

  TEST_CASE("kronecker_fuse examples") {
    const auto sf = [](std::size_t i) { return EventVector::one_hot(EventKind::SF2, i); };
    const auto act = [](std::size_t i) { return EventVector::one_hot(EventKind::Activity6, i); };
    CHECK(kronecker_fuse(act(1), sf(0)).hot_index() == 2);
    CHECK(kronecker_fuse(act(0), sf(1)).hot_index() == 1);
    CHECK(kronecker_fuse(act(0), sf(1)).kind() == EventKind::Event12);
    CHECK(error_of([&] { kronecker_fuse(sf(0), act(1)); }) == Errc::InvalidArgument);
    CHECK(error_of([&] { kronecker_fuse(EventVector(EventKind::Activity6, {0.5, 0.5, 0, 0, 0, 0}), sf(0)); }) ==
          Errc::NotOneHot);
  }

  TEST_CASE("property: kronecker_fuse is a bijection and merge_steal folds exactly two indices") {
    std::set<std::size_t> fused, merged;
    int to_ten = 0;
    for (std::size_t a = 0; a < 6; ++a) {
      for (std::size_t s = 0; s < 2; ++s) {
        const EventVector e12 =
            kronecker_fuse(EventVector::one_hot(EventKind::Activity6, a), EventVector::one_hot(EventKind::SF2, s));
        REQUIRE(e12.is_one_hot());
        const std::size_t i = e12.hot_index();
        CHECK(i / 2 == a);
        CHECK(i % 2 == s);
        fused.insert(i);
        const EventVector e11 = merge_steal(e12);
        REQUIRE(e11.is_one_hot());
        CHECK(e11.kind() == EventKind::Event11);
        merged.insert(e11.hot_index());
        if (e11.hot_index() == 10) ++to_ten;
        if (a != 5) CHECK(e11.hot_index() == i);
        if (a != 5) CHECK(e11.hot_index() == event11_index(static_cast<int>(a), static_cast<Outcome>(s)));
      }
    }
    CHECK(fused.size() == 12);
    CHECK(merged.size() == 11);
    CHECK(to_ten == 2);
  }

  TEST_CASE("merge_steal examples") {
    const auto e12 = [](std::size_t i) { return EventVector::one_hot(EventKind::Event12, i); };
    CHECK(merge_steal(e12(10)).hot_index() == 10);
    CHECK(merge_steal(e12(11)).hot_index() == 10);
    CHECK(merge_steal(e12(3)).hot_index() == 3);
    CHECK(event11_index(kStealActivity, Outcome::Failure) == 10);
    CHECK(event_name(0) == "3-point-success");
    CHECK(event_name(3) == "free-throw-failure");
    CHECK(event_name(10) == "steal");
  }

  TEST_CASE("clip_success examples") {
    const std::vector<double> hit{0.2, 0.8, 0.3}, boundary{0.2, 0.7, 0.3}, zero(5, 0.0);
    CHECK(clip_success(hit, 0.7).hot_index() == 0);
    CHECK(clip_success(boundary, 0.7).hot_index() == 1);
    for (double t : {0.0, 0.5, 1.0}) CHECK(clip_success(zero, t).hot_index() == 1);
    CHECK(error_of([] { clip_success(std::vector<double>{}, 0.5); }) == Errc::EmptyScores);
    CHECK(error_of([&] { clip_success(hit, 1.5); }) == Errc::InvalidArgument);
  }

  TEST_CASE("property: raising the threshold never turns failure into success") {
    std::mt19937_64 rng(109);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> scores(8);
      for (double& s : scores) s = u(rng);
      bool failed = false;
      for (double t : sweep_thresholds()) {
        const bool success = clip_success(scores, t).hot_index() == 0;
        if (failed) REQUIRE_FALSE(success);
        failed = failed || !success;
      }
    }
  }

  TEST_CASE("sweep thresholds are exactly 0.50..1.00 step 0.05") {
    const auto t = sweep_thresholds();
    REQUIRE(t.size() == 11);
    const double expected[] = {0.50, 0.55, 0.60, 0.65, 0.70, 0.75, 0.80, 0.85, 0.90, 0.95, 1.00};
    for (std::size_t i = 0; i < 11; ++i) CHECK(t[i] == expected[i]);
  }

  TEST_CASE("sweep over all-failure zero scores") {
    const std::vector<ScoredClip> clips(5, ScoredClip{{0.0, 0.0, 0.0}, Outcome::Failure});
    const SweepReport r = threshold_sweep(clips);
    for (const SweepRow& row : r.rows) {
      CHECK(row.failure_accuracy == 1.0);
      CHECK_FALSE(row.success_accuracy.has_value());
      CHECK(row.overall_accuracy == 1.0);
    }
    CHECK(r.best_row == 0);
    CHECK(error_of([] { threshold_sweep(std::span<const ScoredClip>{}); }) == Errc::EmptyDataset);
  }

  TEST_CASE("sweep over constructed scores separates at 0.65 and 0.70 only") {
    std::mt19937_64 rng(113);
    std::uniform_real_distribution<double> low(0.0, 0.6);
    std::vector<ScoredClip> clips;
    for (int n = 0; n < 40; ++n) {
      std::vector<double> s(10);
      for (double& v : s) v = low(rng);
      if (n % 2 == 0) {
        s[static_cast<std::size_t>(n % 10)] = 0.75;
        clips.push_back({s, Outcome::Success});
      } else {
        s[static_cast<std::size_t>(n % 10)] = 0.65;
        clips.push_back({s, Outcome::Failure});
      }
    }
    const SweepReport r = threshold_sweep(clips);
    for (const SweepRow& row : r.rows) {
      CAPTURE(row.threshold);
      // Independent recount.
      std::size_t correct = 0;
      for (const auto& c : clips) {
        const double mx = *std::max_element(c.scores.begin(), c.scores.end());
        correct += ((mx > row.threshold) == (c.truth == Outcome::Success)) ? 1 : 0;
      }
      CHECK(row.overall_accuracy == static_cast<double>(correct) / static_cast<double>(clips.size()));
      if (row.threshold == 0.65 || row.threshold == 0.70) {
        CHECK(row.overall_accuracy == 1.0);
      } else {
        CHECK(row.overall_accuracy < 1.0);
      }
    }
    CHECK(r.rows[r.best_row].threshold == 0.65);
    const std::string table = format_sweep_table(r);
    CHECK(table.rfind("threshold,succ_acc,fail_acc,overall\n", 0) == 0);
    CHECK(table.find("best_threshold=0.65") != std::string::npos);
  }
}
