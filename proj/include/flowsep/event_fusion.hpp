#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flowsep/classifier.hpp"

namespace flowsep {

enum class EventKind { Activity6, SF2, Event12, Event11 };

std::size_t event_length(EventKind kind);

/// Index 0 of an SF2 vector is success, index 1 failure.
enum class Outcome { Success = 0, Failure = 1 };

class EventVector {
 public:
  EventVector(EventKind kind, std::vector<double> values);
  static EventVector one_hot(EventKind kind, std::size_t index);

  EventKind kind() const noexcept { return kind_; }
  const std::vector<double>& values() const noexcept { return values_; }
  bool is_one_hot() const;
  /// Index of the single 1; throws NotOneHot otherwise.
  std::size_t hot_index() const;

  friend bool operator==(const EventVector&, const EventVector&) = default;

 private:
  EventKind kind_;
  std::vector<double> values_;
};

/// One-hot at the argmax, ties to the lowest index. Probability vectors of
/// length 6 or 2 map to Activity6 or SF2.
EventVector binarize(const ProbVector& probs);
EventVector binarize(const ProbVector& probs, EventKind kind);

/// activity (x) sf: event index 2 * activity + sf.
EventVector kronecker_fuse(const EventVector& activity, const EventVector& sf);

/// Steal success / failure (12-class indices 10 and 11) collapse into 10.
EventVector merge_steal(const EventVector& event12);

std::string event_name(std::size_t event11_index);

/// 11-class index of a ground-truth (activity, outcome) pair.
std::size_t event11_index(int activity, Outcome outcome);

/// Success iff any frame score is strictly greater than the threshold.
EventVector clip_success(std::span<const double> scores, double threshold);

struct ScoredClip {
  std::vector<double> scores;
  Outcome truth;
};

struct SweepRow {
  double threshold;
  std::optional<double> success_accuracy;  // undefined without success clips
  std::optional<double> failure_accuracy;  // undefined without failure clips
  double overall_accuracy;
  std::size_t success_correct;
  std::size_t failure_correct;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  std::size_t best_row;  // highest overall accuracy, earliest threshold on ties
};

/// Thresholds 0.50, 0.55, ..., 1.00.
std::vector<double> sweep_thresholds();

SweepReport threshold_sweep(std::span<const ScoredClip> clips);

std::string format_sweep_table(const SweepReport& report);

}  // namespace flowsep
