#include "flowsep/event_fusion.hpp"

#include <cmath>
#include <cstdio>

namespace flowsep {

std::size_t event_length(EventKind kind) {
  switch (kind) {
    case EventKind::Activity6: return 6;
    case EventKind::SF2: return 2;
    case EventKind::Event12: return 12;
    case EventKind::Event11: return 11;
  }
  return 0;
}

EventVector::EventVector(EventKind kind, std::vector<double> values) : kind_(kind), values_(std::move(values)) {
  if (values_.size() != event_length(kind)) {
    throw Error(Errc::DimensionMismatch, "event vector of length " + std::to_string(values_.size()) +
                                             ", expected " + std::to_string(event_length(kind)));
  }
}

EventVector EventVector::one_hot(EventKind kind, std::size_t index) {
  std::vector<double> v(event_length(kind), 0.0);
  if (index >= v.size()) throw Error(Errc::LabelOutOfRange, "one-hot index " + std::to_string(index));
  v[index] = 1.0;
  return EventVector(kind, std::move(v));
}

bool EventVector::is_one_hot() const {
  std::size_t ones = 0;
  for (double v : values_) {
    if (v == 1.0) {
      ++ones;
    } else if (v != 0.0) {
      return false;
    }
  }
  return ones == 1;
}

std::size_t EventVector::hot_index() const {
  if (!is_one_hot()) throw Error(Errc::NotOneHot, "event vector is not one-hot");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] == 1.0) return i;
  }
  return 0;
}

EventVector binarize(const ProbVector& probs, EventKind kind) {
  if (probs.size() != event_length(kind)) throw Error(Errc::DimensionMismatch, "probability length mismatch");
  return EventVector::one_hot(kind, probs.argmax());
}

EventVector binarize(const ProbVector& probs) {
  switch (probs.size()) {
    case 6: return binarize(probs, EventKind::Activity6);
    case 2: return binarize(probs, EventKind::SF2);
    case 12: return binarize(probs, EventKind::Event12);
    case 11: return binarize(probs, EventKind::Event11);
    default: throw Error(Errc::DimensionMismatch, "no event kind of length " + std::to_string(probs.size()));
  }
}

EventVector kronecker_fuse(const EventVector& activity, const EventVector& sf) {
  if (activity.kind() != EventKind::Activity6 || sf.kind() != EventKind::SF2) {
    throw Error(Errc::InvalidArgument, "kronecker_fuse expects Activity6 and SF2 operands");
  }
  if (!activity.is_one_hot() || !sf.is_one_hot()) throw Error(Errc::NotOneHot, "kronecker_fuse operands");
  std::vector<double> out;
  out.reserve(12);
  for (double a : activity.values()) {
    for (double s : sf.values()) out.push_back(a * s);
  }
  return EventVector(EventKind::Event12, std::move(out));
}

EventVector merge_steal(const EventVector& event12) {
  if (event12.kind() != EventKind::Event12) throw Error(Errc::InvalidArgument, "merge_steal expects Event12");
  const std::size_t index = event12.hot_index();
  return EventVector::one_hot(EventKind::Event11, index >= 10 ? 10 : index);
}

std::string event_name(std::size_t event11_index) {
  if (event11_index >= 11) throw Error(Errc::LabelOutOfRange, "event index " + std::to_string(event11_index));
  if (event11_index == 10) return "steal";
  return std::string(kActivityNames[event11_index / 2]) + (event11_index % 2 == 0 ? "-success" : "-failure");
}

std::size_t event11_index(int activity, Outcome outcome) {
  if (activity < 0 || activity >= kActivityClasses) {
    throw Error(Errc::LabelOutOfRange, "activity " + std::to_string(activity));
  }
  if (activity == kStealActivity) return 10;
  return static_cast<std::size_t>(2 * activity + static_cast<int>(outcome));
}

EventVector clip_success(std::span<const double> scores, double threshold) {
  if (scores.empty()) throw Error(Errc::EmptyScores, "clip has no frame scores");
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw Error(Errc::InvalidArgument, "threshold outside [0, 1]");
  for (double s : scores) {
    if (s > threshold) return EventVector::one_hot(EventKind::SF2, 0);
  }
  return EventVector::one_hot(EventKind::SF2, 1);
}

std::vector<double> sweep_thresholds() {
  std::vector<double> t;
  // Integer steps keep the grid exact to the nearest double (0.55, not 0.5500000000000002).
  for (int k = 50; k <= 100; k += 5) t.push_back(k / 100.0);
  return t;
}

SweepReport threshold_sweep(std::span<const ScoredClip> clips) {
  if (clips.empty()) throw Error(Errc::EmptyDataset, "no clips to sweep");
  std::size_t success_total = 0;
  for (const ScoredClip& c : clips) success_total += c.truth == Outcome::Success ? 1 : 0;
  const std::size_t failure_total = clips.size() - success_total;

  SweepReport report{{}, 0};
  for (double threshold : sweep_thresholds()) {
    SweepRow row{threshold, std::nullopt, std::nullopt, 0.0, 0, 0};
    for (const ScoredClip& c : clips) {
      const bool predicted_success = clip_success(c.scores, threshold).hot_index() == 0;
      if (c.truth == Outcome::Success && predicted_success) ++row.success_correct;
      if (c.truth == Outcome::Failure && !predicted_success) ++row.failure_correct;
    }
    if (success_total > 0) row.success_accuracy = static_cast<double>(row.success_correct) / success_total;
    if (failure_total > 0) row.failure_accuracy = static_cast<double>(row.failure_correct) / failure_total;
    row.overall_accuracy = static_cast<double>(row.success_correct + row.failure_correct) / clips.size();
    if (row.overall_accuracy > (report.rows.empty() ? -1.0 : report.rows[report.best_row].overall_accuracy)) {
      report.best_row = report.rows.size();
    }
    report.rows.push_back(row);
  }
  return report;
}

std::string format_sweep_table(const SweepReport& report) {
  auto cell = [](const std::optional<double>& v) {
    if (!v) return std::string("nan");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", *v);
    return std::string(buf);
  };
  std::string out = "threshold,succ_acc,fail_acc,overall\n";
  for (const SweepRow& r : report.rows) {
    char t[16];
    std::snprintf(t, sizeof t, "%.2f", r.threshold);
    out += std::string(t) + "," + cell(r.success_accuracy) + "," + cell(r.failure_accuracy) + "," +
           cell(r.overall_accuracy) + "\n";
  }
  char best[64];
  std::snprintf(best, sizeof best, "best_threshold=%.2f overall=%.4f\n", report.rows[report.best_row].threshold,
                report.rows[report.best_row].overall_accuracy);
  return out + best;
}

}  // namespace flowsep
