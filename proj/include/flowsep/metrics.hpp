#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace flowsep {

/// k x k counts, rows = true class, columns = predicted class.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(int k);
  ConfusionMatrix(int k, std::vector<std::uint64_t> counts);

  int classes() const noexcept { return k_; }
  std::uint64_t at(int truth, int predicted) const { return counts_[index(truth, predicted)]; }
  void add(int truth, int predicted, std::uint64_t n = 1);
  std::uint64_t total() const;
  std::uint64_t column_sum(int predicted) const;
  std::uint64_t trace() const;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  std::size_t index(int truth, int predicted) const;

  int k_;
  std::vector<std::uint64_t> counts_;
};

ConfusionMatrix confusion(std::span<const int> true_labels, std::span<const int> predicted_labels, int k);

/// trace / total; throws EmptyMatrix when total is 0.
double accuracy(const ConfusionMatrix& cm);

/// Mean over all k classes of counts[i][i] / column_sum(i); a class that is
/// never predicted contributes 0. Throws EmptyMatrix when total is 0.
double mean_average_precision(const ConfusionMatrix& cm);

/// Comma-separated grid with a header row of class names.
std::string format_confusion(const ConfusionMatrix& cm, std::span<const std::string> names);

}  // namespace flowsep
