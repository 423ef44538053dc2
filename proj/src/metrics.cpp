#include "flowsep/metrics.hpp"

#include "flowsep/error.hpp"

namespace flowsep {

ConfusionMatrix::ConfusionMatrix(int k) : ConfusionMatrix(k, std::vector<std::uint64_t>(k > 0 ? k * k : 0, 0)) {}

ConfusionMatrix::ConfusionMatrix(int k, std::vector<std::uint64_t> counts) : k_(k), counts_(std::move(counts)) {
  if (k < 1) throw Error(Errc::InvalidArgument, "confusion matrix needs k >= 1");
  if (counts_.size() != static_cast<std::size_t>(k) * static_cast<std::size_t>(k)) {
    throw Error(Errc::DimensionMismatch, "confusion matrix needs k*k counts");
  }
}

std::size_t ConfusionMatrix::index(int truth, int predicted) const {
  if (truth < 0 || truth >= k_ || predicted < 0 || predicted >= k_) {
    throw Error(Errc::LabelOutOfRange,
                "label pair (" + std::to_string(truth) + "," + std::to_string(predicted) + ") outside [0," +
                    std::to_string(k_) + ")");
  }
  return static_cast<std::size_t>(truth) * static_cast<std::size_t>(k_) + static_cast<std::size_t>(predicted);
}

void ConfusionMatrix::add(int truth, int predicted, std::uint64_t n) { counts_[index(truth, predicted)] += n; }

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t t = 0;
  for (auto c : counts_) t += c;
  return t;
}

std::uint64_t ConfusionMatrix::column_sum(int predicted) const {
  std::uint64_t s = 0;
  for (int t = 0; t < k_; ++t) s += at(t, predicted);
  return s;
}

std::uint64_t ConfusionMatrix::trace() const {
  std::uint64_t s = 0;
  for (int i = 0; i < k_; ++i) s += at(i, i);
  return s;
}

ConfusionMatrix confusion(std::span<const int> true_labels, std::span<const int> predicted_labels, int k) {
  if (true_labels.size() != predicted_labels.size()) {
    throw Error(Errc::LengthMismatch, std::to_string(true_labels.size()) + " true labels vs " +
                                          std::to_string(predicted_labels.size()) + " predictions");
  }
  ConfusionMatrix cm(k);
  for (std::size_t i = 0; i < true_labels.size(); ++i) cm.add(true_labels[i], predicted_labels[i]);
  return cm;
}

double accuracy(const ConfusionMatrix& cm) {
  const auto total = cm.total();
  if (total == 0) throw Error(Errc::EmptyMatrix, "accuracy of an empty confusion matrix");
  return static_cast<double>(cm.trace()) / static_cast<double>(total);
}

double mean_average_precision(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw Error(Errc::EmptyMatrix, "MAP of an empty confusion matrix");
  double sum = 0.0;
  for (int i = 0; i < cm.classes(); ++i) {
    const auto predicted = cm.column_sum(i);
    if (predicted > 0) sum += static_cast<double>(cm.at(i, i)) / static_cast<double>(predicted);
  }
  return sum / cm.classes();
}

std::string format_confusion(const ConfusionMatrix& cm, std::span<const std::string> names) {
  if (names.size() != static_cast<std::size_t>(cm.classes())) {
    throw Error(Errc::LengthMismatch, "class names do not match matrix size");
  }
  std::string out = "true\\pred";
  for (const auto& n : names) out += "," + n;
  out += "\n";
  for (int t = 0; t < cm.classes(); ++t) {
    out += names[static_cast<std::size_t>(t)];
    for (int p = 0; p < cm.classes(); ++p) out += "," + std::to_string(cm.at(t, p));
    out += "\n";
  }
  return out;
}

}  // namespace flowsep
