#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "flowsep/motion_descriptor.hpp"

namespace flowsep {

inline constexpr int kActivityClasses = 6;

/// Activity order used by every classifier output and event index.
inline constexpr std::array<std::string_view, kActivityClasses> kActivityNames = {
    "3-point", "free-throw", "layup", "2-point", "slam-dunk", "steal"};

inline constexpr int kStealActivity = 5;

/// Probability vector: entries in [0, 1] summing to 1 within 1e-6.
class ProbVector {
 public:
  explicit ProbVector(std::vector<double> probs);

  const std::vector<double>& probs() const noexcept { return probs_; }
  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  /// Lowest index among the maxima.
  std::size_t argmax() const;

 private:
  std::vector<double> probs_;
};

/// Linear softmax classifier, C x D weights (row-major) plus C biases.
class SoftmaxModel {
 public:
  SoftmaxModel(int classes, int dim);
  SoftmaxModel(int classes, int dim, std::vector<double> weights, std::vector<double> bias);

  int classes() const noexcept { return classes_; }
  int dim() const noexcept { return dim_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::vector<double>& bias() const noexcept { return bias_; }
  std::vector<double>& weights() noexcept { return weights_; }
  std::vector<double>& bias() noexcept { return bias_; }

  double weight(int c, int d) const {
    return weights_[static_cast<std::size_t>(c) * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(d)];
  }

  std::vector<double> logits(std::span<const double> features) const;

  friend bool operator==(const SoftmaxModel&, const SoftmaxModel&) = default;

 private:
  int classes_;
  int dim_;
  std::vector<double> weights_;
  std::vector<double> bias_;
};

/// Numerically stable softmax.
std::vector<double> softmax(std::span<const double> logits);

ProbVector predict(const SoftmaxModel& model, std::span<const double> features);
ProbVector predict(const SoftmaxModel& model, const MotionDescriptor& descriptor);

/// (w * p_global + p_local) / (w + 1).
ProbVector fuse_streams(const ProbVector& p_global, const ProbVector& p_local, double weight_ratio = 1.0);

struct LabeledFeatures {
  std::vector<double> features;
  int label = 0;
};

struct LossGradient {
  double loss = 0.0;              // mean cross-entropy over the batch
  std::vector<double> d_weights;  // same layout as SoftmaxModel::weights()
  std::vector<double> d_bias;
};

/// Mean of -log p_label over the selected samples, with its analytic gradient.
LossGradient cross_entropy_gradient(const SoftmaxModel& model, std::span<const LabeledFeatures> data,
                                    std::span<const std::size_t> batch);

double mean_cross_entropy(const SoftmaxModel& model, std::span<const LabeledFeatures> data);

/// Draws mini-batches holding exactly `per_class` samples of every class.
/// Each class cycles through a shuffled permutation of its samples and
/// reshuffles once exhausted, so scarce classes are repeated.
class BalancedSampler {
 public:
  BalancedSampler(std::span<const LabeledFeatures> data, int classes, int per_class, std::uint64_t seed);

  std::vector<std::size_t> next_batch();
  std::size_t batch_size() const noexcept { return by_class_.size() * static_cast<std::size_t>(per_class_); }

 private:
  std::vector<std::vector<std::size_t>> by_class_;
  std::vector<std::size_t> cursor_;
  int per_class_;
  std::mt19937_64 rng_;
};

struct TrainConfig {
  double learning_rate = 0.001;
  int epochs = 200;
  std::uint64_t seed = 0;
  int per_class_in_batch = 3;  // 6 classes x 3 = batches of 18
  bool full_batch = false;     // one step per epoch over the whole dataset
};

struct TrainResult {
  SoftmaxModel model;
  std::vector<double> epoch_loss;  // mean pre-update batch loss per epoch
};

/// Plain mini-batch gradient descent on mean cross-entropy, starting from
/// zero weights. An epoch is ceil(N / batch) balanced batches.
/// Throws EmptyDataset, LabelOutOfRange, DimensionMismatch, MissingClass.
TrainResult train_softmax(std::span<const LabeledFeatures> data, int classes, const TrainConfig& config);

struct TwoStreamExample {
  MotionDescriptor global;
  MotionDescriptor local;
  int label = 0;
};

struct TwoStreamModel {
  DescriptorConfig descriptor;
  SoftmaxModel global;
  SoftmaxModel local;
};

/// Trains the global and local classifiers independently on the same labels.
TwoStreamModel train_two_stream(std::span<const TwoStreamExample> data, const TrainConfig& config);

ProbVector predict_fused(const TwoStreamModel& model, const MotionDescriptor& global, const MotionDescriptor& local,
                         double weight_ratio = 1.0);

/// On-disk classifier bundle: descriptor configuration plus one classifier per
/// stream (one for single-stream models, global and local for two-stream).
struct StreamClassifier {
  StreamKind stream;
  SoftmaxModel model;
};

struct ModelBundle {
  DescriptorConfig descriptor;
  std::vector<StreamClassifier> streams;

  const StreamClassifier* find(StreamKind kind) const;
};

std::string serialize_model(const ModelBundle& bundle);
ModelBundle parse_model(std::string_view text);
void save_model(const ModelBundle& bundle, const std::filesystem::path& path);
ModelBundle load_model(const std::filesystem::path& path);

}  // namespace flowsep
