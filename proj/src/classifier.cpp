#include "flowsep/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numeric>
#include <sstream>
#include <string>

#include <json.hpp>

namespace flowsep {

namespace {

constexpr std::string_view kModelFormat = "flowsep-model";
constexpr int kModelVersion = 1;

void check_dims(const SoftmaxModel& model, std::size_t features) {
  if (features != static_cast<std::size_t>(model.dim())) {
    throw Error(Errc::DimensionMismatch, "descriptor length " + std::to_string(features) +
                                             " does not match classifier input " + std::to_string(model.dim()));
  }
}

double log_sum_exp(std::span<const double> z) {
  const double m = *std::max_element(z.begin(), z.end());
  double s = 0.0;
  for (double v : z) s += std::exp(v - m);
  return m + std::log(s);
}

}  // namespace

ProbVector::ProbVector(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw Error(Errc::InvalidArgument, "probability vector is empty");
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(Errc::InvalidArgument, "probability outside [0, 1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    throw Error(Errc::InvalidArgument, "probabilities sum to " + std::to_string(sum));
  }
}

std::size_t ProbVector::argmax() const {
  return static_cast<std::size_t>(std::max_element(probs_.begin(), probs_.end()) - probs_.begin());
}

SoftmaxModel::SoftmaxModel(int classes, int dim)
    : SoftmaxModel(classes, dim,
                   std::vector<double>(static_cast<std::size_t>(std::max(classes, 0)) *
                                       static_cast<std::size_t>(std::max(dim, 0))),
                   std::vector<double>(static_cast<std::size_t>(std::max(classes, 0)))) {}

SoftmaxModel::SoftmaxModel(int classes, int dim, std::vector<double> weights, std::vector<double> bias)
    : classes_(classes), dim_(dim), weights_(std::move(weights)), bias_(std::move(bias)) {
  if (classes < 1 || dim < 1) throw Error(Errc::InvalidArgument, "classifier needs classes >= 1 and dim >= 1");
  if (weights_.size() != static_cast<std::size_t>(classes) * static_cast<std::size_t>(dim) ||
      bias_.size() != static_cast<std::size_t>(classes)) {
    throw Error(Errc::DimensionMismatch, "classifier parameter sizes do not match " + std::to_string(classes) + "x" +
                                             std::to_string(dim));
  }
  for (double v : weights_) {
    if (!std::isfinite(v)) throw Error(Errc::NonFinite, "non-finite classifier weight");
  }
  for (double v : bias_) {
    if (!std::isfinite(v)) throw Error(Errc::NonFinite, "non-finite classifier bias");
  }
}

std::vector<double> SoftmaxModel::logits(std::span<const double> features) const {
  check_dims(*this, features.size());
  std::vector<double> z(bias_);
  for (int c = 0; c < classes_; ++c) {
    const double* row = weights_.data() + static_cast<std::size_t>(c) * static_cast<std::size_t>(dim_);
    double acc = 0.0;
    for (int d = 0; d < dim_; ++d) acc += row[d] * features[static_cast<std::size_t>(d)];
    z[static_cast<std::size_t>(c)] += acc;
  }
  return z;
}

std::vector<double> softmax(std::span<const double> logits) {
  if (logits.empty()) throw Error(Errc::EmptyInput, "softmax of an empty vector");
  const double m = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = std::exp(logits[i] - m);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

ProbVector predict(const SoftmaxModel& model, std::span<const double> features) {
  return ProbVector(softmax(model.logits(features)));
}

ProbVector predict(const SoftmaxModel& model, const MotionDescriptor& descriptor) {
  return predict(model, std::span<const double>(descriptor.values));
}

ProbVector fuse_streams(const ProbVector& p_global, const ProbVector& p_local, double weight_ratio) {
  if (p_global.size() != p_local.size()) throw Error(Errc::DimensionMismatch, "fused vectors differ in length");
  if (!(weight_ratio > 0.0) || !std::isfinite(weight_ratio)) {
    throw Error(Errc::InvalidArgument, "fusion weight ratio must be positive");
  }
  std::vector<double> out(p_global.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = (weight_ratio * p_global[i] + p_local[i]) / (weight_ratio + 1.0);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return ProbVector(std::move(out));
}

LossGradient cross_entropy_gradient(const SoftmaxModel& model, std::span<const LabeledFeatures> data,
                                    std::span<const std::size_t> batch) {
  if (batch.empty()) throw Error(Errc::EmptyDataset, "empty batch");
  const auto classes = static_cast<std::size_t>(model.classes());
  const auto dim = static_cast<std::size_t>(model.dim());
  LossGradient g{0.0, std::vector<double>(classes * dim, 0.0), std::vector<double>(classes, 0.0)};

  for (std::size_t index : batch) {
    const LabeledFeatures& s = data[index];
    const std::vector<double> z = model.logits(s.features);
    const double lse = log_sum_exp(z);
    g.loss += lse - z[static_cast<std::size_t>(s.label)];
    for (std::size_t c = 0; c < classes; ++c) {
      const double residual = std::exp(z[c] - lse) - (static_cast<int>(c) == s.label ? 1.0 : 0.0);
      g.d_bias[c] += residual;
      double* row = g.d_weights.data() + c * dim;
      for (std::size_t d = 0; d < dim; ++d) row[d] += residual * s.features[d];
    }
  }

  const double inv = 1.0 / static_cast<double>(batch.size());
  g.loss *= inv;
  for (double& v : g.d_weights) v *= inv;
  for (double& v : g.d_bias) v *= inv;
  return g;
}

double mean_cross_entropy(const SoftmaxModel& model, std::span<const LabeledFeatures> data) {
  std::vector<std::size_t> all(data.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return cross_entropy_gradient(model, data, all).loss;
}

BalancedSampler::BalancedSampler(std::span<const LabeledFeatures> data, int classes, int per_class,
                                 std::uint64_t seed)
    : by_class_(static_cast<std::size_t>(classes)),
      cursor_(static_cast<std::size_t>(classes), 0),
      per_class_(per_class),
      rng_(seed) {
  if (per_class < 1) throw Error(Errc::InvalidArgument, "per-class batch count must be >= 1");
  for (std::size_t i = 0; i < data.size(); ++i) {
    const int label = data[i].label;
    if (label < 0 || label >= classes) {
      throw Error(Errc::LabelOutOfRange, "label " + std::to_string(label) + " at sample " + std::to_string(i));
    }
    by_class_[static_cast<std::size_t>(label)].push_back(i);
  }
  for (std::size_t c = 0; c < by_class_.size(); ++c) {
    if (by_class_[c].empty()) throw Error(Errc::MissingClass, "no samples for class " + std::to_string(c));
    std::shuffle(by_class_[c].begin(), by_class_[c].end(), rng_);
  }
}

std::vector<std::size_t> BalancedSampler::next_batch() {
  std::vector<std::size_t> batch;
  batch.reserve(batch_size());
  for (std::size_t c = 0; c < by_class_.size(); ++c) {
    auto& pool = by_class_[c];
    for (int k = 0; k < per_class_; ++k) {
      if (cursor_[c] == pool.size()) {
        std::shuffle(pool.begin(), pool.end(), rng_);
        cursor_[c] = 0;
      }
      batch.push_back(pool[cursor_[c]++]);
    }
  }
  return batch;
}

TrainResult train_softmax(std::span<const LabeledFeatures> data, int classes, const TrainConfig& config) {
  if (data.empty()) throw Error(Errc::EmptyDataset, "no training samples");
  if (!(config.learning_rate > 0.0) || config.epochs < 1) {
    throw Error(Errc::InvalidArgument, "learning rate must be positive and epochs >= 1");
  }
  const std::size_t dim = data.front().features.size();
  if (dim == 0) throw Error(Errc::DimensionMismatch, "empty feature vectors");
  for (const LabeledFeatures& s : data) {
    if (s.features.size() != dim) throw Error(Errc::DimensionMismatch, "feature vectors differ in length");
  }

  BalancedSampler sampler(data, classes, config.per_class_in_batch, config.seed);
  TrainResult result{SoftmaxModel(classes, static_cast<int>(dim)), {}};

  std::vector<std::size_t> all(data.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  const std::size_t steps =
      config.full_batch ? 1 : std::max<std::size_t>(1, (data.size() + sampler.batch_size() - 1) / sampler.batch_size());

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    double epoch_loss = 0.0;
    for (std::size_t step = 0; step < steps; ++step) {
      const std::vector<std::size_t> batch = config.full_batch ? all : sampler.next_batch();
      const LossGradient g = cross_entropy_gradient(result.model, data, batch);
      epoch_loss += g.loss;
      auto& w = result.model.weights();
      auto& b = result.model.bias();
      for (std::size_t i = 0; i < w.size(); ++i) w[i] -= config.learning_rate * g.d_weights[i];
      for (std::size_t i = 0; i < b.size(); ++i) b[i] -= config.learning_rate * g.d_bias[i];
    }
    result.epoch_loss.push_back(epoch_loss / static_cast<double>(steps));
  }
  return result;
}

TwoStreamModel train_two_stream(std::span<const TwoStreamExample> data, const TrainConfig& config) {
  if (data.empty()) throw Error(Errc::EmptyDataset, "no training clips");
  std::vector<LabeledFeatures> global, local;
  global.reserve(data.size());
  local.reserve(data.size());
  for (const TwoStreamExample& e : data) {
    if (!(e.global.config == data.front().global.config) || !(e.local.config == data.front().global.config)) {
      throw Error(Errc::DimensionMismatch, "descriptor configurations differ across clips");
    }
    global.push_back({e.global.values, e.label});
    local.push_back({e.local.values, e.label});
  }
  return {data.front().global.config, train_softmax(global, kActivityClasses, config).model,
          train_softmax(local, kActivityClasses, config).model};
}

ProbVector predict_fused(const TwoStreamModel& model, const MotionDescriptor& global, const MotionDescriptor& local,
                         double weight_ratio) {
  return fuse_streams(predict(model.global, global), predict(model.local, local), weight_ratio);
}

const StreamClassifier* ModelBundle::find(StreamKind kind) const {
  for (const StreamClassifier& s : streams) {
    if (s.stream == kind) return &s;
  }
  return nullptr;
}

std::string serialize_model(const ModelBundle& bundle) {
  nlohmann::json j;
  j["format"] = kModelFormat;
  j["version"] = kModelVersion;
  j["descriptor"] = {{"grid", bundle.descriptor.grid},
                     {"segments", bundle.descriptor.segments},
                     {"bins", bundle.descriptor.bins}};
  j["streams"] = nlohmann::json::array();
  for (const StreamClassifier& s : bundle.streams) {
    j["streams"].push_back({{"stream", to_string(s.stream)},
                            {"classes", s.model.classes()},
                            {"dim", s.model.dim()},
                            {"weights", s.model.weights()},
                            {"bias", s.model.bias()}});
  }
  return j.dump() + "\n";
}

ModelBundle parse_model(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("format").get<std::string>() != kModelFormat) throw Error(Errc::Parse, "not a flowsep model");
    if (j.at("version").get<int>() != kModelVersion) {
      throw Error(Errc::Parse, "unsupported model version " + std::to_string(j.at("version").get<int>()));
    }
    ModelBundle bundle;
    const auto& d = j.at("descriptor");
    bundle.descriptor = {d.at("grid").get<int>(), d.at("segments").get<int>(), d.at("bins").get<int>()};
    bundle.descriptor.validate();
    for (const auto& s : j.at("streams")) {
      const auto kind = parse_stream_kind(s.at("stream").get<std::string>());
      if (!kind) throw Error(Errc::Parse, "unknown stream kind " + s.at("stream").get<std::string>());
      SoftmaxModel model(s.at("classes").get<int>(), s.at("dim").get<int>(),
                         s.at("weights").get<std::vector<double>>(), s.at("bias").get<std::vector<double>>());
      if (static_cast<std::size_t>(model.dim()) != bundle.descriptor.length()) {
        throw Error(Errc::DimensionMismatch, "classifier input does not match descriptor length");
      }
      bundle.streams.push_back({*kind, std::move(model)});
    }
    if (bundle.streams.empty()) throw Error(Errc::Parse, "model has no streams");
    return bundle;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::Parse, std::string("malformed model: ") + e.what());
  }
}

void save_model(const ModelBundle& bundle, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(Errc::Io, "cannot open " + path.string() + " for writing");
  out << serialize_model(bundle);
  if (!out) throw Error(Errc::Io, "write failed for " + path.string());
}

ModelBundle load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return parse_model(text);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

}  // namespace flowsep
