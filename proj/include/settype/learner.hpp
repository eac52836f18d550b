#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include "settype/decoder.hpp"
#include "settype/error.hpp"
#include "settype/evaluator.hpp"
#include "settype/featurizer.hpp"
#include "settype/loss.hpp"
#include "settype/model.hpp"
#include "settype/scoring.hpp"

namespace settype {

inline constexpr std::uint64_t kDefaultSeed = 20170417;

struct TrainConfig {
  std::size_t epochs = 10;
  double learning_rate = 0.1;
  double adagrad_epsilon = 1e-8;
  double l2_lambda = 1e-6;
  std::uint64_t shuffle_seed = kDefaultSeed;
  /// Used for loss-augmented decoding during training and stored in the
  /// model for prediction. Threshold mode trains with the greedy decoder.
  DecoderConfig decoder;
  /// Compute train-set macro F1 after every epoch.
  bool report_train_f1 = true;
};

struct TrainReport {
  std::vector<double> hinge_loss;
  std::vector<std::size_t> violations;
  std::vector<double> train_f1;
};

struct Subgradient {
  FeatureVector gradient;  // phi(predicted) - phi(gold), zeros dropped
  double hinge = 0.0;
  TypeSet violator;
};

/// Structured hinge subgradient at the current weights: loss-augmented
/// decoding finds the most violating set, and the gradient is the feature
/// difference between it and the gold set.
inline Subgradient example_subgradient(const Model& model, const MentionFeatureCache& cache,
                                       const TypeSet& gold,
                                       const ConstraintGraph* graph = nullptr) {
  model.types.check(gold);
  ModelScorer scorer(model, cache);
  DecodeResult worst;
  if (model.decoder.mode == DecoderMode::connected) {
    if (!graph) throw contract_error("connected loss-augmented decoding needs a constraint graph");
    worst = decode_connected(scorer, *graph, &gold, model.decoder.max_set_size);
  } else {
    worst = decode_greedy(scorer, &gold, model.decoder.max_set_size);
  }
  Subgradient out;
  out.violator = worst.set;
  const double hinge = *worst.augmented_score - score_set(scorer, gold);
  if (hinge <= 0.0) return out;
  out.hinge = hinge;
  out.gradient = joint_features(cache, worst.set, model.types, model.features);
  out.gradient -= joint_features(cache, gold, model.types, model.features);
  out.gradient.canonicalize();
  return out;
}

inline Subgradient example_subgradient(const Model& model, const Example& example,
                                       const ConstraintGraph* graph = nullptr) {
  return example_subgradient(model, extract_mention_features(example.mention, model.features),
                             example.gold, graph);
}

/// Per-coordinate AdaGrad state.
class AdaGrad {
 public:
  AdaGrad(double learning_rate, double epsilon, double l2_lambda)
      : rate_(learning_rate), epsilon_(epsilon), lambda_(l2_lambda) {}

  /// Applies gradient + l2 * w to the coordinates present in `gradient`.
  void step(SparseVector& weights, const SparseVector& gradient) {
    for (const auto& [key, value] : gradient) {
      const double w = weights.get(key);
      const double g = value + lambda_ * w;
      double& acc = sum_squares_[key];
      acc += g * g;
      weights.set(key, w - rate_ * g / std::sqrt(acc + epsilon_));
    }
  }

 private:
  double rate_;
  double epsilon_;
  double lambda_;
  std::unordered_map<FeatureKey, double> sum_squares_;
};

/// Structured max-margin training with AdaGrad on the primal.
inline std::pair<Model, TrainReport> train(const std::vector<Example>& examples,
                                           const TypeSystem& ts,
                                           const FeaturizerConfig& features,
                                           const TrainConfig& config) {
  detail::require(!examples.empty(), "train needs at least one example");
  detail::require(config.learning_rate > 0.0, "learning rate must be positive");
  detail::require(config.adagrad_epsilon > 0.0, "AdaGrad epsilon must be positive");
  detail::require(config.l2_lambda >= 0.0, "l2 lambda must be non-negative");

  Model model;
  model.types = ts;
  model.features = features;
  model.decoder = config.decoder;
  model.cooccurrence = cooccurrence_pairs(examples, config.decoder.min_cooccur);

  std::vector<MentionFeatureCache> caches;
  caches.reserve(examples.size());
  for (const auto& ex : examples) {
    ts.check(ex.gold);
    caches.push_back(extract_mention_features(ex.mention, features));
  }

  std::optional<ConstraintGraph> graph;
  if (config.decoder.mode == DecoderMode::connected) graph = constraint_graph(model);
  const ConstraintGraph* graph_ptr = graph ? &*graph : nullptr;

  AdaGrad optimizer(config.learning_rate, config.adagrad_epsilon, config.l2_lambda);
  TrainReport report;
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(config.shuffle_seed);

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double hinge_sum = 0.0;
    std::size_t violations = 0;
    for (std::size_t i : order) {
      auto sub = example_subgradient(model, caches[i], examples[i].gold, graph_ptr);
      if (sub.hinge <= 0.0) continue;
      hinge_sum += sub.hinge;
      ++violations;
      optimizer.step(model.weights, model.dict.intern_all(sub.gradient));
    }
    report.hinge_loss.push_back(hinge_sum);
    report.violations.push_back(violations);
    if (config.report_train_f1) {
      double f1 = 0.0;
      for (std::size_t i = 0; i < examples.size(); ++i)
        f1 += prf(decode(model, caches[i], graph_ptr).set, examples[i].gold).f1;
      report.train_f1.push_back(f1 / static_cast<double>(examples.size()));
    } else {
      report.train_f1.push_back(0.0);
    }
  }
  model.weights.canonicalize();
  return {std::move(model), std::move(report)};
}

}  // namespace settype
