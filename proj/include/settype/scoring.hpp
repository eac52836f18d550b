#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "settype/error.hpp"
#include "settype/featurizer.hpp"
#include "settype/model.hpp"
#include "settype/type_system.hpp"

namespace settype {

/// Anything that exposes the pairwise-factored set score:
///   score(T) = sum_t unary(t) + sum_{t<t'} pair(t, t') + size_term(|T|)
/// with size_term(0) == 0.
template <class S>
concept Scorer = requires(const S& s, TypeIndex t, std::size_t n) {
  { s.num_types() } -> std::convertible_to<std::size_t>;
  { s.unary(t) } -> std::convertible_to<double>;
  { s.pair(t, t) } -> std::convertible_to<double>;
  { s.size_term(n) } -> std::convertible_to<double>;
};

template <Scorer S>
void check_set(const S& scorer, const TypeSet& set) {
  if (!set.empty() && set.max_member() >= scorer.num_types())
    throw index_error("type index " + std::to_string(set.max_member()) + " out of range");
}

template <Scorer S>
double score_set(const S& scorer, const TypeSet& set) {
  check_set(scorer, set);
  const auto& m = set.members();
  double total = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    total += scorer.unary(m[i]);
    for (std::size_t j = i + 1; j < m.size(); ++j) total += scorer.pair(m[i], m[j]);
  }
  if (!m.empty()) total += scorer.size_term(m.size());
  return total;
}

/// score(current + {candidate}) - score(current), computed incrementally.
template <Scorer S>
double marginal_gain(const S& scorer, const TypeSet& current, TypeIndex candidate) {
  if (candidate >= scorer.num_types()) throw index_error("candidate type out of range");
  if (current.contains(candidate)) throw contract_error("candidate already in the set");
  double gain = scorer.unary(candidate);
  for (TypeIndex m : current) gain += scorer.pair(candidate, m);
  const std::size_t k = current.size();
  gain += scorer.size_term(k + 1) - (k == 0 ? 0.0 : scorer.size_term(k));
  return gain;
}

/// Explicit unary and pair tables; used for synthetic instances.
class TableScorer {
 public:
  explicit TableScorer(std::size_t n) : unary_(n, 0.0), pair_(n * n, 0.0) {}

  std::size_t num_types() const { return unary_.size(); }
  double unary(TypeIndex t) const { return unary_.at(t); }
  double pair(TypeIndex a, TypeIndex b) const { return pair_.at(a * num_types() + b); }
  double size_term(std::size_t n) const {
    return n == 0 || n > size_.size() ? 0.0 : size_[n - 1];
  }

  void set_unary(TypeIndex t, double v) { unary_.at(t) = v; }
  void set_pair(TypeIndex a, TypeIndex b, double v) {
    if (a == b) throw contract_error("pair weight needs two distinct types");
    pair_.at(a * num_types() + b) = v;
    pair_.at(b * num_types() + a) = v;
  }
  /// size_terms[k] applies to sets of size k + 1.
  void set_size_terms(std::vector<double> size_terms) { size_ = std::move(size_terms); }

 private:
  std::vector<double> unary_;
  std::vector<double> pair_;
  std::vector<double> size_;
};

/// Scores sets for one mention under a model. Unary scores are computed up
/// front; pair scores are looked up on first use and memoized.
class ModelScorer {
 public:
  ModelScorer(const Model& model, const MentionFeatureCache& cache)
      : model_(&model), unary_(model.types.size(), 0.0) {
    const auto& ts = model.types;
    for (TypeIndex t = 0; t < ts.size(); ++t) {
      const auto& name = ts.name(t);
      double s = model.weight(features::bias(name));
      for (const auto& f : cache.features)
        s += f.value * model.weight(features::conjunction(name, f.text));
      unary_[t] = s;
    }
  }

  std::size_t num_types() const { return unary_.size(); }

  double unary(TypeIndex t) const {
    if (t >= unary_.size()) throw index_error("type index out of range");
    return unary_[t];
  }

  double pair(TypeIndex a, TypeIndex b) const {
    const std::size_t n = unary_.size();
    if (a >= n || b >= n) throw index_error("type index out of range");
    if (pair_.empty()) pair_.assign(n * n, std::numeric_limits<double>::quiet_NaN());
    double& slot = pair_[a * n + b];
    if (std::isnan(slot)) {
      double s = 0.0;
      for (const auto& f : pair_features(a, b, model_->types, model_->features))
        s += model_->weight(f);
      slot = s;
      pair_[b * n + a] = s;
    }
    return slot;
  }

  double size_term(std::size_t n) const {
    if (n == 0 || !model_->features.use_set_size_feature) return 0.0;
    return model_->weight(features::set_size(n));
  }

  const std::vector<double>& unary_scores() const { return unary_; }

 private:
  const Model* model_;
  std::vector<double> unary_;
  mutable std::vector<double> pair_;
};

inline double score_set(const Model& model, const MentionFeatureCache& cache, const TypeSet& set) {
  return score_set(ModelScorer(model, cache), set);
}

inline double marginal_gain(const Model& model, const MentionFeatureCache& cache,
                            const TypeSet& current, TypeIndex candidate) {
  return marginal_gain(ModelScorer(model, cache), current, candidate);
}

}  // namespace settype
