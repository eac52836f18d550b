#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "settype/error.hpp"
#include "settype/featurizer.hpp"
#include "settype/loss.hpp"
#include "settype/mention.hpp"
#include "settype/model.hpp"
#include "settype/scoring.hpp"
#include "settype/type_system.hpp"

namespace settype {

struct DecodeResult {
  TypeSet set;
  double score = 0.0;                     // model score of `set`
  std::optional<double> augmented_score;  // score + loss, when loss-augmented
};

/// Undirected adjacency over type indices.
class ConstraintGraph {
 public:
  explicit ConstraintGraph(std::size_t n = 0) : adjacent_(n, std::vector<bool>(n, false)) {}

  static ConstraintGraph complete(std::size_t n) {
    ConstraintGraph g(n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) g.adjacent_[a][b] = a != b;
    return g;
  }

  /// Undirected view of the type hierarchy.
  static ConstraintGraph from_type_system(const TypeSystem& ts) {
    ConstraintGraph g(ts.size());
    for (const auto& [parent, child] : ts.edges()) g.connect(parent, child);
    return g;
  }

  static ConstraintGraph from_edges(std::size_t n,
                                    const std::vector<std::pair<TypeIndex, TypeIndex>>& edges) {
    ConstraintGraph g(n);
    for (const auto& [a, b] : edges) g.connect(a, b);
    return g;
  }

  void connect(TypeIndex a, TypeIndex b) {
    check(a);
    check(b);
    if (a == b) return;
    adjacent_[a][b] = adjacent_[b][a] = true;
  }

  bool adjacent(TypeIndex a, TypeIndex b) const {
    check(a);
    check(b);
    return adjacent_[a][b];
  }

  std::size_t size() const { return adjacent_.size(); }

  /// The empty set and singletons count as connected.
  bool is_connected(const TypeSet& set) const {
    if (set.size() <= 1) return true;
    const auto& m = set.members();
    std::vector<bool> seen(m.size(), false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    std::size_t reached = 1;
    while (!stack.empty()) {
      auto i = stack.back();
      stack.pop_back();
      for (std::size_t j = 0; j < m.size(); ++j) {
        if (!seen[j] && adjacent(m[i], m[j])) {
          seen[j] = true;
          ++reached;
          stack.push_back(j);
        }
      }
    }
    return reached == m.size();
  }

 private:
  void check(TypeIndex t) const {
    if (t >= adjacent_.size()) throw index_error("constraint graph vertex out of range");
  }

  std::vector<std::vector<bool>> adjacent_;
};

/// Type pairs that co-occur in at least `min_count` gold sets, as (a < b).
inline std::vector<std::pair<TypeIndex, TypeIndex>> cooccurrence_pairs(
    const std::vector<Example>& examples, std::size_t min_count = 1) {
  std::map<std::pair<TypeIndex, TypeIndex>, std::size_t> counts;
  for (const auto& ex : examples) {
    const auto& m = ex.gold.members();
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = i + 1; j < m.size(); ++j) ++counts[{m[i], m[j]}];
  }
  std::vector<std::pair<TypeIndex, TypeIndex>> out;
  for (const auto& [pair, count] : counts)
    if (count >= std::max<std::size_t>(min_count, 1)) out.push_back(pair);
  return out;
}

namespace detail {

/// Running set-F1 loss against a fixed gold set.
class LossTracker {
 public:
  explicit LossTracker(const TypeSet* gold) : gold_(gold) {}

  bool active() const { return gold_ != nullptr; }

  double loss(std::size_t size, std::size_t hits) const {
    return gold_ ? set_f1_loss(hits, size, gold_->size()) : 0.0;
  }
  double current() const { return loss(size_, hits_); }
  double after_adding(TypeIndex t) const {
    return loss(size_ + 1, hits_ + (gold_ && gold_->contains(t) ? 1 : 0));
  }
  void add(TypeIndex t) {
    ++size_;
    if (gold_ && gold_->contains(t)) ++hits_;
  }

 private:
  const TypeSet* gold_;
  std::size_t size_ = 0;
  std::size_t hits_ = 0;
};

template <Scorer S>
DecodeResult finish(const S& scorer, TypeSet set, const TypeSet* loss_gold) {
  DecodeResult r;
  r.score = score_set(scorer, set);
  if (loss_gold) r.augmented_score = r.score + set_f1_loss(set, *loss_gold);
  r.set = std::move(set);
  return r;
}

/// Shared greedy loop. With `graph` set, additions after the first type must
/// be adjacent to a current member.
template <Scorer S>
DecodeResult greedy(const S& scorer, const ConstraintGraph* graph, const TypeSet* loss_gold,
                    std::size_t max_set_size) {
  const std::size_t n = scorer.num_types();
  if (graph && graph->size() != n)
    throw contract_error("constraint graph does not match the type system");
  if (loss_gold) check_set(scorer, *loss_gold);
  LossTracker loss(loss_gold);
  TypeSet set;
  if (n == 0) return finish(scorer, set, loss_gold);

  // Best singleton by objective; lowest index wins ties.
  const double empty_objective = loss.current();
  std::optional<TypeIndex> best;
  double best_objective = 0.0;
  for (TypeIndex t = 0; t < n; ++t) {
    const double objective = scorer.unary(t) + scorer.size_term(1) + loss.after_adding(t);
    if (!best || objective > best_objective) {
      best = t;
      best_objective = objective;
    }
  }
  if (best_objective < empty_objective) return finish(scorer, set, loss_gold);
  set.insert(*best);
  loss.add(*best);

  std::vector<bool> frontier(n, graph == nullptr);
  auto expand = [&](TypeIndex added) {
    if (!graph) return;
    for (TypeIndex t = 0; t < n; ++t)
      if (graph->adjacent(added, t)) frontier[t] = true;
  };
  expand(*best);

  while (max_set_size == 0 || set.size() < max_set_size) {
    std::optional<TypeIndex> pick;
    double pick_gain = 0.0;
    const double current_loss = loss.current();
    for (TypeIndex t = 0; t < n; ++t) {
      if (!frontier[t] || set.contains(t)) continue;
      const double gain = marginal_gain(scorer, set, t) + loss.after_adding(t) - current_loss;
      if (gain > pick_gain) {
        pick = t;
        pick_gain = gain;
      }
    }
    if (!pick) break;
    set.insert(*pick);
    loss.add(*pick);
    expand(*pick);
  }
  return finish(scorer, std::move(set), loss_gold);
}

}  // namespace detail

/// Every type whose unary score reaches `r`; pair and size terms are ignored.
template <Scorer S>
DecodeResult decode_threshold(const S& scorer, double r) {
  TypeSet set;
  for (TypeIndex t = 0; t < scorer.num_types(); ++t)
    if (scorer.unary(t) >= r) set.insert(t);
  return detail::finish(scorer, std::move(set), nullptr);
}

/// Greedy set growth from the best singleton while the objective improves.
/// With `loss_gold`, the objective is score + set-F1 loss against it.
template <Scorer S>
DecodeResult decode_greedy(const S& scorer, const TypeSet* loss_gold = nullptr,
                           std::size_t max_set_size = 0) {
  return detail::greedy(scorer, nullptr, loss_gold, max_set_size);
}

/// Greedy growth restricted to sets connected in `graph`.
template <Scorer S>
DecodeResult decode_connected(const S& scorer, const ConstraintGraph& graph,
                              const TypeSet* loss_gold = nullptr, std::size_t max_set_size = 0) {
  return detail::greedy(scorer, &graph, loss_gold, max_set_size);
}

inline constexpr std::size_t kMaxExactTypes = 20;

/// Exhaustive argmax over all subsets (connected subsets if `graph` is set).
/// Ties go to the lexicographically smallest member list. Test oracle only.
template <Scorer S>
DecodeResult decode_exact(const S& scorer, const TypeSet* loss_gold = nullptr,
                          std::size_t max_types = kMaxExactTypes,
                          const ConstraintGraph* graph = nullptr, std::size_t max_set_size = 0) {
  const std::size_t n = scorer.num_types();
  if (max_types > kMaxExactTypes) max_types = kMaxExactTypes;
  if (n > max_types)
    throw capacity_error("exact decoding over " + std::to_string(n) + " types exceeds limit of " +
                         std::to_string(max_types));
  if (loss_gold) check_set(scorer, *loss_gold);
  if (graph && graph->size() != n)
    throw contract_error("constraint graph does not match the type system");

  TypeSet best_set;
  double best_objective = loss_gold ? set_f1_loss(best_set, *loss_gold) : 0.0;
  const std::uint32_t limit = std::uint32_t{1} << n;
  std::vector<TypeIndex> members;
  for (std::uint32_t mask = 1; mask < limit; ++mask) {
    members.clear();
    for (TypeIndex t = 0; t < n; ++t)
      if (mask & (std::uint32_t{1} << t)) members.push_back(t);
    if (max_set_size != 0 && members.size() > max_set_size) continue;
    TypeSet set(members);
    if (graph && !graph->is_connected(set)) continue;
    double objective = score_set(scorer, set);
    if (loss_gold) objective += set_f1_loss(set, *loss_gold);
    if (objective > best_objective || (objective == best_objective && set < best_set)) {
      best_objective = objective;
      best_set = std::move(set);
    }
  }
  return detail::finish(scorer, std::move(best_set), loss_gold);
}

/// Constraint graph selected by the model's decoder configuration.
inline ConstraintGraph constraint_graph(const Model& model) {
  switch (model.decoder.graph) {
    case GraphKind::type: return ConstraintGraph::from_type_system(model.types);
    case GraphKind::cooccur:
      return ConstraintGraph::from_edges(model.types.size(), model.cooccurrence);
    case GraphKind::complete: return ConstraintGraph::complete(model.types.size());
  }
  return ConstraintGraph::complete(model.types.size());
}

/// Decodes with the model's configured decoder. `graph` must come from
/// constraint_graph(model) when the mode is connected.
inline DecodeResult decode(const Model& model, const MentionFeatureCache& cache,
                           const ConstraintGraph* graph = nullptr,
                           const TypeSet* loss_gold = nullptr) {
  ModelScorer scorer(model, cache);
  switch (model.decoder.mode) {
    case DecoderMode::threshold: return decode_threshold(scorer, model.decoder.threshold);
    case DecoderMode::connected: {
      if (graph) return decode_connected(scorer, *graph, loss_gold, model.decoder.max_set_size);
      const auto g = constraint_graph(model);
      return decode_connected(scorer, g, loss_gold, model.decoder.max_set_size);
    }
    case DecoderMode::greedy: break;
  }
  return decode_greedy(scorer, loss_gold, model.decoder.max_set_size);
}

inline TypeSet predict(const Model& model, const Mention& mention,
                       const ConstraintGraph* graph = nullptr) {
  return decode(model, extract_mention_features(mention, model.features), graph).set;
}

}  // namespace settype
