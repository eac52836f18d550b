#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "settype/error.hpp"
#include "settype/mention.hpp"
#include "settype/type_system.hpp"

namespace settype {

struct EvalRecord {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

inline double harmonic_f1(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

/// Set precision/recall/F1. Empty vs empty is perfect; one empty side scores 0.
inline EvalRecord prf(const TypeSet& predicted, const TypeSet& gold) {
  if (predicted.empty() && gold.empty()) return {1.0, 1.0, 1.0};
  if (predicted.empty() || gold.empty()) return {0.0, 0.0, 0.0};
  const double hits = static_cast<double>(predicted.intersection_size(gold));
  EvalRecord r;
  r.precision = hits / static_cast<double>(predicted.size());
  r.recall = hits / static_cast<double>(gold.size());
  r.f1 = harmonic_f1(r.precision, r.recall);
  return r;
}

struct Prediction {
  const Example* example = nullptr;
  TypeSet predicted;
};

namespace detail {

inline EvalRecord macro_mean(const std::vector<EvalRecord>& records) {
  EvalRecord mean;
  for (const auto& r : records) {
    mean.precision += r.precision;
    mean.recall += r.recall;
    mean.f1 += r.f1;
  }
  const double n = static_cast<double>(records.size());
  mean.precision /= n;
  mean.recall /= n;
  mean.f1 /= n;
  return mean;
}

}  // namespace detail

/// Per-mention P/R/F1, averaged independently over mentions.
inline EvalRecord macro_sentence_eval(const std::vector<Prediction>& predictions) {
  detail::require(!predictions.empty(), "evaluation needs at least one prediction");
  std::vector<EvalRecord> records;
  records.reserve(predictions.size());
  for (const auto& p : predictions) records.push_back(prf(p.predicted, p.example->gold));
  return detail::macro_mean(records);
}

/// Per-entity P/R/F1 over the union of predictions and golds of the entity's
/// mentions, averaged over entities.
inline EvalRecord macro_entity_eval(const std::vector<Prediction>& predictions) {
  detail::require(!predictions.empty(), "evaluation needs at least one prediction");
  std::map<std::string, std::pair<TypeSet, TypeSet>> by_entity;
  for (const auto& p : predictions) {
    auto& [pred, gold] = by_entity[p.example->mention.entity_id];
    pred = pred.united(p.predicted);
    gold = gold.united(p.example->gold);
  }
  std::vector<EvalRecord> records;
  records.reserve(by_entity.size());
  for (const auto& [entity, sets] : by_entity) records.push_back(prf(sets.first, sets.second));
  return detail::macro_mean(records);
}

struct PerTypeRecord {
  TypeIndex type = 0;
  std::size_t frequency = 0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double f1 = 0.0;
};

/// Binary presence F1 per type from pooled counts, most frequent first.
inline std::vector<PerTypeRecord> per_type_micro_f1(const std::vector<Prediction>& predictions,
                                                    const std::vector<std::size_t>& train_frequencies) {
  std::vector<PerTypeRecord> records(train_frequencies.size());
  for (TypeIndex t = 0; t < records.size(); ++t) {
    records[t].type = t;
    records[t].frequency = train_frequencies[t];
  }
  auto record = [&](TypeIndex t) -> PerTypeRecord& {
    if (t >= records.size()) throw index_error("type frequencies do not cover type " + std::to_string(t));
    return records[t];
  };
  for (const auto& p : predictions) {
    const auto& gold = p.example->gold;
    for (TypeIndex t : p.predicted) {
      if (gold.contains(t))
        ++record(t).tp;
      else
        ++record(t).fp;
    }
    for (TypeIndex t : gold)
      if (!p.predicted.contains(t)) ++record(t).fn;
  }
  for (auto& r : records) {
    const auto denom = 2 * r.tp + r.fp + r.fn;
    r.f1 = denom == 0 ? 0.0 : 2.0 * static_cast<double>(r.tp) / static_cast<double>(denom);
  }
  std::stable_sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    return a.frequency > b.frequency;
  });
  return records;
}

/// Gold-set occurrence count per type.
inline std::vector<std::size_t> type_frequencies(const std::vector<Example>& examples,
                                                 std::size_t num_types) {
  std::vector<std::size_t> counts(num_types, 0);
  for (const auto& ex : examples)
    for (TypeIndex t : ex.gold) {
      if (t >= num_types) throw index_error("gold type out of range");
      ++counts[t];
    }
  return counts;
}

}  // namespace settype
