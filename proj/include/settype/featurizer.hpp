#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "settype/error.hpp"
#include "settype/mention.hpp"
#include "settype/sparse_vector.hpp"
#include "settype/type_system.hpp"

namespace settype {

struct FeaturizerConfig {
  std::size_t context_window = 2;
  bool use_bigrams = true;
  bool use_dependency = true;
  bool use_shape = true;
  bool use_pair_features = true;
  bool use_graph_features = false;
  bool use_set_size_feature = false;

  friend bool operator==(const FeaturizerConfig&, const FeaturizerConfig&) = default;
};

/// A type-independent feature with its firing count.
struct WeightedFeature {
  std::string text;
  double value = 1.0;

  friend bool operator==(const WeightedFeature&, const WeightedFeature&) = default;
};

/// Mention features for one mention, merged by text and sorted.
struct MentionFeatureCache {
  std::vector<WeightedFeature> features;

  bool contains(const std::string& text) const {
    return std::any_of(features.begin(), features.end(),
                       [&](const WeightedFeature& f) { return f.text == text; });
  }
  double count(const std::string& text) const {
    for (const auto& f : features)
      if (f.text == text) return f.value;
    return 0.0;
  }
};

/// Case/digit shape with adjacent repeats collapsed: "B-52s" -> "Xodx".
inline std::string word_shape(const std::string& token) {
  if (token.empty()) throw contract_error("word_shape of empty token");
  std::string shape;
  for (unsigned char c : token) {
    char cls;
    if (c >= 'A' && c <= 'Z')
      cls = 'X';
    else if (c >= 'a' && c <= 'z')
      cls = 'x';
    else if (c >= '0' && c <= '9')
      cls = 'd';
    else
      cls = 'o';
    if (shape.empty() || shape.back() != cls) shape.push_back(cls);
  }
  return shape;
}

inline MentionFeatureCache extract_mention_features(const Mention& mention,
                                                    const FeaturizerConfig& config) {
  mention.validate();
  std::map<std::string, double> counts;
  const auto& tok = mention.tokens;
  const std::size_t n = tok.size();
  const std::size_t w = config.context_window;

  // Context on each side, never crossing into the span.
  auto context = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      counts["CU=" + tok[i]] += 1.0;
      if (config.use_bigrams && i + 1 < hi) counts["CB=" + tok[i] + "_" + tok[i + 1]] += 1.0;
    }
  };
  context(mention.span_start >= w ? mention.span_start - w : 0, mention.span_start);
  context(mention.span_end, std::min(n, mention.span_end + w));

  const std::size_t head = mention.head_index;
  if (config.use_dependency) {
    const int parent = mention.dep_parent[head];
    if (parent >= 0) {
      counts["DP=" + tok[static_cast<std::size_t>(parent)]] += 1.0;
      counts["DPL=" + mention.dep_label[head]] += 1.0;
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (mention.dep_parent[j] == static_cast<int>(head)) {
        counts["DC=" + tok[j]] += 1.0;
        counts["DCL=" + mention.dep_label[j]] += 1.0;
      }
    }
  }

  counts["HD=" + tok[head]] += 1.0;
  for (std::size_t i = mention.span_start; i < mention.span_end; ++i) {
    if (i != head) counts["NH=" + tok[i]] += 1.0;
    if (config.use_shape) counts["SH=" + word_shape(tok[i])] += 1.0;
  }

  MentionFeatureCache cache;
  cache.features.reserve(counts.size());
  for (auto& [text, value] : counts) cache.features.push_back({text, value});
  return cache;
}

namespace features {

inline std::string conjunction(const std::string& type_name, const std::string& mention_feature) {
  return "CJ=" + type_name + "|" + mention_feature;
}

inline std::string bias(const std::string& type_name) { return "CJ=" + type_name + "|BIAS"; }

inline std::string type_pair(const std::string& a, const std::string& b) {
  return a < b ? "TP=" + a + "|" + b : "TP=" + b + "|" + a;
}

inline const std::string kParentChild = "GP=PARENT_CHILD";
inline const std::string kSiblings = "GP=SIBLINGS";
inline const std::string kUnrelated = "GP=UNRELATED";

inline std::string set_size(std::size_t n) {
  return n >= 10 ? std::string("SZ=10+") : "SZ=" + std::to_string(n);
}

}  // namespace features

/// One conjunction per cached mention feature plus the type's bias.
inline std::vector<WeightedFeature> conjunction_features(const MentionFeatureCache& cache,
                                                         TypeIndex t, const TypeSystem& ts) {
  const auto& name = ts.name(t);
  std::vector<WeightedFeature> out;
  out.reserve(cache.features.size() + 1);
  for (const auto& f : cache.features) out.push_back({features::conjunction(name, f.text), f.value});
  out.push_back({features::bias(name), 1.0});
  return out;
}

inline std::vector<std::string> type_pair_features(TypeIndex a, TypeIndex b, const TypeSystem& ts) {
  if (a == b) throw contract_error("type pair feature needs two distinct types");
  return {features::type_pair(ts.name(a), ts.name(b))};
}

inline bool share_parent(TypeIndex a, TypeIndex b, const TypeSystem& ts) {
  const auto& pa = ts.parents(a);
  const auto& pb = ts.parents(b);
  auto i = pa.begin(), j = pb.begin();
  while (i != pa.end() && j != pb.end()) {
    if (*i < *j)
      ++i;
    else if (*j < *i)
      ++j;
    else
      return true;
  }
  return false;
}

/// Type-abstracted structural patterns between two types.
inline std::vector<std::string> graph_pattern_features(TypeIndex a, TypeIndex b,
                                                       const TypeSystem& ts) {
  if (a == b) throw contract_error("graph pattern feature needs two distinct types");
  std::vector<std::string> out;
  if (ts.has_edge(a, b) || ts.has_edge(b, a)) out.push_back(features::kParentChild);
  if (share_parent(a, b, ts)) out.push_back(features::kSiblings);
  if (out.empty()) out.push_back(features::kUnrelated);
  return out;
}

/// Pair-level features that the config enables for an unordered pair.
inline std::vector<std::string> pair_features(TypeIndex a, TypeIndex b, const TypeSystem& ts,
                                              const FeaturizerConfig& config) {
  std::vector<std::string> out;
  if (config.use_pair_features)
    for (auto& f : type_pair_features(a, b, ts)) out.push_back(std::move(f));
  if (config.use_graph_features)
    for (auto& f : graph_pattern_features(a, b, ts)) out.push_back(std::move(f));
  return out;
}

/// phi(x, e, T): conjunctions per member, pair features per unordered member
/// pair, and optionally a cardinality indicator (never for the empty set).
inline FeatureVector joint_features(const MentionFeatureCache& cache, const TypeSet& set,
                                    const TypeSystem& ts, const FeaturizerConfig& config) {
  ts.check(set);
  FeatureVector phi;
  const auto& m = set.members();
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (const auto& f : conjunction_features(cache, m[i], ts)) phi.add(f.text, f.value);
    for (std::size_t j = i + 1; j < m.size(); ++j)
      for (const auto& f : pair_features(m[i], m[j], ts, config)) phi.add(f, 1.0);
  }
  if (config.use_set_size_feature && !set.empty()) phi.add(features::set_size(set.size()), 1.0);
  return phi;
}

inline FeatureVector joint_features(const Mention& mention, const TypeSet& set,
                                    const TypeSystem& ts, const FeaturizerConfig& config) {
  return joint_features(extract_mention_features(mention, config), set, ts, config);
}

}  // namespace settype
