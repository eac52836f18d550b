#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "settype/error.hpp"
#include "settype/feature_dict.hpp"
#include "settype/featurizer.hpp"
#include "settype/sparse_vector.hpp"
#include "settype/type_system.hpp"

namespace settype {

enum class DecoderMode { greedy, connected, threshold };
enum class GraphKind { type, cooccur, complete };

inline std::string to_string(DecoderMode m) {
  switch (m) {
    case DecoderMode::greedy: return "greedy";
    case DecoderMode::connected: return "connected";
    case DecoderMode::threshold: return "threshold";
  }
  return "greedy";
}

inline std::string to_string(GraphKind g) {
  switch (g) {
    case GraphKind::type: return "type";
    case GraphKind::cooccur: return "cooccur";
    case GraphKind::complete: return "complete";
  }
  return "type";
}

inline DecoderMode parse_decoder_mode(const std::string& s) {
  if (s == "greedy") return DecoderMode::greedy;
  if (s == "connected") return DecoderMode::connected;
  if (s == "threshold") return DecoderMode::threshold;
  throw format_error("unknown decoder mode: " + s);
}

inline GraphKind parse_graph_kind(const std::string& s) {
  if (s == "type") return GraphKind::type;
  if (s == "cooccur") return GraphKind::cooccur;
  if (s == "complete") return GraphKind::complete;
  throw format_error("unknown constraint graph: " + s);
}

struct DecoderConfig {
  DecoderMode mode = DecoderMode::greedy;
  double threshold = 0.0;
  GraphKind graph = GraphKind::type;
  std::size_t max_set_size = 0;  // 0 = unlimited
  std::size_t min_cooccur = 1;

  friend bool operator==(const DecoderConfig&, const DecoderConfig&) = default;
};

/// Learned weights plus everything needed to featurize and decode.
struct Model {
  SparseVector weights;
  FeatureDict dict;
  TypeSystem types;
  FeaturizerConfig features;
  DecoderConfig decoder;
  /// Undirected training co-occurrence pairs (a < b); backs GraphKind::cooccur.
  std::vector<std::pair<TypeIndex, TypeIndex>> cooccurrence;

  double weight(const std::string& feature) const {
    auto key = dict.find(feature);
    return key ? weights.get(*key) : 0.0;
  }

  /// Interns on demand; used for tests and synthetic models.
  void set_weight(const std::string& feature, double value) {
    weights.set(dict.intern(feature), value);
  }

  double dot(const FeatureVector& phi) const {
    double sum = 0.0;
    for (const auto& [text, value] : phi) sum += value * weight(text);
    return sum;
  }
};

}  // namespace settype
