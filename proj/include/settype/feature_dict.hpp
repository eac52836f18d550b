#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "settype/error.hpp"
#include "settype/sparse_vector.hpp"

namespace settype {

/// Bidirectional feature text <-> key interning table. Keys are dense and
/// assigned in first-seen order.
class FeatureDict {
 public:
  FeatureKey intern(const std::string& text) {
    auto [it, inserted] = keys_.try_emplace(text, static_cast<FeatureKey>(texts_.size()));
    if (inserted) texts_.push_back(text);
    return it->second;
  }

  std::optional<FeatureKey> find(const std::string& text) const {
    auto it = keys_.find(text);
    if (it == keys_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& text(FeatureKey key) const {
    if (key >= texts_.size()) throw index_error("feature key out of range");
    return texts_[key];
  }

  std::size_t size() const { return texts_.size(); }

  SparseVector intern_all(const FeatureVector& features) {
    SparseVector out;
    for (const auto& [text, value] : features) out.add(intern(text), value);
    return out;
  }

  /// Unknown features are dropped.
  SparseVector lookup_all(const FeatureVector& features) const {
    SparseVector out;
    for (const auto& [text, value] : features)
      if (auto key = find(text)) out.add(*key, value);
    return out;
  }

 private:
  std::unordered_map<std::string, FeatureKey> keys_;
  std::vector<std::string> texts_;
};

}  // namespace settype
