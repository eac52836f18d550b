#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace settype {

using FeatureKey = std::uint32_t;

/// Sparse real vector keyed by feature identifiers.
///
/// `Map` selects the storage: hashed for interned keys, ordered for feature
/// text (so iteration is deterministic). Missing entries read as zero.
template <class Key, class Map = std::unordered_map<Key, double>>
class BasicSparseVector {
 public:
  using key_type = Key;
  using map_type = Map;
  using const_iterator = typename Map::const_iterator;

  BasicSparseVector() = default;

  double get(const Key& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? 0.0 : it->second;
  }

  void set(const Key& key, double value) { entries_[key] = value; }

  void add(const Key& key, double value) { entries_[key] += value; }

  void erase(const Key& key) { entries_.erase(key); }

  /// this += scale * other
  void axpy(double scale, const BasicSparseVector& other) {
    for (const auto& [key, value] : other.entries_) entries_[key] += scale * value;
  }

  BasicSparseVector& operator+=(const BasicSparseVector& other) {
    axpy(1.0, other);
    return *this;
  }

  BasicSparseVector& operator-=(const BasicSparseVector& other) {
    axpy(-1.0, other);
    return *this;
  }

  void scale(double factor) {
    for (auto& entry : entries_) entry.second *= factor;
  }

  /// Drop explicit zeros.
  void canonicalize() {
    for (auto it = entries_.begin(); it != entries_.end();) {
      if (it->second == 0.0)
        it = entries_.erase(it);
      else
        ++it;
    }
  }

  /// Iterates the smaller operand and probes the larger.
  double dot(const BasicSparseVector& other) const {
    const auto& small = entries_.size() <= other.entries_.size() ? *this : other;
    const auto& large = &small == this ? other : *this;
    double sum = 0.0;
    for (const auto& [key, value] : small.entries_) sum += value * large.get(key);
    return sum;
  }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  bool contains(const Key& key) const { return entries_.find(key) != entries_.end(); }

  const_iterator begin() const { return entries_.begin(); }
  const_iterator end() const { return entries_.end(); }
  const Map& entries() const { return entries_; }

  /// Entries sorted by key.
  std::vector<std::pair<Key, double>> sorted_entries() const {
    std::vector<std::pair<Key, double>> out(entries_.begin(), entries_.end());
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
  }

  friend bool operator==(const BasicSparseVector& a, const BasicSparseVector& b) {
    auto x = a, y = b;
    x.canonicalize();
    y.canonicalize();
    return x.entries_ == y.entries_;
  }

 private:
  Map entries_;
};

template <class Key, class Map>
BasicSparseVector<Key, Map> operator+(BasicSparseVector<Key, Map> a,
                                      const BasicSparseVector<Key, Map>& b) {
  a += b;
  return a;
}

template <class Key, class Map>
BasicSparseVector<Key, Map> operator-(BasicSparseVector<Key, Map> a,
                                      const BasicSparseVector<Key, Map>& b) {
  a -= b;
  return a;
}

/// Weight and gradient vectors over interned keys.
using SparseVector = BasicSparseVector<FeatureKey>;

/// Feature vectors before interning; ordered so output is reproducible.
using FeatureVector = BasicSparseVector<std::string, std::map<std::string, double>>;

}  // namespace settype
