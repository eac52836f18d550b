#pragma once

#include <algorithm>
#include <iterator>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "settype/error.hpp"

namespace settype {

using TypeIndex = std::uint32_t;

/// Sorted, duplicate-free set of type indices.
class TypeSet {
 public:
  using const_iterator = std::vector<TypeIndex>::const_iterator;

  TypeSet() = default;
  TypeSet(std::initializer_list<TypeIndex> members) : members_(members) { normalize(); }
  explicit TypeSet(std::vector<TypeIndex> members) : members_(std::move(members)) {
    normalize();
  }

  bool contains(TypeIndex t) const {
    return std::binary_search(members_.begin(), members_.end(), t);
  }

  /// Returns false if `t` was already present.
  bool insert(TypeIndex t) {
    auto it = std::lower_bound(members_.begin(), members_.end(), t);
    if (it != members_.end() && *it == t) return false;
    members_.insert(it, t);
    return true;
  }

  bool erase(TypeIndex t) {
    auto it = std::lower_bound(members_.begin(), members_.end(), t);
    if (it == members_.end() || *it != t) return false;
    members_.erase(it);
    return true;
  }

  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  const_iterator begin() const { return members_.begin(); }
  const_iterator end() const { return members_.end(); }
  const std::vector<TypeIndex>& members() const { return members_; }
  TypeIndex max_member() const { return members_.back(); }

  std::size_t intersection_size(const TypeSet& other) const {
    std::size_t n = 0;
    auto a = members_.begin(), b = other.members_.begin();
    while (a != members_.end() && b != other.members_.end()) {
      if (*a < *b) {
        ++a;
      } else if (*b < *a) {
        ++b;
      } else {
        ++n;
        ++a;
        ++b;
      }
    }
    return n;
  }

  TypeSet united(const TypeSet& other) const {
    TypeSet out;
    std::set_union(members_.begin(), members_.end(), other.members_.begin(),
                   other.members_.end(), std::back_inserter(out.members_));
    return out;
  }

  friend bool operator==(const TypeSet&, const TypeSet&) = default;
  friend auto operator<=>(const TypeSet& a, const TypeSet& b) {
    return a.members_ <=> b.members_;
  }

 private:
  void normalize() {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  }

  std::vector<TypeIndex> members_;
};

/// Inventory of projected types plus a directed graph over them.
class TypeSystem {
 public:
  using Edge = std::pair<TypeIndex, TypeIndex>;

  TypeSystem() = default;

  explicit TypeSystem(const std::vector<std::string>& names,
                      const std::vector<Edge>& edges = {}) {
    for (const auto& name : names) add_type(name);
    for (const auto& [parent, child] : edges) add_edge(parent, child);
  }

  TypeIndex add_type(const std::string& name) {
    if (name.empty()) throw contract_error("type name must be non-empty");
    if (by_name_.count(name)) throw contract_error("duplicate type name: " + name);
    auto index = static_cast<TypeIndex>(names_.size());
    names_.push_back(name);
    by_name_.emplace(name, index);
    parents_.emplace_back();
    children_.emplace_back();
    return index;
  }

  /// Returns false for an existing edge.
  bool add_edge(TypeIndex parent, TypeIndex child) {
    check(parent);
    check(child);
    if (parent == child) throw contract_error("self-loop edge on type " + names_[parent]);
    if (!edges_.emplace(parent, child).second) return false;
    insert_sorted(children_[parent], child);
    insert_sorted(parents_[child], parent);
    return true;
  }

  std::size_t size() const { return names_.size(); }
  bool empty() const { return names_.empty(); }

  const std::string& name(TypeIndex t) const {
    check(t);
    return names_[t];
  }

  const std::vector<std::string>& names() const { return names_; }

  std::optional<TypeIndex> find(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
  }

  TypeIndex index_of(const std::string& name) const {
    auto t = find(name);
    if (!t) throw lookup_error("unknown type: " + name);
    return *t;
  }

  const std::set<Edge>& edges() const { return edges_; }
  bool has_edge(TypeIndex parent, TypeIndex child) const {
    return edges_.count({parent, child}) != 0;
  }
  const std::vector<TypeIndex>& parents(TypeIndex t) const {
    check(t);
    return parents_[t];
  }
  const std::vector<TypeIndex>& children(TypeIndex t) const {
    check(t);
    return children_[t];
  }

  /// Raw category name -> projected type, filled by the corpus builder.
  std::map<std::string, TypeIndex>& raw_to_projected() { return raw_to_projected_; }
  const std::map<std::string, TypeIndex>& raw_to_projected() const {
    return raw_to_projected_;
  }

  void check(TypeIndex t) const {
    if (t >= names_.size())
      throw index_error("type index " + std::to_string(t) + " out of range (" +
                        std::to_string(names_.size()) + " types)");
  }

  void check(const TypeSet& set) const {
    if (!set.empty()) check(set.max_member());
  }

  /// Same names in the same order and the same edges.
  friend bool operator==(const TypeSystem& a, const TypeSystem& b) {
    return a.names_ == b.names_ && a.edges_ == b.edges_;
  }

 private:
  static void insert_sorted(std::vector<TypeIndex>& v, TypeIndex t) {
    v.insert(std::lower_bound(v.begin(), v.end(), t), t);
  }

  std::vector<std::string> names_;
  std::unordered_map<std::string, TypeIndex> by_name_;
  std::set<Edge> edges_;
  std::vector<std::vector<TypeIndex>> parents_;
  std::vector<std::vector<TypeIndex>> children_;
  std::map<std::string, TypeIndex> raw_to_projected_;
};

}  // namespace settype
