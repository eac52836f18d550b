#pragma once

#include <algorithm>
#include <map>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "settype/error.hpp"
#include "settype/lexicon.hpp"
#include "settype/mention.hpp"
#include "settype/type_system.hpp"

namespace settype {

/// Directed category graph, parent -> child.
class RawCategoryGraph {
 public:
  void add_category(const std::string& name) {
    if (name.empty()) throw contract_error("empty category name");
    categories_.insert(name);
  }

  bool add_edge(const std::string& parent, const std::string& child) {
    if (!contains(parent) || !contains(child))
      throw contract_error("edge endpoint is not a known category: " + parent + " -> " + child);
    if (!edges_.emplace(parent, child).second) return false;
    parents_[child].push_back(parent);
    return true;
  }

  bool contains(const std::string& name) const { return categories_.count(name) != 0; }
  const std::set<std::string>& categories() const { return categories_; }
  const std::set<std::pair<std::string, std::string>>& edges() const { return edges_; }

  const std::vector<std::string>& parents(const std::string& name) const {
    static const std::vector<std::string> none;
    auto it = parents_.find(name);
    return it == parents_.end() ? none : it->second;
  }

 private:
  std::set<std::string> categories_;
  std::set<std::pair<std::string, std::string>> edges_;
  std::map<std::string, std::vector<std::string>> parents_;
};

struct TypeBuildStats {
  std::size_t raw_categories = 0;
  std::size_t surviving_categories = 0;
  std::size_t projected_types = 0;
  std::size_t raw_edges = 0;
  std::size_t surviving_edges = 0;
  std::size_t projected_edges = 0;
};

struct TypeBuildResult {
  TypeSystem types;
  /// Surviving categories and edges; ancestor closure for type assignment
  /// runs over this graph.
  RawCategoryGraph filtered;
  std::map<std::string, std::string> heads;
  TypeBuildStats stats;
};

/// Filters categories to those with a noun head, keeps edges whose parent
/// head is a hypernym ancestor of the child head, and projects categories to
/// head lemmas. Types are ordered by name.
inline TypeBuildResult build_type_system(const RawCategoryGraph& graph, const LexicalResource& lex) {
  TypeBuildResult out;
  out.stats.raw_categories = graph.categories().size();
  out.stats.raw_edges = graph.edges().size();

  for (const auto& category : graph.categories()) {
    std::string head;
    try {
      head = syntactic_head(category, lex);
    } catch (const lookup_error&) {
      continue;
    }
    if (!lex.is_noun(head)) continue;
    out.heads.emplace(category, head);
    out.filtered.add_category(category);
  }
  out.stats.surviving_categories = out.heads.size();
  if (out.heads.empty()) throw pipeline_error("no category has a known noun head");

  for (const auto& [parent, child] : graph.edges()) {
    auto p = out.heads.find(parent), c = out.heads.find(child);
    if (p == out.heads.end() || c == out.heads.end()) continue;
    if (lex.is_ancestor(p->second, c->second)) out.filtered.add_edge(parent, child);
  }
  out.stats.surviving_edges = out.filtered.edges().size();

  std::set<std::string> names;
  for (const auto& [category, head] : out.heads) names.insert(head);
  for (const auto& name : names) out.types.add_type(name);
  for (const auto& [category, head] : out.heads)
    out.types.raw_to_projected()[category] = out.types.index_of(head);
  for (const auto& [parent, child] : out.filtered.edges()) {
    auto p = out.types.raw_to_projected().at(parent);
    auto c = out.types.raw_to_projected().at(child);
    if (p != c) out.types.add_edge(p, c);
  }
  out.stats.projected_types = out.types.size();
  out.stats.projected_edges = out.types.edges().size();
  return out;
}

/// Surviving categories of an entity plus all their ancestors in the
/// filtered graph, projected to types. `max_depth` 0 means unlimited.
inline TypeSet assign_types(const std::vector<std::string>& entity_categories,
                            const RawCategoryGraph& filtered, const TypeSystem& ts,
                            std::size_t max_depth = 0) {
  const auto& projection = ts.raw_to_projected();
  std::set<std::string> seen;
  std::vector<std::pair<std::string, std::size_t>> stack;
  for (const auto& c : entity_categories)
    if (projection.count(c) && seen.insert(c).second) stack.emplace_back(c, 0);
  TypeSet out;
  while (!stack.empty()) {
    auto [category, depth] = std::move(stack.back());
    stack.pop_back();
    out.insert(projection.at(category));
    if (max_depth != 0 && depth >= max_depth) continue;
    for (const auto& parent : filtered.parents(category))
      if (projection.count(parent) && seen.insert(parent).second)
        stack.emplace_back(parent, depth + 1);
  }
  return out;
}

/// Keeps the `k` most frequent types (ties by name), re-indexes them in
/// their original order, drops examples left without types, and then
/// samples at most `max_mentions` examples (0 keeps all). Sampled examples
/// stay in corpus order.
inline std::pair<std::vector<Example>, TypeSystem> restrict_and_sample(
    const std::vector<Example>& corpus, const TypeSystem& ts, std::size_t k,
    std::size_t max_mentions, std::uint64_t seed) {
  detail::require(k >= 1, "type restriction needs k >= 1");
  std::vector<std::size_t> freq(ts.size(), 0);
  for (const auto& ex : corpus)
    for (TypeIndex t : ex.gold) {
      ts.check(t);
      ++freq[t];
    }
  std::vector<TypeIndex> ranked(ts.size());
  std::iota(ranked.begin(), ranked.end(), TypeIndex{0});
  std::sort(ranked.begin(), ranked.end(), [&](TypeIndex a, TypeIndex b) {
    if (freq[a] != freq[b]) return freq[a] > freq[b];
    return ts.name(a) < ts.name(b);
  });
  if (ranked.size() > k) ranked.resize(k);
  std::sort(ranked.begin(), ranked.end());

  TypeSystem restricted;
  std::vector<std::optional<TypeIndex>> remap(ts.size());
  for (TypeIndex old : ranked) remap[old] = restricted.add_type(ts.name(old));
  for (const auto& [p, c] : ts.edges())
    if (remap[p] && remap[c]) restricted.add_edge(*remap[p], *remap[c]);
  for (const auto& [raw, t] : ts.raw_to_projected())
    if (remap[t]) restricted.raw_to_projected()[raw] = *remap[t];

  std::vector<Example> kept;
  for (const auto& ex : corpus) {
    std::vector<TypeIndex> members;
    for (TypeIndex t : ex.gold)
      if (remap[t]) members.push_back(*remap[t]);
    if (members.empty()) continue;
    kept.push_back({ex.mention, TypeSet(std::move(members))});
  }

  if (max_mentions != 0 && kept.size() > max_mentions) {
    std::vector<std::size_t> order(kept.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    order.resize(max_mentions);
    std::sort(order.begin(), order.end());
    std::vector<Example> sampled;
    sampled.reserve(max_mentions);
    for (auto i : order) sampled.push_back(std::move(kept[i]));
    kept = std::move(sampled);
  }
  return {std::move(kept), std::move(restricted)};
}

struct CorpusStats {
  std::size_t mentions = 0;
  std::size_t entities = 0;
  std::size_t types = 0;
  std::vector<std::size_t> type_counts;       // gold occurrences per type
  std::vector<std::size_t> set_size_counts;   // mentions per gold-set size

  /// P(|T| <= s) for s = 0 .. max size.
  std::vector<double> set_size_cdf() const {
    std::vector<double> cdf;
    std::size_t running = 0;
    for (auto c : set_size_counts) {
      running += c;
      cdf.push_back(mentions == 0 ? 0.0 : static_cast<double>(running) / static_cast<double>(mentions));
    }
    return cdf;
  }
};

inline CorpusStats corpus_stats(const std::vector<Example>& corpus, const TypeSystem& ts) {
  CorpusStats s;
  s.mentions = corpus.size();
  s.types = ts.size();
  s.type_counts.assign(ts.size(), 0);
  std::set<std::string> entities;
  for (const auto& ex : corpus) {
    entities.insert(ex.mention.entity_id);
    for (TypeIndex t : ex.gold) ++s.type_counts.at(t);
    if (s.set_size_counts.size() <= ex.gold.size()) s.set_size_counts.resize(ex.gold.size() + 1, 0);
    ++s.set_size_counts[ex.gold.size()];
  }
  s.entities = entities.size();
  return s;
}

}  // namespace settype
