#pragma once

#include <map>
#include <string>
#include <vector>

#include "settype/anchors.hpp"
#include "settype/corpus_io.hpp"
#include "settype/mention.hpp"
#include "settype/type_builder.hpp"

namespace settype {

struct CorpusBuildReport {
  std::size_t lines = 0;
  std::size_t skipped_lines = 0;  // unbalanced link markup
  std::size_t candidates = 0;
  std::map<FilterReason, std::size_t> filtered;
  std::size_t untyped = 0;  // no surviving category for the entity
  std::size_t examples = 0;
};

/// Anchor-text mentions from simplified wikitext lines.
inline std::vector<Mention> mentions_from_sentences(const std::vector<SentenceLine>& lines,
                                                    CorpusBuildReport& report) {
  std::vector<Mention> out;
  for (const auto& line : lines) {
    ++report.lines;
    auto parse = parse_anchor_links(line.wikitext);
    if (!parse) {
      ++report.skipped_lines;
      continue;
    }
    for (auto& m : anchor_mentions(*parse, line.sentence_id)) out.push_back(std::move(m));
  }
  return out;
}

/// Filters candidate mentions and attaches projected type sets; mentions of
/// entities without surviving categories are dropped.
inline std::vector<Example> build_corpus(
    const std::vector<Mention>& candidates,
    const std::map<std::string, std::vector<std::string>>& entity_categories,
    const TypeBuildResult& types, CorpusBuildReport& report, std::size_t max_depth = 0) {
  std::vector<Example> out;
  for (const auto& m : candidates) {
    ++report.candidates;
    auto reason = mention_filter(m);
    if (reason != FilterReason::kept) {
      ++report.filtered[reason];
      continue;
    }
    TypeSet gold;
    auto it = entity_categories.find(normalize_title(m.entity_id));
    if (it != entity_categories.end())
      gold = assign_types(it->second, types.filtered, types.types, max_depth);
    if (gold.empty()) {
      ++report.untyped;
      continue;
    }
    out.push_back({m, std::move(gold)});
  }
  report.examples = out.size();
  return out;
}

}  // namespace settype
