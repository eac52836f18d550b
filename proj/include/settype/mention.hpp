#pragma once

#include <string>
#include <vector>

#include "settype/error.hpp"
#include "settype/type_system.hpp"

namespace settype {

/// A tokenized sentence with one entity span and its dependency parse.
struct Mention {
  std::vector<std::string> tokens;
  std::size_t span_start = 0;
  std::size_t span_end = 0;  // exclusive
  std::size_t head_index = 0;
  std::vector<int> dep_parent;  // -1 for root
  std::vector<std::string> dep_label;
  std::string entity_id;
  std::string sentence_id;

  /// Throws index_error when offsets or the parse are inconsistent.
  void validate() const {
    const auto n = tokens.size();
    if (!(span_start < span_end && span_end <= n))
      throw index_error("mention span [" + std::to_string(span_start) + "," +
                        std::to_string(span_end) + ") invalid for " + std::to_string(n) +
                        " tokens");
    if (!(span_start <= head_index && head_index < span_end))
      throw index_error("head index " + std::to_string(head_index) + " outside span");
    if (dep_parent.size() != n || dep_label.size() != n)
      throw index_error("dependency parse must have one entry per token");
    for (int p : dep_parent)
      if (p < -1 || p >= static_cast<int>(n))
        throw index_error("dependency parent " + std::to_string(p) + " out of range");
  }

  /// Flat parse: every token is a root with label "_".
  static Mention flat(std::vector<std::string> tokens, std::size_t start, std::size_t end,
                      std::size_t head, std::string entity, std::string sentence = {}) {
    Mention m;
    m.dep_parent.assign(tokens.size(), -1);
    m.dep_label.assign(tokens.size(), "_");
    m.tokens = std::move(tokens);
    m.span_start = start;
    m.span_end = end;
    m.head_index = head;
    m.entity_id = std::move(entity);
    m.sentence_id = std::move(sentence);
    return m;
  }
};

struct Example {
  Mention mention;
  TypeSet gold;
};

}  // namespace settype
