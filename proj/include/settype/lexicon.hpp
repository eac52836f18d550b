#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "settype/error.hpp"

namespace settype {

/// Noun lemmas, direct hypernyms, and inflection rules: the slice of a
/// WordNet-like resource the type-system builder needs.
class LexicalResource {
 public:
  struct SuffixRule {
    std::string suffix;
    std::string replacement;
  };

  /// Noun detachment rules in the style of WordNet's morphy.
  static std::vector<SuffixRule> default_noun_rules() {
    return {{"ches", "ch"}, {"shes", "sh"}, {"ses", "s"}, {"xes", "x"}, {"zes", "z"},
            {"ies", "y"},   {"men", "man"}, {"s", ""}};
  }

  LexicalResource() : rules_(default_noun_rules()) {}

  void add_noun(const std::string& lemma) { nouns_.insert(lemma); }

  void add_hypernym(const std::string& lemma, const std::string& hypernym) {
    if (!is_noun(lemma) || !is_noun(hypernym))
      throw lookup_error("hypernym pair uses unknown lemma: " + lemma + " -> " + hypernym);
    auto& list = hypernyms_[lemma];
    if (std::find(list.begin(), list.end(), hypernym) == list.end()) list.push_back(hypernym);
  }

  void add_exception(const std::string& surface, const std::string& lemma) {
    auto [it, inserted] = exceptions_.emplace(surface, lemma);
    if (!inserted && it->second != lemma)
      throw format_error("exception '" + surface + "' maps to two lemmas");
  }

  void set_suffix_rules(std::vector<SuffixRule> rules) { rules_ = std::move(rules); }

  bool is_noun(const std::string& lemma) const { return nouns_.count(lemma) != 0; }
  std::size_t noun_count() const { return nouns_.size(); }

  const std::vector<std::string>& hypernyms(const std::string& lemma) const {
    static const std::vector<std::string> none;
    auto it = hypernyms_.find(lemma);
    return it == hypernyms_.end() ? none : it->second;
  }

  /// Exceptions first, then the word itself, then suffix rules; every
  /// candidate must be a known noun lemma.
  std::optional<std::string> lemmatize(const std::string& word) const {
    if (auto it = exceptions_.find(word); it != exceptions_.end()) return it->second;
    if (is_noun(word)) return word;
    for (const auto& rule : rules_) {
      if (word.size() <= rule.suffix.size()) continue;
      if (word.compare(word.size() - rule.suffix.size(), rule.suffix.size(), rule.suffix) != 0)
        continue;
      std::string candidate = word.substr(0, word.size() - rule.suffix.size()) + rule.replacement;
      if (is_noun(candidate)) return candidate;
    }
    return std::nullopt;
  }

  /// True iff `ancestor` equals `lemma` or is reachable from it through
  /// direct hypernym links.
  bool is_ancestor(const std::string& ancestor, const std::string& lemma) const {
    if (!is_noun(ancestor)) throw lookup_error("unknown lemma: " + ancestor);
    if (!is_noun(lemma)) throw lookup_error("unknown lemma: " + lemma);
    if (ancestor == lemma) return true;
    std::unordered_set<std::string> seen{lemma};
    std::vector<std::string> stack{lemma};
    while (!stack.empty()) {
      auto current = std::move(stack.back());
      stack.pop_back();
      for (const auto& up : hypernyms(current)) {
        if (up == ancestor) return true;
        if (seen.insert(up).second) stack.push_back(up);
      }
    }
    return false;
  }

 private:
  std::set<std::string> nouns_;
  std::unordered_map<std::string, std::vector<std::string>> hypernyms_;
  std::map<std::string, std::string> exceptions_;
  std::vector<SuffixRule> rules_;
};

inline bool wordnet_is_ancestor(const std::string& ancestor, const std::string& lemma,
                                const LexicalResource& lex) {
  return lex.is_ancestor(ancestor, lemma);
}

namespace detail {

inline std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

inline bool is_function_word(const std::string& token) {
  static const std::set<std::string> words{"of",  "from", "in",  "by",    "for",
                                           "to",  "at",   "who", "which", "with"};
  return words.count(lowercase(token)) != 0;
}

inline std::vector<std::string> split_name(std::string_view name) {
  std::vector<std::string> out;
  std::string current;
  for (char c : name) {
    if (c == '_' || c == ' ') {
      if (!current.empty()) out.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

/// Tokens before the first function word.
inline std::vector<std::string> head_prefix(std::vector<std::string> tokens) {
  auto it = std::find_if(tokens.begin(), tokens.end(), is_function_word);
  tokens.erase(it, tokens.end());
  return tokens;
}

}  // namespace detail

/// Projects a category name onto the lemma of its head word:
/// "Short_story_writers" -> "writer", "People_from_New_York" -> "people".
/// When no lemma is found the lowercased surface form is returned.
inline std::string syntactic_head(const std::string& category_name, const LexicalResource& lex) {
  auto tokens = detail::head_prefix(detail::split_name(category_name));
  if (tokens.empty()) throw lookup_error("no syntactic head in category '" + category_name + "'");
  auto word = detail::lowercase(tokens.back());
  if (auto lemma = lex.lemmatize(word)) return *lemma;
  return word;
}

}  // namespace settype
