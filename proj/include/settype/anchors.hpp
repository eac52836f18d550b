#pragma once

#include <algorithm>
#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "settype/lexicon.hpp"
#include "settype/mention.hpp"

namespace settype {

struct AnchorLink {
  std::string surface;
  std::string target;
  std::size_t begin = 0;  // byte offsets into AnchorParse::text
  std::size_t end = 0;
};

struct AnchorParse {
  std::string text;  // link markup stripped
  std::vector<AnchorLink> links;
};

namespace detail {

inline std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

/// Position of the "]]" closing the link opened at `open`, honoring nesting.
inline std::optional<std::size_t> matching_close(std::string_view line, std::size_t open) {
  int depth = 0;
  for (std::size_t i = open; i + 1 < line.size(); ++i) {
    if (line[i] == '[' && line[i + 1] == '[') {
      ++depth;
      ++i;
    } else if (line[i] == ']' && line[i + 1] == ']') {
      if (--depth == 0) return i;
      ++i;
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Wikipedia-style title key: underscores as spaces, trimmed, first letter
/// uppercased.
inline std::string normalize_title(std::string_view title) {
  std::string s(title);
  std::replace(s.begin(), s.end(), '_', ' ');
  s = detail::trim(s);
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

/// Extracts [[Target]] and [[Target|surface]] links from one line. Links
/// with a namespace ("File:", "Category:", ...) are removed along with their
/// text. Returns nullopt for unbalanced or nested markup.
inline std::optional<AnchorParse> parse_anchor_links(std::string_view line) {
  AnchorParse out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line.compare(i, 2, "]]") == 0) return std::nullopt;
    if (line.compare(i, 2, "[[") != 0) {
      out.text.push_back(line[i++]);
      continue;
    }
    auto close = detail::matching_close(line, i);
    if (!close) return std::nullopt;
    std::string_view inner = line.substr(i + 2, *close - i - 2);
    i = *close + 2;
    auto bar = inner.find('|');
    std::string_view target = inner.substr(0, bar);
    if (target.find(':') != std::string_view::npos) continue;
    if (inner.find("[[") != std::string_view::npos) return std::nullopt;
    std::string target_text = detail::trim(target.substr(0, target.find('#')));
    std::string surface =
        bar == std::string_view::npos ? detail::trim(target) : detail::trim(inner.substr(inner.rfind('|') + 1));
    if (target_text.empty() || surface.empty()) continue;
    AnchorLink link;
    link.begin = out.text.size();
    out.text += surface;
    link.end = out.text.size();
    link.surface = std::move(surface);
    link.target = std::move(target_text);
    out.links.push_back(std::move(link));
  }
  return out;
}

struct Token {
  std::string text;
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// Whitespace tokenization with edge punctuation split off.
inline std::vector<Token> tokenize(std::string_view text) {
  static constexpr std::string_view kPunct = ".,;:!?()\"'";
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    std::size_t b = i, e = j;
    std::vector<Token> trailing;
    while (b < e && kPunct.find(text[b]) != std::string_view::npos) {
      out.push_back({std::string(1, text[b]), b, b + 1});
      ++b;
    }
    while (e > b && kPunct.find(text[e - 1]) != std::string_view::npos) {
      trailing.push_back({std::string(1, text[e - 1]), e - 1, e});
      --e;
    }
    if (b < e) out.push_back({std::string(text.substr(b, e - b)), b, e});
    out.insert(out.end(), trailing.rbegin(), trailing.rend());
    i = j;
  }
  return out;
}

/// Head of a name span: last token before the first function word.
inline std::size_t span_head(const std::vector<std::string>& tokens, std::size_t start,
                             std::size_t end) {
  std::size_t stop = end;
  for (std::size_t i = start + 1; i < end; ++i) {
    if (detail::is_function_word(tokens[i])) {
      stop = i;
      break;
    }
  }
  return stop - 1;
}

/// Mentions for every link in a parsed line, with a flat dependency parse.
/// Links that do not align with token boundaries are skipped.
inline std::vector<Mention> anchor_mentions(const AnchorParse& parse, const std::string& sentence_id) {
  auto toks = tokenize(parse.text);
  std::vector<std::string> words;
  words.reserve(toks.size());
  for (const auto& t : toks) words.push_back(t.text);
  std::vector<Mention> out;
  for (const auto& link : parse.links) {
    std::size_t start = toks.size(), end = 0;
    for (std::size_t i = 0; i < toks.size(); ++i) {
      if (toks[i].begin >= link.begin && toks[i].end <= link.end) {
        start = std::min(start, i);
        end = i + 1;
      }
    }
    if (start >= end) continue;
    out.push_back(Mention::flat(words, start, end, span_head(words, start, end),
                                normalize_title(link.target), sentence_id));
  }
  return out;
}

enum class FilterReason { kept, too_short, formatting, common_noun };

inline std::string to_string(FilterReason r) {
  switch (r) {
    case FilterReason::kept: return "kept";
    case FilterReason::too_short: return "too-short";
    case FilterReason::formatting: return "formatting";
    case FilterReason::common_noun: return "common-noun";
  }
  return "kept";
}

inline bool is_formatting_token(const std::string& token) {
  if (token.find_first_of("|{}") != std::string::npos) return true;
  return !token.empty() && std::all_of(token.begin(), token.end(), [](char c) { return c == '='; });
}

/// Rejects markup residue, sentences under 3 tokens, and mentions whose head
/// starts lowercase.
inline FilterReason mention_filter(const Mention& mention) {
  if (std::any_of(mention.tokens.begin(), mention.tokens.end(), is_formatting_token))
    return FilterReason::formatting;
  if (mention.tokens.size() < 3) return FilterReason::too_short;
  const auto& head = mention.tokens.at(mention.head_index);
  if (!head.empty() && std::islower(static_cast<unsigned char>(head[0])))
    return FilterReason::common_noun;
  return FilterReason::kept;
}

}  // namespace settype
