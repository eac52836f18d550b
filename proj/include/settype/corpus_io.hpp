#pragma once

// Corpus records are one JSON object per line:
//
//   {"dep_labels":"nsubj,cop,det,ROOT,punct","dep_parents":"3,3,3,-1,3",
//    "entity_id":"Albert Einstein","gold_types":"people,physicist",
//    "head_index":0,"sentence_id":"s1","span_end":1,"span_start":0,
//    "tokens":"Einstein was a physicist ."}
//
// Lists are flattened to text: tokens space-joined, parse fields and type
// names comma-joined. Keys are written in sorted order. Mention-only input
// uses the same record without "gold_types".

#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "settype/anchors.hpp"
#include "settype/error.hpp"
#include "settype/lexicon.hpp"
#include "settype/mention.hpp"
#include "settype/model_io.hpp"
#include "settype/type_builder.hpp"
#include "settype/type_system.hpp"

namespace settype {

namespace detail {

inline std::string join(const std::vector<std::string>& items, char sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

inline std::vector<std::string> split_nonempty(const std::string& text, char sep) {
  std::vector<std::string> out;
  if (text.empty()) return out;
  for (auto part : split(text, sep)) out.emplace_back(part);
  return out;
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error("cannot open input file: " + path);
  return in;
}

/// Calls fn(fields, line_no) for each non-empty line.
template <class Fn>
void for_each_tsv(std::istream& in, std::size_t expected_fields, const std::string& what, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split(line, '\t');
    if (fields.size() != expected_fields)
      throw format_error(what + " line " + std::to_string(line_no) + ": expected " +
                         std::to_string(expected_fields) + " tab-separated fields");
    std::vector<std::string> owned(fields.begin(), fields.end());
    fn(owned, line_no);
  }
}

}  // namespace detail

inline nlohmann::json mention_to_json(const Mention& m) {
  for (const auto& t : m.tokens)
    if (t.empty() || t.find_first_of(" \t\n") != std::string::npos)
      throw format_error("token cannot be written: '" + t + "'");
  for (const auto& l : m.dep_label)
    if (l.find(',') != std::string::npos) throw format_error("dependency label contains a comma");
  std::vector<std::string> parents;
  for (int p : m.dep_parent) parents.push_back(std::to_string(p));
  nlohmann::json j;
  j["tokens"] = detail::join(m.tokens, ' ');
  j["span_start"] = m.span_start;
  j["span_end"] = m.span_end;
  j["head_index"] = m.head_index;
  j["dep_parents"] = detail::join(parents, ',');
  j["dep_labels"] = detail::join(m.dep_label, ',');
  j["entity_id"] = m.entity_id;
  j["sentence_id"] = m.sentence_id;
  return j;
}

inline Mention mention_from_json(const nlohmann::json& j) {
  try {
    Mention m;
    m.tokens = detail::split_nonempty(j.at("tokens").get<std::string>(), ' ');
    m.span_start = j.at("span_start").get<std::size_t>();
    m.span_end = j.at("span_end").get<std::size_t>();
    m.head_index = j.at("head_index").get<std::size_t>();
    for (const auto& p : detail::split_nonempty(j.at("dep_parents").get<std::string>(), ','))
      m.dep_parent.push_back(detail::parse_int<int>(p));
    m.dep_label = detail::split_nonempty(j.at("dep_labels").get<std::string>(), ',');
    m.entity_id = j.at("entity_id").get<std::string>();
    if (j.contains("sentence_id")) m.sentence_id = j.at("sentence_id").get<std::string>();
    m.validate();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw format_error(std::string("bad mention record: ") + e.what());
  }
}

inline std::string type_names(const TypeSet& set, const TypeSystem& ts) {
  std::vector<std::string> names;
  for (TypeIndex t : set) names.push_back(ts.name(t));
  return detail::join(names, ',');
}

inline nlohmann::json example_to_json(const Example& ex, const TypeSystem& ts) {
  auto j = mention_to_json(ex.mention);
  j["gold_types"] = type_names(ex.gold, ts);
  return j;
}

/// Reads mention records, ignoring any gold field.
inline std::vector<Mention> read_mentions(std::istream& in) {
  std::vector<Mention> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(mention_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw format_error("mention line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

/// Reads corpus records against a type system. Unknown gold type names are
/// a type-system mismatch unless `drop_unknown_types` is set.
inline std::vector<Example> read_corpus(std::istream& in, const TypeSystem& ts,
                                        bool drop_unknown_types = false) {
  std::vector<Example> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw format_error("corpus line " + std::to_string(line_no) + ": " + e.what());
    }
    Example ex;
    ex.mention = mention_from_json(j);
    if (!j.contains("gold_types")) throw format_error("corpus line " + std::to_string(line_no) + ": missing gold_types");
    for (const auto& name : detail::split_nonempty(j.at("gold_types").get<std::string>(), ',')) {
      auto t = ts.find(name);
      if (t)
        ex.gold.insert(*t);
      else if (!drop_unknown_types)
        throw lookup_error("corpus line " + std::to_string(line_no) + ": type '" + name +
                           "' is not in the type system");
    }
    out.push_back(std::move(ex));
  }
  return out;
}

inline void write_corpus(const std::vector<Example>& corpus, const TypeSystem& ts, std::ostream& out) {
  for (const auto& ex : corpus) out << example_to_json(ex, ts).dump() << '\n';
}

inline std::vector<Example> read_corpus_file(const std::string& path, const TypeSystem& ts,
                                             bool drop_unknown_types = false) {
  auto in = detail::open_input(path);
  return read_corpus(in, ts, drop_unknown_types);
}

struct LoadReport {
  std::size_t skipped_edges = 0;  // endpoints missing from the category list
};

/// One category per line, then parent<TAB>child edges.
inline RawCategoryGraph read_category_graph(std::istream& categories, std::istream& edges,
                                            LoadReport* report = nullptr) {
  RawCategoryGraph g;
  detail::for_each_tsv(categories, 1, "categories",
                       [&](const auto& f, std::size_t) { g.add_category(f[0]); });
  detail::for_each_tsv(edges, 2, "category edges", [&](const auto& f, std::size_t) {
    if (g.contains(f[0]) && g.contains(f[1]))
      g.add_edge(f[0], f[1]);
    else if (report)
      ++report->skipped_edges;
  });
  return g;
}

/// Noun lemmas, lemma<TAB>hypernym pairs, and optional surface<TAB>lemma
/// exceptions.
inline LexicalResource read_lexical_resource(std::istream& lemmas, std::istream& hypernyms,
                                             std::istream* exceptions = nullptr) {
  LexicalResource lex;
  detail::for_each_tsv(lemmas, 1, "lemmas", [&](const auto& f, std::size_t) { lex.add_noun(f[0]); });
  detail::for_each_tsv(hypernyms, 2, "hypernyms",
                       [&](const auto& f, std::size_t) { lex.add_hypernym(f[0], f[1]); });
  if (exceptions)
    detail::for_each_tsv(*exceptions, 2, "exceptions",
                         [&](const auto& f, std::size_t) { lex.add_exception(f[0], f[1]); });
  return lex;
}

/// entity<TAB>category lines, keyed by normalized title.
inline std::map<std::string, std::vector<std::string>> read_entity_categories(std::istream& in) {
  std::map<std::string, std::vector<std::string>> out;
  detail::for_each_tsv(in, 2, "entity categories", [&](const auto& f, std::size_t) {
    out[normalize_title(f[0])].push_back(f[1]);
  });
  return out;
}

struct SentenceLine {
  std::string page_id;
  std::string sentence_id;
  std::string wikitext;
};

inline std::vector<SentenceLine> read_sentences(std::istream& in) {
  std::vector<SentenceLine> out;
  detail::for_each_tsv(in, 3, "sentences", [&](const auto& f, std::size_t) {
    out.push_back({f[0], f[1], f[2]});
  });
  return out;
}

}  // namespace settype
