#pragma once

// Line-oriented model persistence. Each record is tab-separated:
//
//   C <key> <value>        decoder / featurizer configuration
//   E <parent> <child>     type-graph edge
//   F <feature> <weight>   non-zero weight
//   R <raw> <index>        raw category -> projected type
//   T <index> <name>       type inventory
//
// Records are sorted by kind, then by key, so equal models serialize to
// identical bytes. Weights use shortest round-trip decimal form.

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "settype/error.hpp"
#include "settype/model.hpp"

namespace settype {

namespace detail {

inline std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw format_error("cannot format number");
  return std::string(buf, end);
}

inline double parse_double(std::string_view text) {
  double value = 0.0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size())
    throw format_error("bad number: '" + std::string(text) + "'");
  return value;
}

template <class Int>
Int parse_int(std::string_view text) {
  Int value{};
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size())
    throw format_error("bad integer: '" + std::string(text) + "'");
  return value;
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

inline void check_field(const std::string& text) {
  if (text.find_first_of("\t\n\r") != std::string::npos)
    throw format_error("field contains a tab or newline: " + text);
}

inline std::string bool_text(bool b) { return b ? "1" : "0"; }

inline bool parse_bool(std::string_view s) {
  if (s == "1" || s == "true") return true;
  if (s == "0" || s == "false") return false;
  throw format_error("bad flag: '" + std::string(s) + "'");
}

inline std::map<std::string, std::string> config_records(const Model& model) {
  std::map<std::string, std::string> c;
  c["decoder"] = to_string(model.decoder.mode);
  c["threshold"] = format_double(model.decoder.threshold);
  c["graph"] = to_string(model.decoder.graph);
  c["max_set_size"] = std::to_string(model.decoder.max_set_size);
  c["min_cooccur"] = std::to_string(model.decoder.min_cooccur);
  c["context_window"] = std::to_string(model.features.context_window);
  c["use_bigrams"] = bool_text(model.features.use_bigrams);
  c["use_dependency"] = bool_text(model.features.use_dependency);
  c["use_shape"] = bool_text(model.features.use_shape);
  c["use_pair_features"] = bool_text(model.features.use_pair_features);
  c["use_graph_features"] = bool_text(model.features.use_graph_features);
  c["use_set_size_feature"] = bool_text(model.features.use_set_size_feature);
  std::string edges;
  for (const auto& [a, b] : model.cooccurrence) {
    if (!edges.empty()) edges += ',';
    edges += std::to_string(a) + ":" + std::to_string(b);
  }
  c["cooccur_edges"] = edges;
  return c;
}

inline void apply_config(Model& model, const std::string& key, std::string_view value) {
  if (key == "decoder") model.decoder.mode = parse_decoder_mode(std::string(value));
  else if (key == "threshold") model.decoder.threshold = parse_double(value);
  else if (key == "graph") model.decoder.graph = parse_graph_kind(std::string(value));
  else if (key == "max_set_size") model.decoder.max_set_size = parse_int<std::size_t>(value);
  else if (key == "min_cooccur") model.decoder.min_cooccur = parse_int<std::size_t>(value);
  else if (key == "context_window") model.features.context_window = parse_int<std::size_t>(value);
  else if (key == "use_bigrams") model.features.use_bigrams = parse_bool(value);
  else if (key == "use_dependency") model.features.use_dependency = parse_bool(value);
  else if (key == "use_shape") model.features.use_shape = parse_bool(value);
  else if (key == "use_pair_features") model.features.use_pair_features = parse_bool(value);
  else if (key == "use_graph_features") model.features.use_graph_features = parse_bool(value);
  else if (key == "use_set_size_feature") model.features.use_set_size_feature = parse_bool(value);
  else if (key == "cooccur_edges") {
    model.cooccurrence.clear();
    if (value.empty()) return;
    for (auto item : split(value, ',')) {
      auto ab = split(item, ':');
      if (ab.size() != 2) throw format_error("bad co-occurrence edge: " + std::string(item));
      model.cooccurrence.emplace_back(parse_int<TypeIndex>(ab[0]), parse_int<TypeIndex>(ab[1]));
    }
  } else {
    throw format_error("unknown config key: " + key);
  }
}

inline void write_records(const Model* model, const TypeSystem& ts, std::ostream& out) {
  if (model) {
    for (const auto& [key, value] : config_records(*model))
      out << "C\t" << key << '\t' << value << '\n';
  }
  for (const auto& [parent, child] : ts.edges()) out << "E\t" << parent << '\t' << child << '\n';
  if (model) {
    std::vector<std::pair<std::string, double>> weights;
    for (const auto& [key, value] : model->weights)
      if (value != 0.0) weights.emplace_back(model->dict.text(key), value);
    std::sort(weights.begin(), weights.end());
    for (const auto& [text, value] : weights) {
      check_field(text);
      out << "F\t" << text << '\t' << format_double(value) << '\n';
    }
  }
  for (const auto& [raw, index] : ts.raw_to_projected()) {
    check_field(raw);
    out << "R\t" << raw << '\t' << index << '\n';
  }
  for (TypeIndex t = 0; t < ts.size(); ++t) {
    check_field(ts.name(t));
    out << "T\t" << t << '\t' << ts.name(t) << '\n';
  }
}

}  // namespace detail

inline void save_model(const Model& model, std::ostream& out) {
  detail::write_records(&model, model.types, out);
}

/// Type-system files use the model format without C and F records.
inline void save_type_system(const TypeSystem& ts, std::ostream& out) {
  detail::write_records(nullptr, ts, out);
}

inline Model load_model(std::istream& in) {
  Model model;
  std::map<TypeIndex, std::string> names;
  std::vector<TypeSystem::Edge> edges;
  std::vector<std::pair<std::string, TypeIndex>> raw;
  std::vector<std::pair<std::string, double>> weights;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = detail::split(line, '\t');
    if (fields.size() != 3 || fields[0].size() != 1)
      throw format_error("model line " + std::to_string(line_no) + ": expected 3 fields");
    switch (fields[0][0]) {
      case 'C': detail::apply_config(model, std::string(fields[1]), fields[2]); break;
      case 'E':
        edges.emplace_back(detail::parse_int<TypeIndex>(fields[1]),
                           detail::parse_int<TypeIndex>(fields[2]));
        break;
      case 'F': weights.emplace_back(std::string(fields[1]), detail::parse_double(fields[2])); break;
      case 'R': raw.emplace_back(std::string(fields[1]), detail::parse_int<TypeIndex>(fields[2])); break;
      case 'T': {
        auto index = detail::parse_int<TypeIndex>(fields[1]);
        if (!names.emplace(index, std::string(fields[2])).second)
          throw format_error("duplicate type index " + std::to_string(index));
        break;
      }
      default:
        throw format_error("model line " + std::to_string(line_no) + ": unknown record kind");
    }
  }
  TypeIndex expected = 0;
  for (const auto& [index, name] : names) {
    if (index != expected++) throw format_error("type indices are not contiguous");
    model.types.add_type(name);
  }
  for (const auto& [parent, child] : edges) model.types.add_edge(parent, child);
  for (const auto& [name, index] : raw) {
    model.types.check(index);
    model.types.raw_to_projected()[name] = index;
  }
  for (const auto& [a, b] : model.cooccurrence) {
    model.types.check(a);
    model.types.check(b);
  }
  for (const auto& [text, value] : weights) model.weights.set(model.dict.intern(text), value);
  return model;
}

inline TypeSystem load_type_system(std::istream& in) { return load_model(in).types; }

inline std::string model_to_string(const Model& model) {
  std::ostringstream out;
  save_model(model, out);
  return out.str();
}

inline Model model_from_string(const std::string& text) {
  std::istringstream in(text);
  return load_model(in);
}

inline Model load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error("cannot open model file: " + path);
  return load_model(in);
}

inline TypeSystem load_type_system_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error("cannot open type-system file: " + path);
  return load_type_system(in);
}

}  // namespace settype
