#pragma once

// Batch commands behind the command-line tool. Each run_* function validates
// its inputs, writes outputs through temporary files that are renamed only on
// success, and returns a process exit status.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "settype/corpus_builder.hpp"
#include "settype/corpus_io.hpp"
#include "settype/decoder.hpp"
#include "settype/evaluator.hpp"
#include "settype/learner.hpp"
#include "settype/model_io.hpp"
#include "settype/type_builder.hpp"

namespace settype {

/// Output files written next to their destination and moved into place on
/// commit(). Uncommitted files are deleted on destruction.
class OutputFiles {
 public:
  OutputFiles() = default;
  OutputFiles(const OutputFiles&) = delete;
  OutputFiles& operator=(const OutputFiles&) = delete;

  ~OutputFiles() {
    for (auto& f : files_) {
      f.stream.close();
      std::error_code ec;
      std::filesystem::remove(f.temp, ec);
    }
  }

  std::ostream& open(const std::string& path) {
    Entry e;
    e.final_path = path;
    e.temp = path + ".tmp";
    e.stream.open(e.temp, std::ios::binary | std::ios::trunc);
    if (!e.stream) throw error("cannot write output file: " + path);
    files_.push_back(std::move(e));
    return files_.back().stream;
  }

  void commit() {
    for (auto& f : files_) {
      f.stream.close();
      if (!f.stream) throw error("failed writing output file: " + f.final_path);
    }
    for (auto& f : files_) std::filesystem::rename(f.temp, f.final_path);
    files_.clear();
  }

 private:
  struct Entry {
    std::string final_path;
    std::string temp;
    std::ofstream stream;
  };
  std::vector<Entry> files_;
};

namespace detail {

inline void require_readable(const std::string& path, const std::string& what) {
  if (path.empty()) throw error("missing required input: " + what);
  std::ifstream in(path);
  if (!in) throw error("cannot read " + what + ": " + path);
}

inline void require_output(const std::string& path, const std::string& what) {
  if (path.empty()) throw error("missing required output path: " + what);
}

template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

inline std::string percent(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", 100.0 * value);
  return buf;
}

inline std::string fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

/// fn(i) for i in [0, n) across `threads` workers; results stay in index order.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t n, std::size_t threads, Fn&& fn) {
  std::vector<T> out(n);
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> failures(threads);
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += threads) out[i] = fn(i);
      } catch (...) {
        failures[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& f : failures)
    if (f) std::rethrow_exception(f);
  return out;
}

}  // namespace detail

struct LexiconPaths {
  std::string categories;
  std::string edges;
  std::string lemmas;
  std::string hypernyms;
  std::string exceptions;  // optional
};

struct BuildTypesOptions {
  LexiconPaths inputs;
  std::string output;
};

struct BuildCorpusOptions {
  LexiconPaths inputs;
  std::string entity_categories;
  std::string sentences;  // simplified wikitext lines
  std::string mentions;   // pre-parsed mention records
  std::string corpus_out;
  std::string types_out;  // optional
  std::size_t max_depth = 0;
};

struct DecoderOverrides {
  std::optional<std::string> mode;
  std::optional<double> threshold;
  std::optional<std::string> graph;
  std::optional<std::size_t> max_set_size;
  std::optional<std::size_t> min_cooccur;

  void apply(DecoderConfig& config) const {
    if (mode) config.mode = parse_decoder_mode(*mode);
    if (threshold) config.threshold = *threshold;
    if (graph) config.graph = parse_graph_kind(*graph);
    if (max_set_size) config.max_set_size = *max_set_size;
    if (min_cooccur) config.min_cooccur = *min_cooccur;
  }
};

struct TrainOptions {
  std::string corpus;
  std::string type_system;
  std::string model_out;
  std::string report_out;  // empty: standard output
  std::size_t types_k = 0;
  std::size_t max_mentions = 0;
  std::uint64_t seed = kDefaultSeed;
  FeaturizerConfig features;
  TrainConfig train;
  DecoderOverrides decoder;
};

struct PredictOptions {
  std::string model;
  std::string corpus;
  std::string output;
  std::size_t threads = 1;
  bool restrict_to_model = false;
  DecoderOverrides decoder;
};

struct EvalOptions {
  std::string model;
  std::string corpus;
  std::string train_corpus;  // optional; frequencies for the per-type table
  std::string report_out;    // empty: standard output
  std::string per_type_out;  // optional
  std::size_t threads = 1;
  bool restrict_to_model = false;
  DecoderOverrides decoder;
};

struct StatsOptions {
  std::string corpus;
  std::string type_system;
  std::string output;  // empty: standard output
};

namespace detail {

inline TypeBuildResult build_types_from(const LexiconPaths& p, std::ostream& log) {
  require_readable(p.categories, "categories file");
  require_readable(p.edges, "category edges file");
  require_readable(p.lemmas, "noun lemmas file");
  require_readable(p.hypernyms, "hypernyms file");
  if (!p.exceptions.empty()) require_readable(p.exceptions, "lemma exceptions file");

  auto categories = open_input(p.categories);
  auto edges = open_input(p.edges);
  LoadReport load;
  auto graph = read_category_graph(categories, edges, &load);
  if (graph.categories().empty()) throw pipeline_error("categories file is empty");

  auto lemmas = open_input(p.lemmas);
  auto hypernyms = open_input(p.hypernyms);
  std::optional<std::ifstream> exceptions;
  if (!p.exceptions.empty()) exceptions = open_input(p.exceptions);
  auto lex = read_lexical_resource(lemmas, hypernyms, exceptions ? &*exceptions : nullptr);

  auto built = build_type_system(graph, lex);
  const auto& s = built.stats;
  log << "raw_categories\t" << s.raw_categories << '\n'
      << "surviving_categories\t" << s.surviving_categories << '\n'
      << "projected_types\t" << s.projected_types << '\n'
      << "raw_edges\t" << s.raw_edges << '\n'
      << "surviving_edges\t" << s.surviving_edges << '\n'
      << "projected_edges\t" << s.projected_edges << '\n';
  if (load.skipped_edges) log << "skipped_dangling_edges\t" << load.skipped_edges << '\n';
  return built;
}

inline Model load_model_checked(const std::string& path) {
  require_readable(path, "model file");
  return load_model_file(path);
}

inline std::vector<TypeSet> predict_all(const Model& model, const std::vector<Example>& corpus,
                                        std::size_t threads) {
  std::optional<ConstraintGraph> graph;
  if (model.decoder.mode == DecoderMode::connected) graph = constraint_graph(model);
  const ConstraintGraph* g = graph ? &*graph : nullptr;
  return parallel_map<TypeSet>(corpus.size(), threads, [&](std::size_t i) {
    return decode(model, extract_mention_features(corpus[i].mention, model.features), g).set;
  });
}

}  // namespace detail

inline int run_build_types(const BuildTypesOptions& opt, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    detail::require_output(opt.output, "--output");
    auto built = detail::build_types_from(opt.inputs, out);
    OutputFiles files;
    save_type_system(built.types, files.open(opt.output));
    files.commit();
    return 0;
  });
}

inline int run_build_corpus(const BuildCorpusOptions& opt, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    detail::require_output(opt.corpus_out, "--corpus-out");
    detail::require_readable(opt.entity_categories, "entity categories file");
    if (opt.sentences.empty() && opt.mentions.empty())
      throw error("build-corpus needs --sentences or --mentions");
    if (!opt.sentences.empty()) detail::require_readable(opt.sentences, "sentences file");
    if (!opt.mentions.empty()) detail::require_readable(opt.mentions, "mentions file");

    std::ostringstream type_log;
    auto built = detail::build_types_from(opt.inputs, type_log);
    auto entity_in = detail::open_input(opt.entity_categories);
    auto entity_categories = read_entity_categories(entity_in);

    CorpusBuildReport report;
    std::vector<Mention> candidates;
    if (!opt.sentences.empty()) {
      auto in = detail::open_input(opt.sentences);
      candidates = mentions_from_sentences(read_sentences(in), report);
    }
    if (!opt.mentions.empty()) {
      auto in = detail::open_input(opt.mentions);
      for (auto& m : read_mentions(in)) candidates.push_back(std::move(m));
    }
    auto corpus = build_corpus(candidates, entity_categories, built, report, opt.max_depth);
    if (corpus.empty()) throw pipeline_error("no typed mentions survived corpus construction");

    OutputFiles files;
    write_corpus(corpus, built.types, files.open(opt.corpus_out));
    if (!opt.types_out.empty()) save_type_system(built.types, files.open(opt.types_out));
    files.commit();

    out << "lines\t" << report.lines << '\n'
        << "skipped_lines\t" << report.skipped_lines << '\n'
        << "candidates\t" << report.candidates << '\n';
    for (const auto& [reason, count] : report.filtered)
      out << "rejected_" << to_string(reason) << '\t' << count << '\n';
    out << "untyped\t" << report.untyped << '\n' << "examples\t" << report.examples << '\n';
    return 0;
  });
}

inline void write_train_report(const TrainReport& report, std::ostream& out) {
  out << "epoch\thinge_loss\tviolations\ttrain_f1\n";
  for (std::size_t e = 0; e < report.hinge_loss.size(); ++e)
    out << e + 1 << '\t' << detail::fixed(report.hinge_loss[e], 6) << '\t' << report.violations[e]
        << '\t' << detail::fixed(report.train_f1[e], 6) << '\n';
}

inline int run_train(const TrainOptions& opt, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    detail::require_readable(opt.corpus, "corpus file");
    detail::require_readable(opt.type_system, "type-system file");
    detail::require_output(opt.model_out, "--model-out");

    auto ts = load_type_system_file(opt.type_system);
    auto corpus = read_corpus_file(opt.corpus, ts);
    if (opt.types_k != 0 || opt.max_mentions != 0) {
      auto k = opt.types_k == 0 ? std::max<std::size_t>(ts.size(), 1) : opt.types_k;
      std::tie(corpus, ts) = restrict_and_sample(corpus, ts, k, opt.max_mentions, opt.seed);
    }
    if (corpus.empty()) throw pipeline_error("corpus is empty after restriction");

    TrainConfig config = opt.train;
    config.shuffle_seed = opt.seed;
    opt.decoder.apply(config.decoder);
    auto [model, report] = train(corpus, ts, opt.features, config);

    OutputFiles files;
    save_model(model, files.open(opt.model_out));
    if (!opt.report_out.empty()) write_train_report(report, files.open(opt.report_out));
    files.commit();
    if (opt.report_out.empty()) write_train_report(report, out);
    return 0;
  });
}

inline int run_predict(const PredictOptions& opt, std::ostream&, std::ostream& err) {
  return detail::guarded(err, [&] {
    detail::require_readable(opt.corpus, "corpus file");
    detail::require_output(opt.output, "--output");
    auto model = detail::load_model_checked(opt.model);
    opt.decoder.apply(model.decoder);
    auto corpus = read_corpus_file(opt.corpus, model.types, opt.restrict_to_model);
    auto predicted = detail::predict_all(model, corpus, opt.threads);

    OutputFiles files;
    auto& os = files.open(opt.output);
    os << "entity_id\tsentence_id\tpredicted\tgold\n";
    for (std::size_t i = 0; i < corpus.size(); ++i)
      os << corpus[i].mention.entity_id << '\t' << corpus[i].mention.sentence_id << '\t'
         << type_names(predicted[i], model.types) << '\t' << type_names(corpus[i].gold, model.types)
         << '\n';
    files.commit();
    return 0;
  });
}

/// Entity and sentence rows of P, R and F1, in percent.
inline void write_eval_report(const EvalRecord& entity, const EvalRecord& sentence,
                              std::ostream& out) {
  out << "level\tmetric\tvalue\n";
  auto rows = [&](const char* level, const EvalRecord& r) {
    out << level << "\tprecision\t" << detail::percent(r.precision) << '\n'
        << level << "\trecall\t" << detail::percent(r.recall) << '\n'
        << level << "\tf1\t" << detail::percent(r.f1) << '\n';
  };
  rows("entity", entity);
  rows("sentence", sentence);
}

inline void write_per_type(const std::vector<PerTypeRecord>& records, const TypeSystem& ts,
                           std::ostream& out) {
  out << "type\tfrequency\ttp\tfp\tfn\tf1\n";
  for (const auto& r : records)
    out << ts.name(r.type) << '\t' << r.frequency << '\t' << r.tp << '\t' << r.fp << '\t' << r.fn
        << '\t' << detail::fixed(r.f1, 4) << '\n';
}

inline int run_eval(const EvalOptions& opt, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    detail::require_readable(opt.corpus, "corpus file");
    if (!opt.train_corpus.empty()) detail::require_readable(opt.train_corpus, "training corpus file");
    auto model = detail::load_model_checked(opt.model);
    opt.decoder.apply(model.decoder);
    auto corpus = read_corpus_file(opt.corpus, model.types, opt.restrict_to_model);
    if (corpus.empty()) throw error("evaluation corpus is empty");
    auto predicted = detail::predict_all(model, corpus, opt.threads);

    std::vector<Prediction> predictions;
    for (std::size_t i = 0; i < corpus.size(); ++i) predictions.push_back({&corpus[i], predicted[i]});

    std::vector<std::size_t> freq;
    if (!opt.train_corpus.empty())
      freq = type_frequencies(read_corpus_file(opt.train_corpus, model.types, true), model.types.size());
    else
      freq = type_frequencies(corpus, model.types.size());

    OutputFiles files;
    std::ostream& report = opt.report_out.empty() ? out : files.open(opt.report_out);
    write_eval_report(macro_entity_eval(predictions), macro_sentence_eval(predictions), report);
    if (!opt.per_type_out.empty())
      write_per_type(per_type_micro_f1(predictions, freq), model.types, files.open(opt.per_type_out));
    files.commit();
    return 0;
  });
}

inline void write_stats(const CorpusStats& s, const TypeSystem& ts, std::ostream& out) {
  out << "summary\tmentions\t" << s.mentions << '\n'
      << "summary\tentities\t" << s.entities << '\n'
      << "summary\ttypes\t" << s.types << '\n';
  std::vector<TypeIndex> order(ts.size());
  std::iota(order.begin(), order.end(), TypeIndex{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](TypeIndex a, TypeIndex b) { return s.type_counts[a] > s.type_counts[b]; });
  for (TypeIndex t : order) out << "type_count\t" << ts.name(t) << '\t' << s.type_counts[t] << '\n';
  const auto cdf = s.set_size_cdf();
  for (std::size_t k = 0; k < cdf.size(); ++k)
    out << "set_size_cdf\t" << k << '\t' << s.set_size_counts[k] << '\t' << detail::fixed(cdf[k], 6)
        << '\n';
}

inline int run_stats(const StatsOptions& opt, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    detail::require_readable(opt.corpus, "corpus file");
    detail::require_readable(opt.type_system, "type-system file");
    auto ts = load_type_system_file(opt.type_system);
    auto corpus = read_corpus_file(opt.corpus, ts);
    OutputFiles files;
    std::ostream& os = opt.output.empty() ? out : files.open(opt.output);
    write_stats(corpus_stats(corpus, ts), ts, os);
    files.commit();
    return 0;
  });
}

}  // namespace settype
