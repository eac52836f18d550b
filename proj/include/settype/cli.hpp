#pragma once

// Command-line front end. Every subcommand accepts --config PATH naming a
// flat INI/TOML-style key-value file whose keys are the long flag names;
// flags given on the command line take precedence.

#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "settype/commands.hpp"

namespace settype {

namespace detail {

inline void add_lexicon_options(CLI::App* cmd, LexiconPaths& p) {
  cmd->add_option("--categories", p.categories, "one category name per line")->required();
  cmd->add_option("--edges", p.edges, "parent<TAB>child category edges")->required();
  cmd->add_option("--lemmas", p.lemmas, "noun lemmas, one per line")->required();
  cmd->add_option("--hypernyms", p.hypernyms, "lemma<TAB>direct hypernym")->required();
  cmd->add_option("--exceptions", p.exceptions, "surface<TAB>lemma irregular forms");
}

inline void add_decoder_options(CLI::App* cmd, DecoderOverrides& d) {
  cmd->add_option("--decoder", d.mode, "greedy | connected | threshold")
      ->check(CLI::IsMember({"greedy", "connected", "threshold"}));
  cmd->add_option("--threshold", d.threshold, "threshold decoder cut-off r");
  cmd->add_option("--graph", d.graph, "constraint graph: type | cooccur | complete")
      ->check(CLI::IsMember({"type", "cooccur", "complete"}));
  cmd->add_option("--max-set-size", d.max_set_size, "cap on predicted set size (0 = unlimited)");
  cmd->add_option("--min-cooccur", d.min_cooccur, "gold co-occurrences needed for a cooccur edge");
}

/// Replaces `--config PATH` after the subcommand name with the file's
/// key-value pairs as flags. Keys also given on the command line keep the
/// command-line value. Keys may sit at top level or in a section named after
/// the subcommand.
inline std::vector<std::string> expand_config(CLI::App& app, std::vector<std::string> args) {
  if (args.empty()) return args;
  CLI::App* sub = nullptr;
  for (auto* candidate : app.get_subcommands({}))
    if (candidate->check_name(args[0])) sub = candidate;
  if (!sub) return args;
  std::vector<std::string> kept{args[0]};
  std::vector<std::string> files;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size())
      files.push_back(args[++i]);
    else if (args[i].rfind("--config=", 0) == 0)
      files.push_back(args[i].substr(9));
    else
      kept.push_back(args[i]);
  }
  auto given = [&](const std::string& flag) {
    return std::any_of(kept.begin() + 1, kept.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
  };
  std::vector<std::string> extra;
  for (const auto& file : files) {
    for (const auto& item : CLI::ConfigINI().from_file(file)) {
      if (item.name == "++" || item.name == "--") continue;
      if (!item.parents.empty() && !(item.parents.size() == 1 && item.parents[0] == sub->get_name()))
        continue;
      const std::string flag = "--" + item.name;
      const CLI::Option* opt = sub->get_option_no_throw(flag);
      if (!opt || flag == "--config") throw CLI::ConfigError::Extras(item.fullname());
      if (given(flag)) continue;
      if (opt->get_expected_min() == 0) {
        auto v = item.inputs.empty() ? std::string("true") : lowercase(item.inputs.front());
        if (v == "true" || v == "1" || v == "yes" || v == "on") extra.push_back(flag);
        continue;
      }
      extra.push_back(flag);
      extra.insert(extra.end(), item.inputs.begin(), item.inputs.end());
    }
  }
  kept.insert(kept.begin() + 1, extra.begin(), extra.end());
  return kept;
}

}  // namespace detail

/// Runs the tool on `args` (without the program name).
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Structured set prediction for fine-grained entity typing", "settype"};
  app.require_subcommand(1);

  BuildTypesOptions types_opt;
  auto* build_types = app.add_subcommand("build-types", "build the type system from a category graph");
  build_types->set_config("--config");
  detail::add_lexicon_options(build_types, types_opt.inputs);
  build_types->add_option("--output,-o", types_opt.output, "type-system file")->required();

  BuildCorpusOptions corpus_opt;
  auto* build_corpus = app.add_subcommand("build-corpus", "extract typed mentions");
  build_corpus->set_config("--config");
  detail::add_lexicon_options(build_corpus, corpus_opt.inputs);
  build_corpus->add_option("--entity-categories", corpus_opt.entity_categories,
                           "entity<TAB>category assignments")->required();
  build_corpus->add_option("--sentences", corpus_opt.sentences,
                           "page<TAB>sentence id<TAB>wikitext lines");
  build_corpus->add_option("--mentions", corpus_opt.mentions, "pre-parsed mention records");
  build_corpus->add_option("--corpus-out", corpus_opt.corpus_out, "corpus output")->required();
  build_corpus->add_option("--types-out", corpus_opt.types_out, "type-system output");
  build_corpus->add_option("--max-depth", corpus_opt.max_depth,
                           "ancestor closure depth (0 = unlimited)");

  TrainOptions train_opt;
  auto* train_cmd = app.add_subcommand("train", "train a model");
  train_cmd->set_config("--config");
  train_cmd->add_option("--corpus", train_opt.corpus, "training corpus")->required();
  train_cmd->add_option("--type-system", train_opt.type_system, "type-system file")->required();
  train_cmd->add_option("--model-out", train_opt.model_out, "model output")->required();
  train_cmd->add_option("--report-out", train_opt.report_out, "per-epoch report (default stdout)");
  train_cmd->add_option("--types", train_opt.types_k, "keep the K most frequent types (0 = all)");
  train_cmd->add_option("--max-mentions", train_opt.max_mentions, "sample at most N mentions");
  train_cmd->add_option("--seed", train_opt.seed, "random seed");
  std::size_t train_threads = 1;
  train_cmd->add_option("--threads", train_threads, "accepted; training updates are sequential");
  train_cmd->add_option("--epochs", train_opt.train.epochs, "training epochs");
  train_cmd->add_option("--learning-rate", train_opt.train.learning_rate, "AdaGrad step size");
  train_cmd->add_option("--adagrad-epsilon", train_opt.train.adagrad_epsilon, "AdaGrad epsilon");
  train_cmd->add_option("--l2", train_opt.train.l2_lambda, "l2 regularization strength");
  auto& fc = train_opt.features;
  train_cmd->add_option("--context-window", fc.context_window, "context tokens on each side");
  train_cmd->add_option("--bigrams", fc.use_bigrams, "context bigram features");
  train_cmd->add_option("--dependency", fc.use_dependency, "dependency features");
  train_cmd->add_option("--shape", fc.use_shape, "word shape features");
  train_cmd->add_option("--pair-features", fc.use_pair_features, "type pair features");
  train_cmd->add_option("--graph-features", fc.use_graph_features, "graph pattern features");
  train_cmd->add_option("--set-size-feature", fc.use_set_size_feature, "set cardinality feature");
  detail::add_decoder_options(train_cmd, train_opt.decoder);

  PredictOptions predict_opt;
  auto* predict_cmd = app.add_subcommand("predict", "predict type sets");
  predict_cmd->set_config("--config");
  predict_cmd->add_option("--model", predict_opt.model, "model file")->required();
  predict_cmd->add_option("--corpus", predict_opt.corpus, "corpus to label")->required();
  predict_cmd->add_option("--output,-o", predict_opt.output, "predictions TSV")->required();
  predict_cmd->add_option("--threads", predict_opt.threads, "worker threads");
  predict_cmd->add_flag("--restrict-to-model", predict_opt.restrict_to_model,
                        "drop gold types the model does not know");
  detail::add_decoder_options(predict_cmd, predict_opt.decoder);

  EvalOptions eval_opt;
  auto* eval_cmd = app.add_subcommand("eval", "evaluate predictions against gold");
  eval_cmd->set_config("--config");
  eval_cmd->add_option("--model", eval_opt.model, "model file")->required();
  eval_cmd->add_option("--corpus", eval_opt.corpus, "evaluation corpus")->required();
  eval_cmd->add_option("--train-corpus", eval_opt.train_corpus, "type frequencies for per-type rows");
  eval_cmd->add_option("--report-out", eval_opt.report_out, "macro P/R/F1 table (default stdout)");
  eval_cmd->add_option("--per-type-out", eval_opt.per_type_out, "per-type TSV");
  eval_cmd->add_option("--threads", eval_opt.threads, "worker threads");
  eval_cmd->add_flag("--restrict-to-model", eval_opt.restrict_to_model,
                     "drop gold types the model does not know");
  detail::add_decoder_options(eval_cmd, eval_opt.decoder);

  StatsOptions stats_opt;
  auto* stats_cmd = app.add_subcommand("stats", "corpus statistics");
  stats_cmd->set_config("--config");
  stats_cmd->add_option("--corpus", stats_opt.corpus, "corpus file")->required();
  stats_cmd->add_option("--type-system", stats_opt.type_system, "type-system file")->required();
  stats_cmd->add_option("--output,-o", stats_opt.output, "statistics TSV (default stdout)");

  try {
    args = detail::expand_config(app, std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  if (*build_types) return run_build_types(types_opt, out, err);
  if (*build_corpus) return run_build_corpus(corpus_opt, out, err);
  if (*train_cmd) return run_train(train_opt, out, err);
  if (*predict_cmd) return run_predict(predict_opt, out, err);
  if (*eval_cmd) return run_eval(eval_opt, out, err);
  if (*stats_cmd) return run_stats(stats_opt, out, err);
  return 2;
}

}  // namespace settype
