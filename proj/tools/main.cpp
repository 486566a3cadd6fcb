// namelex command line: distance, candidates, synth, learn, evaluate, trace.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <omp.h>

#include <CLI11.hpp>

#include "namelex/candidates.hpp"
#include "namelex/config.hpp"
#include "namelex/error.hpp"
#include "namelex/eval.hpp"
#include "namelex/hpd.hpp"
#include "namelex/learner.hpp"
#include "namelex/recognizer.hpp"

namespace {

using namespace namelex;

struct CliOptions {
  RunConfig cfg;
  std::string config_path;
  std::map<std::string, std::string> overrides;
};

/// Registers the shared config/override flags on a subcommand. Values go
/// through the same key=value channel as the config file so precedence is
/// uniform: defaults < config file < flags.
void add_common_options(CLI::App* cmd, CliOptions& opts) {
  cmd->add_option("--config", opts.config_path, "key=value config file");
  auto keyed = [&opts, cmd](const std::string& key, const std::string& help) {
    cmd->add_option_function<std::string>(
        "--" + key,
        [&opts, key](const std::string& v) { opts.overrides[key] = v; }, help);
  };
  keyed("phonemes", "phoneme inventory file");
  keyed("clusters", "linguistic cluster file");
  keyed("acoustic", "raw acoustic table CSV");
  keyed("lexicon", "pronunciation dictionary");
  keyed("grammar", "name grammar file");
  keyed("corpus", "corpus JSONL file");
  keyed("outdir", "output directory");
  keyed("matrix_cache", "name-distance cache file");
  keyed("lazy_matrix", "compute name-distance rows on demand (true/false)");
  keyed("r0", "phoneme search radius");
  keyed("m_max", "length that triggers radius reduction");
  keyed("k1", "pronunciation cap per name");
  keyed("k2", "pronunciation cap per word");
  keyed("order", "determination order: natural|descending|ascending");
  keyed("reject_threshold", "no-match threshold");
  keyed("allow_deletion", "include the deletion candidate (true/false)");
  keyed("lambda", "score temperature");
  keyed("rho", "per-phoneme corruption probability");
  cmd->add_option_function<std::string>(
      "--seed", [&opts](const std::string& v) { opts.overrides["seed"] = v; },
      "random seed");
  cmd->add_option_function<std::string>(
      "--jobs", [&opts](const std::string& v) { opts.overrides["jobs"] = v; },
      "worker thread cap (0 = default)");
}

void finalize_config(CliOptions& opts) {
  if (!opts.config_path.empty())
    apply_config(opts.cfg, load_config_file(opts.config_path));
  apply_config(opts.cfg, opts.overrides);  // flags win
  if (opts.cfg.jobs > 0) omp_set_num_threads(opts.cfg.jobs);
}

PhonemeTable load_table(const RunConfig& cfg) {
  return load_phoneme_table(cfg.phonemes, cfg.clusters, cfg.acoustic);
}

NameDistanceMatrix name_distances(const RunConfig& cfg, const Grammar& grammar,
                                  const Lexicon& lex,
                                  const ConfusionMatrix& m) {
  if (cfg.lazy_matrix) return NameDistanceMatrix::lazy(grammar, lex, m);
  if (!cfg.matrix_cache.empty()) {
    if (auto cached =
            NameDistanceMatrix::load_cache(cfg.matrix_cache, grammar, lex, m)) {
      std::cerr << "namelex: reusing distance cache " << cfg.matrix_cache
                << "\n";
      return std::move(*cached);
    }
  }
  auto ndm = NameDistanceMatrix::build(grammar, lex, m);
  if (!cfg.matrix_cache.empty()) {
    ndm.save_cache(cfg.matrix_cache);
    std::cerr << "namelex: wrote distance cache " << cfg.matrix_cache << "\n";
  }
  return ndm;
}

std::filesystem::path out_path(const RunConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.outdir);
  return std::filesystem::path(cfg.outdir) / name;
}

// ---- distance ---------------------------------------------------------------

int cmd_distance(const CliOptions& opts, const std::string& a_text,
                 const std::string& b_text) {
  PhonemeTable table = load_table(opts.cfg);
  Pronunciation a = parse_pronunciation(a_text, table.phonemes);
  Pronunciation b = parse_pronunciation(b_text, table.phonemes);
  if (a.empty() || b.empty()) fail_input("empty pronunciation");
  std::cout << std::fixed << std::setprecision(6)
            << pron_distance(a, b, table.matrix) << "\n";
  return 0;
}

// ---- candidates -------------------------------------------------------------

int cmd_candidates(const CliOptions& opts, const std::string& word,
                   const std::string& pron_text) {
  PhonemeTable table = load_table(opts.cfg);
  Pronunciation base;
  if (!pron_text.empty()) {
    base = parse_pronunciation(pron_text, table.phonemes);
  } else {
    if (word.empty()) fail_input("need a word or --pron");
    Lexicon lex = load_lexicon_file(opts.cfg.lexicon, table.phonemes);
    base = lex.canonical(word);
  }

  const LearnConfig& learn = opts.cfg.learn;
  CandidateSpace space = build_candidate_space(
      base, learn.r0, learn.m_max, table.matrix, learn.allow_deletion);

  if (!word.empty()) std::cout << "word: " << word << "\n";
  std::cout << "base: " << format_pronunciation(base, table.phonemes) << "\n";
  std::cout << std::fixed << std::setprecision(6);
  std::cout << "radius: " << space.effective_radius << " (requested "
            << space.requested_radius << ")\n";
  for (std::size_t m = space.length(); m >= 1; --m) {
    const auto& list = space.positions[space.length() - m];
    std::cout << "position " << m << " ("
              << table.phonemes.symbol(base[space.length() - m])
              << "): N=" << list.size() << " [";
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (i) std::cout << ' ';
      std::cout << (list[i].id == kVoidPhoneme
                        ? "-"
                        : table.phonemes.symbol(list[i].id));
    }
    std::cout << "]\n";
  }
  std::cout << "X = " << space.total << "\n";

  auto rows = candidate_table(space, table.phonemes);
  std::cout << "x";
  for (std::size_t m = space.length(); m >= 1; --m) std::cout << "\tn" << m;
  std::cout << "\tpronunciation\n";
  for (const auto& row : rows) {
    std::cout << row.x;
    for (auto d : row.digits) std::cout << "\t" << d;
    std::cout << "\t" << row.symbols << "\n";
  }
  return 0;
}

// ---- synth ------------------------------------------------------------------

int cmd_synth(const CliOptions& opts, const std::string& variants_path,
              std::size_t per_name, const std::string& out_file) {
  PhonemeTable table = load_table(opts.cfg);
  Lexicon lex = load_lexicon_file(opts.cfg.lexicon, table.phonemes);
  Grammar grammar = load_grammar_file(opts.cfg.grammar);
  std::vector<WordVariant> variants;
  if (!variants_path.empty())
    variants = load_variants_file(variants_path, table.phonemes);

  auto corpus = synthesize_corpus(grammar, lex, variants, opts.cfg.channel,
                                  table.matrix, per_name);

  std::ostringstream header;
  header << "# namelex corpus: seed=" << opts.cfg.channel.seed
         << " lambda=" << opts.cfg.channel.lambda
         << " rho=" << opts.cfg.channel.rho << " per_name=" << per_name
         << "\n";
  if (out_file.empty() || out_file == "-") {
    std::cout << header.str();
    serialize_corpus(std::cout, corpus, table.phonemes);
  } else {
    std::ofstream out(out_file);
    if (!out) fail_input("cannot write ", out_file);
    out << header.str();
    serialize_corpus(out, corpus, table.phonemes);
    std::cerr << "namelex: wrote " << corpus.size() << " utterances to "
              << out_file << "\n";
  }
  return 0;
}

// ---- learn ------------------------------------------------------------------

int cmd_learn(const CliOptions& opts) {
  const RunConfig& cfg = opts.cfg;
  PhonemeTable table = load_table(cfg);
  Lexicon lex = load_lexicon_file(cfg.lexicon, table.phonemes);
  Grammar grammar = load_grammar_file(cfg.grammar);
  auto corpus = load_corpus_file(cfg.corpus, table.phonemes);
  validate_corpus(corpus, grammar);

  SimulatedRecognizer rec(table.matrix, cfg.channel.lambda,
                          cfg.learn.reject_threshold);
  auto ndm = name_distances(cfg, grammar, lex, table.matrix);
  auto outcome =
      learn_all(corpus, grammar, lex, cfg.learn, rec, table.matrix, ndm);

  auto lex_path = out_path(cfg, "lexicon.learned.dict");
  write_lexicon_file(lex_path.string(), outcome.lexicon, table.phonemes);
  auto report_path = out_path(cfg, "learn_report.json");
  {
    std::ofstream out(report_path);
    if (!out) fail_input("cannot write ", report_path.string());
    out << report_to_json(outcome.report, cfg.learn, cfg.channel,
                          table.phonemes);
  }

  std::cout << "errors: " << outcome.report.error_count << "/"
            << outcome.report.corpus_size << " instances, "
            << outcome.report.names.size() << " names\n";
  std::cout << "updated words: " << outcome.report.words_updated << "\n";
  std::cout << "lexicon: " << lex_path.string() << "\n";
  std::cout << "report: " << report_path.string() << "\n";
  return 0;
}

// ---- evaluate ---------------------------------------------------------------

int cmd_evaluate(const CliOptions& opts, const std::string& learned_path,
                 const std::string& sizes_text,
                 const std::string& instance_log) {
  const RunConfig& cfg = opts.cfg;
  PhonemeTable table = load_table(cfg);
  Lexicon lex = load_lexicon_file(cfg.lexicon, table.phonemes);
  Grammar grammar = load_grammar_file(cfg.grammar);
  auto corpus = load_corpus_file(cfg.corpus, table.phonemes);
  validate_corpus(corpus, grammar);

  SimulatedRecognizer rec(table.matrix, cfg.channel.lambda,
                          cfg.learn.reject_threshold);

  if (sizes_text.empty()) {
    auto base = evaluate(corpus, grammar, lex, rec);
    std::cout << std::fixed << std::setprecision(2);
    std::cout << "instances: " << base.total_instances << " (incorrect "
              << base.incorrect_instances << ")\n";
    std::cout << "unique names: " << base.unique_names << " (incorrect "
              << base.unique_incorrect << ")\n";
    std::cout << "ner: " << base.ner << "\n";
    if (!learned_path.empty()) {
      Lexicon learned = load_lexicon_file(learned_path, table.phonemes);
      auto after = evaluate(corpus, grammar, learned, rec);
      std::cout << "ner_learned: " << after.ner << "\n";
      std::cout << "err: " << err_percent(base.ner, after.ner) << "\n";
    }
    if (!instance_log.empty()) {
      std::ofstream out(instance_log);
      if (!out) fail_input("cannot write ", instance_log);
      write_instance_log_tsv(out, base);
    }
    return 0;
  }

  // sweep mode
  std::vector<std::size_t> sizes;
  std::stringstream ss(sizes_text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      sizes.push_back(std::stoull(tok));
    } catch (const std::exception&) {
      fail_input("bad sweep size \"", tok, "\"");
    }
  }
  Lexicon learned = learned_path.empty()
                        ? lex
                        : load_lexicon_file(learned_path, table.phonemes);
  auto sweep = grammar_sweep(corpus, grammar, sizes, cfg.channel.seed, lex,
                             learned, table.matrix, cfg.channel.lambda,
                             cfg.learn.reject_threshold);
  write_sweep_csv(std::cout, sweep);
  auto json_path = out_path(cfg, "sweep.json");
  std::ofstream out(json_path);
  if (!out) fail_input("cannot write ", json_path.string());
  out << sweep_to_json(sweep);
  std::cerr << "namelex: sweep detail in " << json_path.string() << "\n";
  return 0;
}

// ---- trace ------------------------------------------------------------------

int cmd_trace(const CliOptions& opts, const std::string& word,
              const std::string& pron_text, const std::string& observed_text) {
  PhonemeTable table = load_table(opts.cfg);
  Pronunciation base;
  if (!pron_text.empty()) {
    base = parse_pronunciation(pron_text, table.phonemes);
  } else {
    if (word.empty()) fail_input("need a word or --pron");
    Lexicon lex = load_lexicon_file(opts.cfg.lexicon, table.phonemes);
    base = lex.canonical(word);
  }
  Pronunciation observed = parse_pronunciation(observed_text, table.phonemes);
  if (observed.empty()) fail_input("empty observed pronunciation");

  const LearnConfig& learn = opts.cfg.learn;
  CandidateSpace space = build_candidate_space(
      base, learn.r0, learn.m_max, table.matrix, learn.allow_deletion);
  auto order = determination_order(space, learn.order_policy);

  SimulatedRecognizer rec(table.matrix, opts.cfg.channel.lambda,
                          learn.reject_threshold);
  ListScorer scorer = [&rec](const Pronunciation& obs,
                             std::span<const Pronunciation> prons) {
    return rec.score_list(obs, prons);
  };
  auto result = determine_best_pron(space, observed, order, scorer);

  std::cout << "base: " << format_pronunciation(base, table.phonemes)
            << "   observed: "
            << format_pronunciation(observed, table.phonemes) << "\n";
  std::cout << "order: " << RunConfig::order_policy_name(learn.order_policy)
            << " (";
  for (std::size_t i = 0; i < order.positions.size(); ++i)
    std::cout << (i ? " " : "") << "p" << order.positions[i];
  std::cout << ")\n" << std::fixed << std::setprecision(4);

  for (const auto& step : result.steps) {
    std::cout << "determine p" << step.position << ":";
    const auto& list = space.positions[space.length() - step.position];
    for (std::size_t v = 0; v < step.segment_scores.size(); ++v) {
      std::cout << "  [" << (list[v].id == kVoidPhoneme
                                 ? "-"
                                 : table.phonemes.symbol(list[v].id))
                << " x" << step.segment_sizes[v] << "] ";
      if (step.segment_scores[v] < 0.0)
        std::cout << "--";
      else
        std::cout << step.segment_scores[v];
    }
    std::cout << "  -> "
              << (step.chosen_phoneme == kVoidPhoneme
                      ? "-"
                      : table.phonemes.symbol(step.chosen_phoneme))
              << "\n";
  }
  std::cout << "best: " << format_pronunciation(result.best, table.phonemes)
            << "  score " << result.score << "  (x=" << result.index << ")\n";
  std::cout << "cost: " << result.cost.recognizer_runs << " runs, "
            << result.cost.prons_processed << " candidates processed\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pronunciation learning for grammar-based name recognition"};
  app.require_subcommand(1);

  CliOptions opts;

  auto* distance = app.add_subcommand(
      "distance", "normalized distance between two pronunciations");
  std::string pron_a, pron_b;
  distance->add_option("a", pron_a, "first pronunciation, e.g. \"p ey n\"")
      ->required();
  distance->add_option("b", pron_b, "second pronunciation")->required();
  add_common_options(distance, opts);

  auto* candidates = app.add_subcommand(
      "candidates", "enumerate the candidate pronunciations of a word");
  std::string cand_word, cand_pron;
  candidates->add_option("word", cand_word, "word to look up in the lexicon");
  candidates->add_option("--pron", cand_pron,
                         "explicit base pronunciation (skips the lexicon)");
  add_common_options(candidates, opts);

  auto* synth =
      app.add_subcommand("synth", "synthesize a corpus through the channel");
  std::string variants_path, synth_out;
  std::size_t per_name = 3;
  synth->add_option("--variants", variants_path, "word variants file");
  synth->add_option("--per-name", per_name, "utterances per name");
  synth->add_option("--out", synth_out, "output JSONL (default stdout)");
  add_common_options(synth, opts);

  auto* learn = app.add_subcommand("learn", "learn pronunciations from errors");
  add_common_options(learn, opts);

  auto* evaluate = app.add_subcommand("evaluate", "recognition error report");
  std::string learned_path, sizes_text, instance_log;
  evaluate->add_option("--learned", learned_path, "learned lexicon to compare");
  evaluate->add_option("--sizes", sizes_text,
                       "comma-separated grammar sizes for a nested sweep");
  evaluate->add_option("--instance-log", instance_log,
                       "write a per-instance TSV log here");
  add_common_options(evaluate, opts);

  auto* trace = app.add_subcommand(
      "trace", "step-by-step pronunciation determination");
  std::string trace_word, trace_pron, trace_observed;
  trace->add_option("word", trace_word, "word to look up in the lexicon");
  trace->add_option("--pron", trace_pron, "explicit base pronunciation");
  trace->add_option("--observed", trace_observed, "observed phoneme sequence")
      ->required();
  add_common_options(trace, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // malformed invocations are input errors
  }

  try {
    finalize_config(opts);
    if (distance->parsed()) return cmd_distance(opts, pron_a, pron_b);
    if (candidates->parsed()) return cmd_candidates(opts, cand_word, cand_pron);
    if (synth->parsed())
      return cmd_synth(opts, variants_path, per_name, synth_out);
    if (learn->parsed()) return cmd_learn(opts);
    if (evaluate->parsed())
      return cmd_evaluate(opts, learned_path, sizes_text, instance_log);
    if (trace->parsed())
      return cmd_trace(opts, trace_word, trace_pron, trace_observed);
  } catch (const InputError& e) {
    std::cerr << "namelex: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "namelex: internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
