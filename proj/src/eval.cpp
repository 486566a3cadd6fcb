#include "namelex/eval.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "namelex/error.hpp"
#include "namelex/rng.hpp"

namespace namelex {

namespace {

EvalResult summarize(const std::vector<Utterance>& corpus,
                     std::vector<EvalResult::InstanceLog> log) {
  EvalResult result;
  result.total_instances = corpus.size();
  std::set<std::string> names, wrong_names;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    names.insert(corpus[i].truth);
    if (!log[i].correct) {
      ++result.incorrect_instances;
      wrong_names.insert(corpus[i].truth);
    }
  }
  result.unique_names = names.size();
  result.unique_incorrect = wrong_names.size();
  result.ner = result.total_instances == 0
                   ? 0.0
                   : 100.0 * double(result.incorrect_instances) /
                         double(result.total_instances);
  result.log = std::move(log);
  return result;
}

EvalResult::InstanceLog evaluate_one(const Utterance& u, const Grammar& grammar,
                                     const Lexicon& lex,
                                     const Recognizer& rec) {
  auto truth_index = grammar.index_of(u.truth);
  if (!truth_index)
    fail_input("corpus instance ", u.instance_id, ": truth \"", u.truth,
               "\" is not in the grammar");
  RecognitionResult r = rec.recognize(grammar, lex, u);
  EvalResult::InstanceLog log;
  log.instance_id = u.instance_id;
  log.truth = u.truth;
  if (r.match) {
    log.hypothesis = grammar.name(r.match->name).str();
    log.score = r.match->score;
  }
  log.correct = r.matched(*truth_index);
  return log;
}

}  // namespace

EvalResult evaluate_serial(const std::vector<Utterance>& corpus,
                           const Grammar& grammar, const Lexicon& lex,
                           const Recognizer& rec) {
  std::vector<EvalResult::InstanceLog> log(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i)
    log[i] = evaluate_one(corpus[i], grammar, lex, rec);
  return summarize(corpus, std::move(log));
}

EvalResult evaluate(const std::vector<Utterance>& corpus,
                    const Grammar& grammar, const Lexicon& lex,
                    const Recognizer& rec) {
  validate_corpus(corpus, grammar);
  std::vector<EvalResult::InstanceLog> log(corpus.size());
  const std::int64_t n = static_cast<std::int64_t>(corpus.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < n; ++i)
    log[std::size_t(i)] = evaluate_one(corpus[std::size_t(i)], grammar, lex, rec);
  return summarize(corpus, std::move(log));
}

double err_percent(double ner_base, double ner_learned) {
  if (ner_base == 0.0) return 0.0;
  return 100.0 * (ner_base - ner_learned) / ner_base;
}

SweepResult grammar_sweep(const std::vector<Utterance>& corpus,
                          const Grammar& grammar,
                          const std::vector<std::size_t>& sizes,
                          std::uint64_t seed, const Lexicon& lex_base,
                          const Lexicon& lex_learned, const ConfusionMatrix& m,
                          double lambda, double reject_threshold) {
  if (sizes.empty()) fail_input("sweep needs at least one grammar size");
  if (!std::is_sorted(sizes.begin(), sizes.end()))
    fail_input("sweep sizes must be ascending");
  if (sizes.back() > grammar.size())
    fail_input("sweep size ", sizes.back(), " exceeds grammar size ",
               grammar.size());

  // one seeded shuffle; prefixes of it give nested subsets
  std::vector<std::size_t> shuffled(grammar.size());
  for (std::size_t i = 0; i < shuffled.size(); ++i) shuffled[i] = i;
  Rng rng(seed);
  rng.shuffle(shuffled);

  SweepResult sweep;
  sweep.seed = seed;
  SimulatedRecognizer rec_base(m, lambda, reject_threshold);

  for (std::size_t g : sizes) {
    std::vector<Name> subset_names;
    subset_names.reserve(g);
    std::set<std::string> member_strs;
    for (std::size_t i = 0; i < g; ++i) {
      subset_names.push_back(grammar.name(shuffled[i]));
      member_strs.insert(subset_names.back().str());
    }
    Grammar subset(std::move(subset_names));

    std::vector<Utterance> subset_corpus;
    for (const auto& u : corpus)
      if (member_strs.count(u.truth)) subset_corpus.push_back(u);

    SweepPoint point;
    point.grammar_size = g;
    point.base = evaluate(subset_corpus, subset, lex_base, rec_base);
    point.learned = evaluate(subset_corpus, subset, lex_learned, rec_base);
    point.err = err_percent(point.base.ner, point.learned.ner);
    sweep.points.push_back(std::move(point));
  }
  return sweep;
}

namespace {

std::string pct(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << v;
  return os.str();
}

}  // namespace

void write_sweep_csv(std::ostream& out, const SweepResult& sweep) {
  out << "metric";
  for (const auto& p : sweep.points) out << "," << p.grammar_size;
  out << "\n";
  out << "ner_base";
  for (const auto& p : sweep.points) out << "," << pct(p.base.ner);
  out << "\n";
  out << "ner_learned";
  for (const auto& p : sweep.points) out << "," << pct(p.learned.ner);
  out << "\n";
  out << "err";
  for (const auto& p : sweep.points) out << "," << pct(p.err);
  out << "\n";
}

namespace {

nlohmann::ordered_json eval_to_json(const EvalResult& r) {
  nlohmann::ordered_json j;
  j["total_instances"] = r.total_instances;
  j["incorrect_instances"] = r.incorrect_instances;
  j["unique_names"] = r.unique_names;
  j["unique_incorrect"] = r.unique_incorrect;
  j["ner"] = r.ner;
  return j;
}

}  // namespace

std::string sweep_to_json(const SweepResult& sweep) {
  nlohmann::ordered_json j;
  j["seed"] = sweep.seed;
  j["points"] = nlohmann::ordered_json::array();
  for (const auto& p : sweep.points) {
    nlohmann::ordered_json pj;
    pj["grammar_size"] = p.grammar_size;
    pj["base"] = eval_to_json(p.base);
    pj["learned"] = eval_to_json(p.learned);
    pj["err"] = p.err;
    j["points"].push_back(std::move(pj));
  }
  return j.dump(2) + "\n";
}

void write_instance_log_tsv(std::ostream& out, const EvalResult& result) {
  out << "instance_id\ttruth\thypothesis\tscore\tcorrect\n";
  for (const auto& log : result.log) {
    out << log.instance_id << "\t" << log.truth << "\t"
        << (log.hypothesis.empty() ? "NO_MATCH" : log.hypothesis) << "\t"
        << std::fixed << std::setprecision(6) << log.score << "\t"
        << (log.correct ? 1 : 0) << "\n";
  }
}

}  // namespace namelex
