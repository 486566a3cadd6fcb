#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "namelex/lexicon.hpp"
#include "namelex/recognizer.hpp"

namespace namelex {

struct EvalResult {
  std::size_t total_instances = 0;
  std::size_t incorrect_instances = 0;
  std::size_t unique_names = 0;      // distinct truths among instances
  std::size_t unique_incorrect = 0;  // distinct truths with >= 1 error
  double ner = 0.0;                  // percent

  /// Per-instance outcome, aligned with the evaluated corpus order.
  struct InstanceLog {
    std::string instance_id;
    std::string truth;
    std::string hypothesis;  // empty = NO_MATCH
    double score = 0.0;      // 0 when NO_MATCH
    bool correct = false;
  };
  std::vector<InstanceLog> log;
};

/// Batch recognition with counting; parallelized by instance. The serial
/// variant is the reference implementation with identical output.
EvalResult evaluate(const std::vector<Utterance>& corpus,
                    const Grammar& grammar, const Lexicon& lex,
                    const Recognizer& rec);
EvalResult evaluate_serial(const std::vector<Utterance>& corpus,
                           const Grammar& grammar, const Lexicon& lex,
                           const Recognizer& rec);

/// Error reduction rate in percent; 0 when the baseline is already perfect.
double err_percent(double ner_base, double ner_learned);

struct SweepPoint {
  std::size_t grammar_size;
  EvalResult base;
  EvalResult learned;
  double err = 0.0;
};

struct SweepResult {
  std::uint64_t seed = 0;
  std::vector<SweepPoint> points;
};

/// Nested grammar-size sweep: one seeded shuffle of the grammar defines the
/// nesting (size G takes the first G shuffled names, so larger subsets
/// contain smaller ones); each point evaluates both lexicons on the
/// instances whose truth falls inside the subset.
SweepResult grammar_sweep(const std::vector<Utterance>& corpus,
                          const Grammar& grammar,
                          const std::vector<std::size_t>& sizes,
                          std::uint64_t seed, const Lexicon& lex_base,
                          const Lexicon& lex_learned, const ConfusionMatrix& m,
                          double lambda, double reject_threshold);

/// CSV mirror of the sweep: rows ner_base / ner_learned / err, one column
/// per grammar size, percentages to two decimals.
void write_sweep_csv(std::ostream& out, const SweepResult& sweep);
std::string sweep_to_json(const SweepResult& sweep);
void write_instance_log_tsv(std::ostream& out, const EvalResult& result);

}  // namespace namelex
