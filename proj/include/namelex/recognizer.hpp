#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "namelex/distance.hpp"
#include "namelex/lexicon.hpp"
#include "namelex/phoneme.hpp"
#include "namelex/pronunciation.hpp"

namespace namelex {

/// One corpus unit: the observed phoneme sequence standing in for audio,
/// labeled with its true name.
struct Utterance {
  std::string instance_id;  // unique corpus key
  std::string truth;        // name string form
  Pronunciation observed;

  bool operator==(const Utterance&) const = default;
};

struct RecognitionResult {
  struct Match {
    std::size_t name;  // grammar index
    double score;      // confidence in (0, 1]
  };
  std::optional<Match> match;  // empty means NO_MATCH

  bool matched(std::size_t name) const {
    return match.has_value() && match->name == name;
  }
};

/// Parameters of the simulated acoustic channel. lambda is the score
/// temperature, rho the per-phoneme corruption probability; everything is
/// deterministic given the seed.
struct ChannelModel {
  double lambda = 4.0;
  double rho = 0.05;
  std::uint64_t seed = 1;
};

/// Simulated confidence for one candidate pronunciation:
/// exp(-lambda * pron_distance(observed, candidate)). 1.0 iff distance 0.
double score_pron(const Pronunciation& observed, const Pronunciation& candidate,
                  const ConfusionMatrix& m, double lambda);

/// Single-name scoring: the best score over a pronunciation list. Only the
/// maximum is returned, never which pronunciation achieved it — mirroring
/// engines that hide the winning pronunciation.
double score_pron_list(const Pronunciation& observed,
                       std::span<const Pronunciation> prons,
                       const ConfusionMatrix& m, double lambda);

/// Full-name pronunciations of each grammar entry: the cross product of
/// per-word pronunciation lists, concatenated. Rebuilding after a
/// single-word change touches only the names containing that word.
class GrammarPronTable {
 public:
  /// Throws on missing lexicon words or more than kMaxCombos combinations
  /// for one name.
  GrammarPronTable(const Grammar& grammar, const Lexicon& lex);

  static constexpr std::size_t kMaxCombos = 256;

  const std::vector<Pronunciation>& prons_of(std::size_t name) const {
    return rows_[name];
  }
  std::size_t size() const { return rows_.size(); }
  /// Grammar indices of names containing `word`.
  const std::vector<std::size_t>& names_with_word(
      const std::string& word) const;

  /// Copy with `extra` appended to one word's pronunciation list; only the
  /// rows of names containing that word are rebuilt.
  GrammarPronTable with_added_pron(const Grammar& grammar, const Lexicon& lex,
                                   const std::string& word,
                                   const Pronunciation& extra) const;

 private:
  GrammarPronTable() = default;
  std::vector<std::vector<Pronunciation>> rows_;
  std::map<std::string, std::vector<std::size_t>> word_to_names_;
};

/// Grammar-constrained recognition of one utterance: every name is scored
/// via score_pron_list, the best name wins if its score reaches
/// reject_threshold, ties break toward the earliest grammar entry.
RecognitionResult recognize(const Grammar& grammar, const Lexicon& lex,
                            const Utterance& u, const ConfusionMatrix& m,
                            double lambda, double reject_threshold);

/// Same decision rule against a prebuilt pronunciation table.
RecognitionResult recognize_with_table(const GrammarPronTable& table,
                                       const Pronunciation& observed,
                                       const ConfusionMatrix& m, double lambda,
                                       double reject_threshold);

/// Abstract recognition engine. The learner and the determination logic
/// only ever see this interface, so the simulator can be swapped for a
/// real engine.
class Recognizer {
 public:
  virtual ~Recognizer() = default;
  /// Multi-grammar mode: best name in the grammar, or NO_MATCH.
  virtual RecognitionResult recognize(const Grammar& grammar,
                                      const Lexicon& lex,
                                      const Utterance& u) const = 0;
  /// Mono-grammar mode: top score over one pronunciation list.
  virtual double score_list(const Pronunciation& observed,
                            std::span<const Pronunciation> prons) const = 0;
};

/// Confusion-matrix-driven engine used throughout: replaces the original
/// acoustic model with exp(-lambda * distance) scoring.
class SimulatedRecognizer : public Recognizer {
 public:
  SimulatedRecognizer(const ConfusionMatrix& m, double lambda,
                      double reject_threshold)
      : matrix_(m), lambda_(lambda), reject_threshold_(reject_threshold) {}

  RecognitionResult recognize(const Grammar& grammar, const Lexicon& lex,
                              const Utterance& u) const override;
  double score_list(const Pronunciation& observed,
                    std::span<const Pronunciation> prons) const override;

  const ConfusionMatrix& matrix() const { return matrix_; }
  double lambda() const { return lambda_; }
  double reject_threshold() const { return reject_threshold_; }

 private:
  const ConfusionMatrix& matrix_;
  double lambda_;
  double reject_threshold_;
};

// ---- corpus synthesis ------------------------------------------------------

/// Speaker variants for corpus synthesis: a fraction of a word's instances
/// are spoken with an alternative pronunciation.
struct WordVariant {
  std::string word;
  double fraction;  // in [0, 1]
  Pronunciation pron;
};

/// Variants file: one entry per line, `word  fraction  phoneme phoneme ...`.
std::vector<WordVariant> parse_variants(std::istream& in,
                                        const PhonemeSet& phonemes,
                                        const std::string& source);
std::vector<WordVariant> load_variants_file(const std::string& path,
                                            const PhonemeSet& phonemes);

/// Synthesizes one utterance: the intended pronunciation (variant if given,
/// canonical otherwise) passes through the noisy channel, each phoneme
/// independently corrupted with probability rho into a confusable phoneme
/// sampled with weight exp(-lambda * m(p, q)). Deterministic per
/// (channel.seed, instance_id).
Utterance synthesize_utterance(const Name& truth, const Lexicon& lex,
                               const std::optional<Pronunciation>& variant,
                               const ChannelModel& channel,
                               const ConfusionMatrix& m,
                               const std::string& instance_id);

/// Batch synthesis: per_name utterances for every grammar entry, applying
/// word variants by their fractions. Parallelized by instance; the serial
/// variant produces identical output.
std::vector<Utterance> synthesize_corpus(const Grammar& grammar,
                                         const Lexicon& lex,
                                         const std::vector<WordVariant>& variants,
                                         const ChannelModel& channel,
                                         const ConfusionMatrix& m,
                                         std::size_t per_name);
std::vector<Utterance> synthesize_corpus_serial(
    const Grammar& grammar, const Lexicon& lex,
    const std::vector<WordVariant>& variants, const ChannelModel& channel,
    const ConfusionMatrix& m, std::size_t per_name);

// ---- corpus file (JSON lines) ----------------------------------------------

std::vector<Utterance> parse_corpus(std::istream& in,
                                    const PhonemeSet& phonemes,
                                    const std::string& source);
std::vector<Utterance> load_corpus_file(const std::string& path,
                                        const PhonemeSet& phonemes);
void serialize_corpus(std::ostream& out, const std::vector<Utterance>& corpus,
                      const PhonemeSet& phonemes);
void write_corpus_file(const std::string& path,
                       const std::vector<Utterance>& corpus,
                       const PhonemeSet& phonemes);

/// Every truth label must name a grammar entry.
void validate_corpus(const std::vector<Utterance>& corpus,
                     const Grammar& grammar);

}  // namespace namelex
