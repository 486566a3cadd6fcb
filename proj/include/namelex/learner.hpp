#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "namelex/candidates.hpp"
#include "namelex/distance.hpp"
#include "namelex/hpd.hpp"
#include "namelex/lexicon.hpp"
#include "namelex/recognizer.hpp"

namespace namelex {

struct LearnConfig {
  double r0 = 3.0;          // phoneme search radius
  std::size_t m_max = 6;    // base length that triggers radius reduction
  std::size_t k1 = 3;       // learned-pronunciation cap per name
  std::size_t k2 = 3;       // learned-pronunciation cap per word
  OrderPolicy order_policy = OrderPolicy::kDescending;
  double reject_threshold = 0.0;
  bool allow_deletion = false;
};

/// One misrecognized instance with its baseline hypothesis.
struct ErrorEntry {
  std::size_t corpus_index;
  std::size_t truth_name;                 // grammar index
  std::optional<std::size_t> hypothesis;  // empty = NO_MATCH
};

struct ErrorSet {
  std::vector<ErrorEntry> entries;
};

/// The target name plus every grammar name within its outreach distance.
struct RegionalNameset {
  std::size_t target;
  std::vector<std::size_t> members;  // sorted, includes target
  double radius_used;                // d_t
};

/// One learned pronunciation with its bookkeeping.
struct LearnedPron {
  std::string word;
  Pronunciation pron;
  double gain;                 // accuracy increment on the evaluation set
  std::string source_instance; // instance that proposed it
};

/// Baseline recognition over the corpus; entries are exactly the instances
/// whose hypothesis differs from the truth (NO_MATCH included).
ErrorSet collect_errors(const std::vector<Utterance>& corpus,
                        const Grammar& grammar, const Lexicon& lex,
                        const Recognizer& rec);

/// Per-word candidate spaces of a name's canonical pronunciations, with the
/// name-level outreach distance (length-weighted average of the per-word
/// outreach distances, i.e. the concatenated-sequence average).
struct NameCandidateSpaces {
  std::vector<CandidateSpace> word_spaces;  // one per word of the name
  double outreach;                          // d_t
};
NameCandidateSpaces name_candidate_spaces(const Name& name, const Lexicon& lex,
                                          const LearnConfig& cfg,
                                          const ConfusionMatrix& m);

RegionalNameset regional_nameset(std::size_t target, double d_t,
                                 const NameDistanceMatrix& ndm);

/// Word positions (0-based) of the truth name that absorb an above-average
/// share of the alignment cost between the observed sequence and the
/// canonical name pronunciation. Never empty: the costliest word (ties to
/// the last) is always flagged.
std::vector<std::size_t> identify_error_words(const Name& truth,
                                              const Lexicon& lex,
                                              const Utterance& u,
                                              const ConfusionMatrix& m);

/// Best candidate pronunciation for one flagged word of one misrecognized
/// instance: hierarchical determination over the word's candidate space,
/// each word candidate scored embedded in the full name pronunciation
/// (other words canonical) against the observed sequence.
struct InstanceLearnResult {
  Pronunciation pron;
  double score;
  CostEstimate cost;
};
InstanceLearnResult learn_instance(const Utterance& u, std::size_t word_pos,
                                   const Name& truth, const Lexicon& lex,
                                   const CandidateSpace& word_space,
                                   const LearnConfig& cfg,
                                   const Recognizer& rec);

/// Accuracy change on the regional nameset's corpus instances from adding
/// p_star to word's pronunciation list (full grammar; neighbors can steal).
double accuracy_increment(const Pronunciation& p_star, const std::string& word,
                          const RegionalNameset& dr,
                          const std::vector<Utterance>& corpus,
                          const Grammar& grammar, const Lexicon& lex,
                          const Recognizer& rec);

/// Deduplicates per-instance results (best gain per distinct word+pron),
/// sorts by gain (ties: earliest instance), drops non-positive gains, and
/// truncates to k1 per name.
std::vector<LearnedPron> learn_name(std::vector<LearnedPron> proposals,
                                    std::size_t k1);

/// Per-word pruning: every learned pronunciation is re-scored by its
/// accuracy boost over the instances of all names containing the word,
/// then sorted, truncated to k2, non-positive entries dropped.
struct WordPruneResult {
  std::vector<LearnedPron> kept;  // gain field holds the per-word boost
  std::size_t nameset_size = 0;   // |D_w|
};
WordPruneResult prune_per_word(const std::string& word,
                               std::vector<LearnedPron> learned,
                               const Grammar& grammar,
                               const std::vector<Utterance>& corpus,
                               const Lexicon& lex, const Recognizer& rec,
                               std::size_t k2);

/// Replacement update: every word with a nonempty final list has its
/// pronunciation list replaced by the learned list; other words keep their
/// baseline entries.
Lexicon apply_learned(
    const Lexicon& lex,
    const std::map<std::string, std::vector<LearnedPron>>& final_lists);

// ---- full pipeline ---------------------------------------------------------

struct NameReport {
  std::size_t name_index;
  std::string name;
  std::vector<std::string> error_instances;
  double outreach = 0.0;          // d_t
  std::size_t regional_size = 0;  // |D_r|
  std::vector<LearnedPron> learned;
  std::string failure;  // nonempty if this name's learning failed
};

struct WordReport {
  std::string word;
  std::size_t nameset_size = 0;
  std::vector<LearnedPron> final_prons;
};

struct LearnReport {
  std::vector<NameReport> names;
  std::vector<WordReport> words;
  std::size_t corpus_size = 0;
  std::size_t error_count = 0;
  std::size_t words_updated = 0;
  std::uint64_t recognizer_runs = 0;
  std::uint64_t prons_processed = 0;
};

struct LearnOutcome {
  Lexicon lexicon;
  LearnReport report;
};

/// The full pipeline: collect errors, learn per-instance pronunciations for
/// the flagged words of every misrecognized name, score increments on each
/// target's regional nameset, apply the per-name and per-word caps, and
/// produce the updated lexicon. Per-name failures are recorded in the
/// report without aborting the batch. Deterministic; per-name work runs in
/// parallel over immutable inputs.
LearnOutcome learn_all(const std::vector<Utterance>& corpus,
                       const Grammar& grammar, const Lexicon& lex,
                       const LearnConfig& cfg, const Recognizer& rec,
                       const ConfusionMatrix& m,
                       const NameDistanceMatrix& ndm);

/// Report serialization (deterministic; no wall-clock content). The
/// channel echo ties the report to the corpus generation parameters.
std::string report_to_json(const LearnReport& report, const LearnConfig& cfg,
                           const ChannelModel& channel,
                           const PhonemeSet& phonemes);

}  // namespace namelex
