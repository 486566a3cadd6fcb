#include "namelex/recognizer.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "namelex/error.hpp"
#include "namelex/rng.hpp"

namespace namelex {

namespace {

std::ifstream open_or_fail(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_input("cannot open ", path);
  return in;
}

}  // namespace

double score_pron(const Pronunciation& observed,
                  const Pronunciation& candidate, const ConfusionMatrix& m,
                  double lambda) {
  return std::exp(-lambda * pron_distance(observed, candidate, m));
}

double score_pron_list(const Pronunciation& observed,
                       std::span<const Pronunciation> prons,
                       const ConfusionMatrix& m, double lambda) {
  if (prons.empty()) fail_input("scoring an empty pronunciation list");
  double best = 0.0;
  for (const auto& p : prons)
    best = std::max(best, score_pron(observed, p, m, lambda));
  return best;
}

// ---- GrammarPronTable -------------------------------------------------------

GrammarPronTable::GrammarPronTable(const Grammar& grammar,
                                   const Lexicon& lex) {
  rows_.resize(grammar.size());
  for (std::size_t g = 0; g < grammar.size(); ++g) {
    const Name& name = grammar.name(g);
    std::size_t combos = 1;
    for (const auto& word : name.words) {
      combos *= lex.prons(word).size();
      if (combos > kMaxCombos)
        fail_input("name \"", name.str(), "\" has more than ", kMaxCombos,
                   " pronunciation combinations");
      word_to_names_[word];  // ensure key exists
    }
    // cross product of per-word lists, concatenated
    std::vector<Pronunciation> row{Pronunciation{}};
    for (const auto& word : name.words) {
      std::vector<Pronunciation> next;
      next.reserve(row.size() * lex.prons(word).size());
      for (const auto& prefix : row) {
        for (const auto& wp : lex.prons(word)) {
          Pronunciation full = prefix;
          full.phonemes.insert(full.phonemes.end(), wp.phonemes.begin(),
                               wp.phonemes.end());
          next.push_back(std::move(full));
        }
      }
      row = std::move(next);
    }
    rows_[g] = std::move(row);
    for (const auto& word : name.words) {
      auto& lst = word_to_names_[word];
      if (lst.empty() || lst.back() != g) lst.push_back(g);
    }
  }
}

const std::vector<std::size_t>& GrammarPronTable::names_with_word(
    const std::string& word) const {
  static const std::vector<std::size_t> kEmpty;
  auto it = word_to_names_.find(word);
  return it == word_to_names_.end() ? kEmpty : it->second;
}

GrammarPronTable GrammarPronTable::with_added_pron(
    const Grammar& grammar, const Lexicon& lex, const std::string& word,
    const Pronunciation& extra) const {
  GrammarPronTable out;
  out.word_to_names_ = word_to_names_;
  out.rows_ = rows_;

  Lexicon overlay = lex;
  overlay.add(word, extra);
  for (std::size_t g : names_with_word(word)) {
    const Name& name = grammar.name(g);
    std::size_t combos = 1;
    for (const auto& w : name.words) combos *= overlay.prons(w).size();
    if (combos > kMaxCombos)
      fail_input("name \"", name.str(), "\" has more than ", kMaxCombos,
                 " pronunciation combinations");
    std::vector<Pronunciation> row{Pronunciation{}};
    for (const auto& w : name.words) {
      std::vector<Pronunciation> next;
      for (const auto& prefix : row) {
        for (const auto& wp : overlay.prons(w)) {
          Pronunciation full = prefix;
          full.phonemes.insert(full.phonemes.end(), wp.phonemes.begin(),
                               wp.phonemes.end());
          next.push_back(std::move(full));
        }
      }
      row = std::move(next);
    }
    out.rows_[g] = std::move(row);
  }
  return out;
}

// ---- recognition ------------------------------------------------------------

RecognitionResult recognize_with_table(const GrammarPronTable& table,
                                       const Pronunciation& observed,
                                       const ConfusionMatrix& m, double lambda,
                                       double reject_threshold) {
  RecognitionResult result;
  double best = -1.0;
  std::size_t best_name = 0;
  for (std::size_t g = 0; g < table.size(); ++g) {
    double s = score_pron_list(observed, table.prons_of(g), m, lambda);
    if (s > best) {  // ties keep the earliest grammar entry
      best = s;
      best_name = g;
    }
  }
  if (best >= reject_threshold) result.match = {{best_name, best}};
  return result;
}

RecognitionResult recognize(const Grammar& grammar, const Lexicon& lex,
                            const Utterance& u, const ConfusionMatrix& m,
                            double lambda, double reject_threshold) {
  GrammarPronTable table(grammar, lex);
  return recognize_with_table(table, u.observed, m, lambda, reject_threshold);
}

RecognitionResult SimulatedRecognizer::recognize(const Grammar& grammar,
                                                 const Lexicon& lex,
                                                 const Utterance& u) const {
  return namelex::recognize(grammar, lex, u, matrix_, lambda_,
                            reject_threshold_);
}

double SimulatedRecognizer::score_list(
    const Pronunciation& observed, std::span<const Pronunciation> prons) const {
  return score_pron_list(observed, prons, matrix_, lambda_);
}

// ---- corpus synthesis -------------------------------------------------------

std::vector<WordVariant> parse_variants(std::istream& in,
                                        const PhonemeSet& phonemes,
                                        const std::string& source) {
  std::vector<WordVariant> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream is(line);
    WordVariant v;
    std::string frac;
    if (!(is >> v.word)) continue;
    if (v.word[0] == '#') continue;
    if (!(is >> frac)) fail_parse(source, lineno, "missing fraction");
    try {
      v.fraction = std::stod(frac);
    } catch (const std::exception&) {
      fail_parse(source, lineno, "bad fraction \"", frac, "\"");
    }
    if (v.fraction < 0.0 || v.fraction > 1.0)
      fail_parse(source, lineno, "fraction must be in [0, 1]");
    std::string sym;
    std::vector<PhonemeId> ids;
    while (is >> sym) {
      if (!phonemes.contains(sym))
        fail_parse(source, lineno, "unknown phoneme \"", sym, "\"");
      ids.push_back(phonemes.id(sym));
    }
    if (ids.empty()) fail_parse(source, lineno, "missing pronunciation");
    v.pron = Pronunciation(std::move(ids));
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<WordVariant> load_variants_file(const std::string& path,
                                            const PhonemeSet& phonemes) {
  auto in = open_or_fail(path);
  return parse_variants(in, phonemes, path);
}

namespace {

/// Corrupts one phoneme: q != p drawn with weight exp(-lambda * m(p, q)).
PhonemeId corrupt_phoneme(PhonemeId p, const ConfusionMatrix& m,
                          double lambda, Rng& rng) {
  std::array<double, kNumPhonemes> weights;
  double total = 0.0;
  for (std::size_t q = 0; q < kNumPhonemes; ++q) {
    weights[q] = q == p ? 0.0 : std::exp(-lambda * m(p, PhonemeId(q)));
    total += weights[q];
  }
  double draw = rng.uniform01() * total;
  double acc = 0.0;
  for (std::size_t q = 0; q < kNumPhonemes; ++q) {
    acc += weights[q];
    if (draw < acc) return PhonemeId(q);
  }
  return PhonemeId(kNumPhonemes - 1);  // numeric edge of the cumulative scan
}

}  // namespace

Utterance synthesize_utterance(const Name& truth, const Lexicon& lex,
                               const std::optional<Pronunciation>& variant,
                               const ChannelModel& channel,
                               const ConfusionMatrix& m,
                               const std::string& instance_id) {
  Utterance u;
  u.instance_id = instance_id;
  u.truth = truth.str();
  const Pronunciation intended =
      variant ? *variant : name_pronunciation(truth, lex);

  Rng rng(mix_seed(channel.seed, instance_id));
  u.observed = intended;
  for (auto& p : u.observed.phonemes)
    if (rng.uniform01() < channel.rho)
      p = corrupt_phoneme(p, m, channel.lambda, rng);
  return u;
}

namespace {

/// Intended pronunciation of one instance: per-word variant draws first,
/// then the channel. Uses its own sub-stream so the corruption draws stay
/// aligned across variant configurations.
Utterance synthesize_one(const Grammar& grammar, const Lexicon& lex,
                         const std::vector<WordVariant>& variants,
                         const ChannelModel& channel, const ConfusionMatrix& m,
                         std::size_t name_index, std::size_t rep) {
  const Name& name = grammar.name(name_index);
  std::string id = name.str();
  for (auto& c : id)
    if (c == ' ') c = '_';
  id += "#" + std::to_string(rep);

  Rng vrng(mix_seed(channel.seed ^ 0x5EEDF00Dull, id));
  std::vector<Pronunciation> parts;
  parts.reserve(name.words.size());
  for (const auto& word : name.words) {
    Pronunciation part = lex.canonical(word);
    // one draw per word; multiple entries for a word occupy consecutive
    // probability brackets
    double draw = vrng.uniform01();
    double acc = 0.0;
    for (const auto& v : variants) {
      if (v.word != word) continue;
      acc += v.fraction;
      if (draw < acc) {
        part = v.pron;
        break;
      }
    }
    parts.push_back(std::move(part));
  }
  return synthesize_utterance(name, lex, concat(parts), channel, m, id);
}

}  // namespace

std::vector<Utterance> synthesize_corpus_serial(
    const Grammar& grammar, const Lexicon& lex,
    const std::vector<WordVariant>& variants, const ChannelModel& channel,
    const ConfusionMatrix& m, std::size_t per_name) {
  std::vector<Utterance> corpus(grammar.size() * per_name);
  for (std::size_t g = 0; g < grammar.size(); ++g)
    for (std::size_t r = 0; r < per_name; ++r)
      corpus[g * per_name + r] =
          synthesize_one(grammar, lex, variants, channel, m, g, r);
  return corpus;
}

std::vector<Utterance> synthesize_corpus(const Grammar& grammar,
                                         const Lexicon& lex,
                                         const std::vector<WordVariant>& variants,
                                         const ChannelModel& channel,
                                         const ConfusionMatrix& m,
                                         std::size_t per_name) {
  std::vector<Utterance> corpus(grammar.size() * per_name);
  const std::int64_t n = static_cast<std::int64_t>(corpus.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    std::size_t g = std::size_t(i) / per_name;
    std::size_t r = std::size_t(i) % per_name;
    corpus[std::size_t(i)] =
        synthesize_one(grammar, lex, variants, channel, m, g, r);
  }
  return corpus;
}

// ---- corpus file ------------------------------------------------------------

std::vector<Utterance> parse_corpus(std::istream& in,
                                    const PhonemeSet& phonemes,
                                    const std::string& source) {
  std::vector<Utterance> corpus;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    if (line[0] == '#') continue;  // metadata comment (seed etc.)
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      fail_parse(source, lineno, "bad JSON: ", e.what());
    }
    if (!j.contains("instance_id") || !j.contains("truth") ||
        !j.contains("observed"))
      fail_parse(source, lineno,
                 "record needs instance_id, truth and observed");
    Utterance u;
    u.instance_id = j["instance_id"].get<std::string>();
    u.truth = j["truth"].get<std::string>();
    try {
      u.observed =
          parse_pronunciation(j["observed"].get<std::string>(), phonemes);
    } catch (const InputError& e) {
      fail_parse(source, lineno, e.what());
    }
    if (u.observed.empty()) fail_parse(source, lineno, "empty observed");
    corpus.push_back(std::move(u));
  }
  return corpus;
}

std::vector<Utterance> load_corpus_file(const std::string& path,
                                        const PhonemeSet& phonemes) {
  auto in = open_or_fail(path);
  return parse_corpus(in, phonemes, path);
}

void serialize_corpus(std::ostream& out, const std::vector<Utterance>& corpus,
                      const PhonemeSet& phonemes) {
  for (const auto& u : corpus) {
    nlohmann::ordered_json j;
    j["instance_id"] = u.instance_id;
    j["truth"] = u.truth;
    j["observed"] = format_pronunciation(u.observed, phonemes);
    out << j.dump() << "\n";
  }
}

void write_corpus_file(const std::string& path,
                       const std::vector<Utterance>& corpus,
                       const PhonemeSet& phonemes) {
  std::ofstream out(path);
  if (!out) fail_input("cannot write ", path);
  serialize_corpus(out, corpus, phonemes);
}

void validate_corpus(const std::vector<Utterance>& corpus,
                     const Grammar& grammar) {
  for (const auto& u : corpus)
    if (!grammar.index_of(u.truth))
      fail_input("corpus instance ", u.instance_id, ": truth \"", u.truth,
                 "\" is not in the grammar");
}

}  // namespace namelex
