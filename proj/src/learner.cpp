#include "namelex/learner.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "namelex/error.hpp"

namespace namelex {

namespace {

std::vector<std::size_t> truth_indices(const std::vector<Utterance>& corpus,
                                       const Grammar& grammar) {
  std::vector<std::size_t> out(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    auto idx = grammar.index_of(corpus[i].truth);
    if (!idx)
      fail_input("corpus instance ", corpus[i].instance_id, ": truth \"",
                 corpus[i].truth, "\" is not in the grammar");
    out[i] = *idx;
  }
  return out;
}

std::size_t count_correct(const Recognizer& rec, const Grammar& grammar,
                          const Lexicon& lex,
                          const std::vector<Utterance>& corpus,
                          const std::vector<std::size_t>& truths,
                          const std::vector<std::size_t>& subset) {
  std::size_t correct = 0;
  for (std::size_t i : subset) {
    RecognitionResult r = rec.recognize(grammar, lex, corpus[i]);
    if (r.matched(truths[i])) ++correct;
  }
  return correct;
}

}  // namespace

ErrorSet collect_errors(const std::vector<Utterance>& corpus,
                        const Grammar& grammar, const Lexicon& lex,
                        const Recognizer& rec) {
  auto truths = truth_indices(corpus, grammar);
  ErrorSet errors;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    RecognitionResult r = rec.recognize(grammar, lex, corpus[i]);
    if (!r.matched(truths[i])) {
      ErrorEntry e;
      e.corpus_index = i;
      e.truth_name = truths[i];
      if (r.match) e.hypothesis = r.match->name;
      errors.entries.push_back(e);
    }
  }
  return errors;
}

NameCandidateSpaces name_candidate_spaces(const Name& name, const Lexicon& lex,
                                          const LearnConfig& cfg,
                                          const ConfusionMatrix& m) {
  NameCandidateSpaces out;
  double weighted = 0.0;
  std::size_t total_len = 0;
  for (const auto& word : name.words) {
    CandidateSpace space = build_candidate_space(
        lex.canonical(word), cfg.r0, cfg.m_max, m, cfg.allow_deletion);
    weighted += outreach_distance(space) * double(space.length());
    total_len += space.length();
    out.word_spaces.push_back(std::move(space));
  }
  out.outreach = weighted / double(total_len);
  return out;
}

RegionalNameset regional_nameset(std::size_t target, double d_t,
                                 const NameDistanceMatrix& ndm) {
  RegionalNameset dr;
  dr.target = target;
  dr.radius_used = d_t;
  auto row = ndm.row(target);
  for (std::size_t s = 0; s < row.size(); ++s)
    if (s == target || row[s] <= d_t) dr.members.push_back(s);
  return dr;
}

std::vector<std::size_t> identify_error_words(const Name& truth,
                                              const Lexicon& lex,
                                              const Utterance& u,
                                              const ConfusionMatrix& m) {
  // word boundaries inside the concatenated canonical pronunciation
  std::vector<std::size_t> word_of_position;
  Pronunciation canonical;
  for (std::size_t w = 0; w < truth.words.size(); ++w) {
    const Pronunciation& p = lex.canonical(truth.words[w]);
    canonical.phonemes.insert(canonical.phonemes.end(), p.phonemes.begin(),
                              p.phonemes.end());
    word_of_position.insert(word_of_position.end(), p.size(), w);
  }

  auto per_position = align_reference_costs(u.observed, canonical, m);
  std::vector<double> word_cost(truth.words.size(), 0.0);
  for (std::size_t i = 0; i < per_position.size(); ++i)
    word_cost[word_of_position[i]] += per_position[i];

  double mean = 0.0;
  for (double c : word_cost) mean += c;
  mean /= double(word_cost.size());

  std::vector<std::size_t> flagged;
  for (std::size_t w = 0; w < word_cost.size(); ++w)
    if (word_cost[w] > mean) flagged.push_back(w);
  if (flagged.empty()) {
    // every misrecognized name yields at least one learning attempt;
    // ties go to the last word
    std::size_t best = 0;
    for (std::size_t w = 1; w < word_cost.size(); ++w)
      if (word_cost[w] >= word_cost[best]) best = w;
    flagged.push_back(best);
  }
  return flagged;
}

InstanceLearnResult learn_instance(const Utterance& u, std::size_t word_pos,
                                   const Name& truth, const Lexicon& lex,
                                   const CandidateSpace& word_space,
                                   const LearnConfig& cfg,
                                   const Recognizer& rec) {
  Pronunciation prefix, suffix;
  for (std::size_t w = 0; w < truth.words.size(); ++w) {
    if (w == word_pos) continue;
    const Pronunciation& p = lex.canonical(truth.words[w]);
    auto& dst = w < word_pos ? prefix : suffix;
    dst.phonemes.insert(dst.phonemes.end(), p.phonemes.begin(),
                        p.phonemes.end());
  }

  // mono-gram scoring of word candidates embedded in the full name
  ListScorer scorer = [&](const Pronunciation& observed,
                          std::span<const Pronunciation> prons) {
    std::vector<Pronunciation> embedded;
    embedded.reserve(prons.size());
    for (const auto& wp : prons) {
      Pronunciation full = prefix;
      full.phonemes.insert(full.phonemes.end(), wp.phonemes.begin(),
                           wp.phonemes.end());
      full.phonemes.insert(full.phonemes.end(), suffix.phonemes.begin(),
                           suffix.phonemes.end());
      embedded.push_back(std::move(full));
    }
    return rec.score_list(observed, embedded);
  };

  auto order = determination_order(word_space, cfg.order_policy);
  HpdResult hpd = determine_best_pron(word_space, u.observed, order, scorer);
  return {std::move(hpd.best), hpd.score, std::move(hpd.cost)};
}

namespace {

/// Accuracy change on a fixed instance subset from adding one pronunciation
/// to one word.
double accuracy_boost(const Pronunciation& pron, const std::string& word,
                      const std::vector<std::size_t>& subset,
                      const std::vector<Utterance>& corpus,
                      const std::vector<std::size_t>& truths,
                      const Grammar& grammar, const Lexicon& lex,
                      const Recognizer& rec) {
  if (subset.empty()) return 0.0;
  Lexicon overlay = lex;
  overlay.add(word, pron);
  std::size_t base =
      count_correct(rec, grammar, lex, corpus, truths, subset);
  std::size_t with =
      count_correct(rec, grammar, overlay, corpus, truths, subset);
  return (double(with) - double(base)) / double(subset.size());
}

}  // namespace

double accuracy_increment(const Pronunciation& p_star, const std::string& word,
                          const RegionalNameset& dr,
                          const std::vector<Utterance>& corpus,
                          const Grammar& grammar, const Lexicon& lex,
                          const Recognizer& rec) {
  auto truths = truth_indices(corpus, grammar);
  std::set<std::size_t> members(dr.members.begin(), dr.members.end());
  std::vector<std::size_t> subset;
  for (std::size_t i = 0; i < corpus.size(); ++i)
    if (members.count(truths[i])) subset.push_back(i);
  return accuracy_boost(p_star, word, subset, corpus, truths, grammar, lex,
                        rec);
}

std::vector<LearnedPron> learn_name(std::vector<LearnedPron> proposals,
                                    std::size_t k1) {
  // dedup by (word, pron), keeping the best gain; earlier proposals win ties
  struct Entry {
    LearnedPron lp;
    std::size_t ordinal;
  };
  std::map<std::pair<std::string, Pronunciation>, Entry> dedup;
  for (std::size_t i = 0; i < proposals.size(); ++i) {
    auto key = std::make_pair(proposals[i].word, proposals[i].pron);
    auto it = dedup.find(key);
    if (it == dedup.end())
      dedup.emplace(std::move(key), Entry{std::move(proposals[i]), i});
    else if (proposals[i].gain > it->second.lp.gain)
      it->second = Entry{std::move(proposals[i]), it->second.ordinal};
  }

  std::vector<Entry> entries;
  entries.reserve(dedup.size());
  for (auto& [key, e] : dedup)
    if (e.lp.gain > 0.0) entries.push_back(std::move(e));
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.lp.gain != b.lp.gain) return a.lp.gain > b.lp.gain;
    if (a.ordinal != b.ordinal) return a.ordinal < b.ordinal;
    return std::tie(a.lp.word, a.lp.pron) < std::tie(b.lp.word, b.lp.pron);
  });
  if (entries.size() > k1) entries.resize(k1);

  std::vector<LearnedPron> out;
  out.reserve(entries.size());
  for (auto& e : entries) out.push_back(std::move(e.lp));
  return out;
}

WordPruneResult prune_per_word(const std::string& word,
                               std::vector<LearnedPron> learned,
                               const Grammar& grammar,
                               const std::vector<Utterance>& corpus,
                               const Lexicon& lex, const Recognizer& rec,
                               std::size_t k2) {
  WordPruneResult result;
  std::set<std::size_t> nameset;
  for (std::size_t g = 0; g < grammar.size(); ++g)
    for (const auto& w : grammar.name(g).words)
      if (w == word) {
        nameset.insert(g);
        break;
      }
  result.nameset_size = nameset.size();

  auto truths = truth_indices(corpus, grammar);
  std::vector<std::size_t> subset;
  for (std::size_t i = 0; i < corpus.size(); ++i)
    if (nameset.count(truths[i])) subset.push_back(i);

  for (auto& lp : learned)
    lp.gain = accuracy_boost(lp.pron, word, subset, corpus, truths, grammar,
                             lex, rec);
  std::stable_sort(learned.begin(), learned.end(),
                   [](const LearnedPron& a, const LearnedPron& b) {
                     return a.gain > b.gain;
                   });
  for (auto& lp : learned) {
    if (lp.gain <= 0.0) break;
    if (result.kept.size() == k2) break;
    result.kept.push_back(std::move(lp));
  }
  return result;
}

Lexicon apply_learned(
    const Lexicon& lex,
    const std::map<std::string, std::vector<LearnedPron>>& final_lists) {
  Lexicon out = lex;
  for (const auto& [word, learned] : final_lists) {
    if (learned.empty()) continue;
    std::vector<Pronunciation> prons;
    prons.reserve(learned.size());
    for (const auto& lp : learned) prons.push_back(lp.pron);
    out.replace(word, std::move(prons));
  }
  return out;
}

LearnOutcome learn_all(const std::vector<Utterance>& corpus,
                       const Grammar& grammar, const Lexicon& lex,
                       const LearnConfig& cfg, const Recognizer& rec,
                       const ConfusionMatrix& m,
                       const NameDistanceMatrix& ndm) {
  LearnOutcome outcome;
  outcome.report.corpus_size = corpus.size();

  auto truths = truth_indices(corpus, grammar);
  ErrorSet errors = collect_errors(corpus, grammar, lex, rec);
  outcome.report.error_count = errors.entries.size();

  // error instances grouped per target name, in corpus order
  std::map<std::size_t, std::vector<std::size_t>> per_target;
  for (const auto& e : errors.entries)
    per_target[e.truth_name].push_back(e.corpus_index);

  std::vector<std::size_t> targets;
  targets.reserve(per_target.size());
  for (const auto& [t, _] : per_target) targets.push_back(t);

  std::vector<NameReport> name_reports(targets.size());
  const std::int64_t n_targets = static_cast<std::int64_t>(targets.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t ti = 0; ti < n_targets; ++ti) {
    const std::size_t target = targets[std::size_t(ti)];
    const Name& name = grammar.name(target);
    NameReport& report = name_reports[std::size_t(ti)];
    report.name_index = target;
    report.name = name.str();
    try {
      const auto& instances = per_target.at(target);
      for (std::size_t i : instances)
        report.error_instances.push_back(corpus[i].instance_id);

      NameCandidateSpaces spaces = name_candidate_spaces(name, lex, cfg, m);
      report.outreach = spaces.outreach;
      RegionalNameset dr = regional_nameset(target, spaces.outreach, ndm);
      report.regional_size = dr.members.size();

      std::set<std::size_t> members(dr.members.begin(), dr.members.end());
      std::vector<std::size_t> subset;
      for (std::size_t i = 0; i < corpus.size(); ++i)
        if (members.count(truths[i])) subset.push_back(i);

      std::vector<LearnedPron> proposals;
      for (std::size_t i : instances) {
        auto flagged = identify_error_words(name, lex, corpus[i], m);
        for (std::size_t word_pos : flagged) {
          const std::string& word = name.words[word_pos];
          InstanceLearnResult ilr =
              learn_instance(corpus[i], word_pos, name, lex,
                             spaces.word_spaces[word_pos], cfg, rec);
          double gain = accuracy_boost(ilr.pron, word, subset, corpus, truths,
                                       grammar, lex, rec);
          proposals.push_back(
              {word, std::move(ilr.pron), gain, corpus[i].instance_id});
#pragma omp atomic
          outcome.report.recognizer_runs += ilr.cost.recognizer_runs;
#pragma omp atomic
          outcome.report.prons_processed += ilr.cost.prons_processed;
        }
      }
      report.learned = learn_name(std::move(proposals), cfg.k1);
    } catch (const std::exception& e) {
      report.failure = e.what();
      report.learned.clear();
    }
  }
  outcome.report.names = std::move(name_reports);

  // gather per-word candidates across names (name order fixes tie order)
  std::map<std::string, std::vector<LearnedPron>> per_word;
  for (const auto& nr : outcome.report.names) {
    for (const auto& lp : nr.learned) {
      auto& lst = per_word[lp.word];
      bool duplicate = false;
      for (auto& existing : lst) {
        if (existing.pron == lp.pron) {
          duplicate = true;
          if (lp.gain > existing.gain) existing = lp;
          break;
        }
      }
      if (!duplicate) lst.push_back(lp);
    }
  }

  std::map<std::string, std::vector<LearnedPron>> final_lists;
  std::size_t words_updated = 0;
  for (auto& [word, learned] : per_word) {
    WordPruneResult pruned =
        prune_per_word(word, learned, grammar, corpus, lex, rec, cfg.k2);
    WordReport wr;
    wr.word = word;
    wr.nameset_size = pruned.nameset_size;
    wr.final_prons = pruned.kept;
    outcome.report.words.push_back(std::move(wr));
    if (!pruned.kept.empty()) {
      ++words_updated;
      final_lists[word] = std::move(pruned.kept);
    }
  }
  outcome.report.words_updated = words_updated;

  outcome.lexicon = apply_learned(lex, final_lists);
  return outcome;
}

std::string report_to_json(const LearnReport& report, const LearnConfig& cfg,
                           const ChannelModel& channel,
                           const PhonemeSet& phonemes) {
  nlohmann::ordered_json j;
  j["config"] = {
      {"r0", cfg.r0},
      {"m_max", cfg.m_max},
      {"k1", cfg.k1},
      {"k2", cfg.k2},
      {"order_policy", cfg.order_policy == OrderPolicy::kNatural ? "natural"
                       : cfg.order_policy == OrderPolicy::kDescending
                           ? "descending"
                           : "ascending"},
      {"reject_threshold", cfg.reject_threshold},
      {"allow_deletion", cfg.allow_deletion},
      {"lambda", channel.lambda},
      {"rho", channel.rho},
      {"seed", channel.seed},
  };

  auto pron_json = [&](const LearnedPron& lp) {
    nlohmann::ordered_json p;
    p["word"] = lp.word;
    p["pron"] = format_pronunciation(lp.pron, phonemes);
    p["gain"] = lp.gain;
    p["source_instance"] = lp.source_instance;
    return p;
  };

  j["names"] = nlohmann::ordered_json::array();
  for (const auto& nr : report.names) {
    nlohmann::ordered_json n;
    n["name"] = nr.name;
    n["error_instances"] = nr.error_instances;
    n["outreach"] = nr.outreach;
    n["regional_size"] = nr.regional_size;
    n["learned"] = nlohmann::ordered_json::array();
    for (const auto& lp : nr.learned) n["learned"].push_back(pron_json(lp));
    if (!nr.failure.empty()) n["failure"] = nr.failure;
    j["names"].push_back(std::move(n));
  }

  j["words"] = nlohmann::ordered_json::array();
  for (const auto& wr : report.words) {
    nlohmann::ordered_json w;
    w["word"] = wr.word;
    w["nameset_size"] = wr.nameset_size;
    w["final"] = nlohmann::ordered_json::array();
    for (const auto& lp : wr.final_prons) w["final"].push_back(pron_json(lp));
    j["words"].push_back(std::move(w));
  }

  j["totals"] = {
      {"corpus_size", report.corpus_size},
      {"errors", report.error_count},
      {"names_with_errors", report.names.size()},
      {"words_updated", report.words_updated},
      {"recognizer_runs", report.recognizer_runs},
      {"prons_processed", report.prons_processed},
  };
  return j.dump(2) + "\n";
}

}  // namespace namelex
