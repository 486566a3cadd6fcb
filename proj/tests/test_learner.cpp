#include <set>
#include <sstream>

#include "doctest.h"
#include "namelex/eval.hpp"
#include "namelex/learner.hpp"
#include "support/data.hpp"
#include "support/oracles.hpp"

using namespace namelex;
using namelex::testing::shipped_table;

namespace {

constexpr double kLambda = 4.0;

Pronunciation pron(const char* text) {
  return parse_pronunciation(text, shipped_table().phonemes);
}

Lexicon demo_lexicon() {
  return load_lexicon_file(testing::data_path("demo/lexicon.dict"),
                           shipped_table().phonemes);
}

Grammar demo_grammar() {
  return load_grammar_file(testing::data_path("demo/grammar.txt"));
}

LearnConfig demo_config() {
  LearnConfig cfg;
  cfg.r0 = 0.5;
  cfg.m_max = 6;
  cfg.k1 = 2;
  cfg.k2 = 2;
  return cfg;
}

std::vector<WordVariant> mason_variant() {
  return {{"mason", 1.0, pron("m iy s ah n")}};
}

std::vector<Utterance> demo_corpus(double rho, std::size_t per_name,
                                   std::uint64_t seed,
                                   bool with_variant = true) {
  return synthesize_corpus(demo_grammar(), demo_lexicon(),
                           with_variant ? mason_variant()
                                        : std::vector<WordVariant>{},
                           ChannelModel{kLambda, rho, seed},
                           shipped_table().matrix, per_name);
}

}  // namespace

TEST_CASE("a clean corpus produces no errors") {
  SimulatedRecognizer rec(shipped_table().matrix, kLambda, 0.0);
  auto corpus = demo_corpus(0.0, 3, 1, /*with_variant=*/false);
  auto errors = collect_errors(corpus, demo_grammar(), demo_lexicon(), rec);
  CHECK(errors.entries.empty());
}

TEST_CASE("variant speakers collide with the near neighbor") {
  SimulatedRecognizer rec(shipped_table().matrix, kLambda, 0.0);
  Grammar g = demo_grammar();
  auto corpus = demo_corpus(0.0, 3, 1);
  auto errors = collect_errors(corpus, g, demo_lexicon(), rec);
  REQUIRE(errors.entries.size() == 3);
  for (const auto& e : errors.entries) {
    CHECK(g.name(e.truth_name).str() == "abel mason");
    REQUIRE(e.hypothesis.has_value());
    CHECK(g.name(*e.hypothesis).str() == "abel mithun");
  }

  // error fraction and reported rate agree by definition
  auto eval = evaluate(corpus, g, demo_lexicon(), rec);
  CHECK(eval.ner == doctest::Approx(100.0 * double(errors.entries.size()) /
                                    double(corpus.size())));
}

TEST_CASE("name outreach is the length-weighted word average") {
  const auto& t = shipped_table();
  Lexicon lex = demo_lexicon();
  auto spaces =
      name_candidate_spaces(Name{{"abel", "mason"}}, lex, demo_config(), t.matrix);
  REQUIRE(spaces.word_spaces.size() == 2);
  // per-position maxima: abel = 0.42 (ey->ih) + 0.30 (ah->er);
  // mason = 0.42 + 0.25 (s->th) + 0.30
  double expected = (0.42 + 0.30 + 0.42 + 0.25 + 0.30) / 9.0;
  CHECK(spaces.outreach == doctest::Approx(expected).epsilon(1e-9));

  double direct = 0.0;
  std::size_t len = 0;
  for (const auto& ws : spaces.word_spaces) {
    direct += outreach_distance(ws) * double(ws.length());
    len += ws.length();
  }
  CHECK(spaces.outreach == doctest::Approx(direct / double(len)));
}

TEST_CASE("the regional nameset matches its definition") {
  const auto& t = shipped_table();
  Lexicon lex = demo_lexicon();
  Grammar g = demo_grammar();
  auto ndm = NameDistanceMatrix::build(g, lex, t.matrix);
  std::size_t mason = *g.index_of("abel mason");
  std::size_t mithun = *g.index_of("abel mithun");

  auto spaces =
      name_candidate_spaces(g.name(mason), lex, demo_config(), t.matrix);
  auto dr = regional_nameset(mason, spaces.outreach, ndm);
  CHECK(dr.target == mason);
  CHECK(dr.radius_used == spaces.outreach);

  // membership re-checked against the matrix row
  std::set<std::size_t> members(dr.members.begin(), dr.members.end());
  CHECK(members.count(mason) == 1);
  CHECK(members.count(mithun) == 1);  // the engineered neighbor
  for (std::size_t s = 0; s < g.size(); ++s)
    CHECK(members.count(s) ==
          (s == mason || ndm.at(mason, s) <= spaces.outreach ? 1u : 0u));

  // a zero radius keeps only the target
  auto solo = regional_nameset(mason, 0.0, ndm);
  CHECK(solo.members == std::vector<std::size_t>{mason});
}

TEST_CASE("error words are localized by alignment cost") {
  const auto& t = shipped_table();
  Lexicon lex = demo_lexicon();

  // corruption confined to the second word
  Utterance u{"x#0", "carla paine", pron("k aa r l ah p iy n")};
  CHECK(identify_error_words(Name{{"carla", "paine"}}, lex, u, t.matrix) ==
        std::vector<std::size_t>{1});

  // canonical observation (neighbor stole the match): the forced flag
  // lands on the last word
  Utterance clean{"x#1", "abel mason", pron("ey b ah l m ey s ah n")};
  CHECK(identify_error_words(Name{{"abel", "mason"}}, lex, clean, t.matrix) ==
        std::vector<std::size_t>{1});

  // three-word name corrupted in the outer words
  Lexicon three;
  three.add("ada", pron("ey d ah"));
  three.add("bee", pron("b iy"));
  three.add("cid", pron("s ih d"));
  Utterance two_bad{"x#2", "ada bee cid", pron("ey f ah b iy s uh d")};
  CHECK(identify_error_words(Name{{"ada", "bee", "cid"}}, three, two_bad,
                             t.matrix) == std::vector<std::size_t>{0, 2});
}

TEST_CASE("instance learning recovers the spoken variant") {
  const auto& t = shipped_table();
  Lexicon lex = demo_lexicon();
  SimulatedRecognizer rec(t.matrix, kLambda, 0.0);
  LearnConfig cfg = demo_config();
  Name name{{"abel", "mason"}};

  auto spaces = name_candidate_spaces(name, lex, cfg, t.matrix);
  Utterance u{"m#0", "abel mason", pron("ey b ah l m iy s ah n")};
  auto result = learn_instance(u, 1, name, lex, spaces.word_spaces[1], cfg, rec);

  CHECK(result.score == 1.0);
  // same-cluster substitutions are free, so the winner is only pinned up
  // to recognition equivalence
  CHECK(pron_distance(result.pron, pron("m iy s ah n"), t.matrix) == 0.0);

  // the result beats or ties every embedded candidate
  auto brute = namelex::testing::brute_force_best(
      spaces.word_spaces[1], [&](const Pronunciation& c) {
        std::vector<Pronunciation> full{concat({lex.canonical("abel"), c})};
        return score_pron_list(u.observed, full, t.matrix, kLambda);
      });
  CHECK(result.score == brute.score);
}

TEST_CASE("a single-candidate space returns the baseline") {
  const auto& t = shipped_table();
  Lexicon lex;
  lex.add("hmm", pron("hh m"));  // singleton clusters only
  SimulatedRecognizer rec(t.matrix, kLambda, 0.0);
  LearnConfig cfg = demo_config();
  Name name{{"hmm"}};
  auto spaces = name_candidate_spaces(name, lex, cfg, t.matrix);
  REQUIRE(spaces.word_spaces[0].total == 1);
  Utterance u{"h#0", "hmm", pron("hh ah m")};
  auto result = learn_instance(u, 0, name, lex, spaces.word_spaces[0], cfg, rec);
  CHECK(result.pron == pron("hh m"));
}

TEST_CASE("accuracy increments count wins and steals on the regional set") {
  const auto& t = shipped_table();
  Lexicon lex = demo_lexicon();
  Grammar g = demo_grammar();
  SimulatedRecognizer rec(t.matrix, kLambda, 0.0);
  auto corpus = demo_corpus(0.0, 3, 1);
  auto ndm = NameDistanceMatrix::build(g, lex, t.matrix);

  std::size_t mason = *g.index_of("abel mason");
  auto spaces = name_candidate_spaces(g.name(mason), lex, demo_config(), t.matrix);
  auto dr = regional_nameset(mason, spaces.outreach, ndm);
  REQUIRE(dr.members.size() == 2);  // target + the engineered neighbor

  // the true variant fixes all three mason instances out of six regional
  CHECK(accuracy_increment(pron("m iy s ah n"), "mason", dr, corpus, g, lex,
                           rec) == doctest::Approx(0.5));

  // re-adding the baseline changes nothing
  CHECK(accuracy_increment(pron("m ey s ah n"), "mason", dr, corpus, g, lex,
                           rec) == 0.0);

  // a pronunciation colliding with the neighbor nets zero or worse
  CHECK(accuracy_increment(pron("m iy th ah n"), "mason", dr, corpus, g, lex,
                           rec) <= 0.0);
}

TEST_CASE("per-name pruning dedups, sorts and truncates") {
  auto lp = [](const char* word, const char* p, double gain,
               const char* inst) {
    return LearnedPron{word, parse_pronunciation(p, shipped_table().phonemes),
                       gain, inst};
  };

  // three instances proposing the same pronunciation collapse to one
  auto same = learn_name({lp("w", "p ey n", 0.2, "a"), lp("w", "p ey n", 0.5, "b"),
                          lp("w", "p ey n", 0.3, "c")},
                         5);
  REQUIRE(same.size() == 1);
  CHECK(same[0].gain == 0.5);

  // k1 truncation keeps the strongest
  auto top = learn_name({lp("w", "p ey n", 0.4, "a"), lp("w", "p iy n", 0.2, "b")},
                        1);
  REQUIRE(top.size() == 1);
  CHECK(top[0].pron == parse_pronunciation("p ey n", shipped_table().phonemes));

  // nothing useful, nothing learned
  CHECK(learn_name({lp("w", "p ey n", 0.0, "a"), lp("w", "p iy n", -0.1, "b")},
                   5)
            .empty());

  // equal gains: the earlier proposal wins the front slot
  auto tied = learn_name({lp("w", "p iy n", 0.3, "a"), lp("w", "p ey n", 0.3, "b")},
                         2);
  REQUIRE(tied.size() == 2);
  CHECK(tied[0].pron == parse_pronunciation("p iy n", shipped_table().phonemes));
}

TEST_CASE("per-word pruning evaluates on the word's nameset") {
  const auto& t = shipped_table();
  Lexicon lex = demo_lexicon();
  Grammar g = demo_grammar();
  SimulatedRecognizer rec(t.matrix, kLambda, 0.0);
  auto corpus = demo_corpus(0.0, 3, 1);

  // "mason" appears in exactly one name
  auto result = prune_per_word(
      "mason", {LearnedPron{"mason", pron("m iy s ah n"), 0.5, "m#0"}}, g,
      corpus, lex, rec, 2);
  CHECK(result.nameset_size == 1);
  REQUIRE(result.kept.size() == 1);
  // boost re-measured on the nameset: all three mason instances recover
  CHECK(result.kept[0].gain == doctest::Approx(1.0));

  // "abel" is shared by two names: the same pronunciation gain dilutes
  // over both names' instances, and useless entries drop out
  auto shared = prune_per_word(
      "abel",
      {LearnedPron{"abel", pron("ey b ah l"), 0.1, "m#0"},  // baseline again
       LearnedPron{"abel", pron("iy b ah l"), 0.1, "m#1"}},
      g, corpus, lex, rec, 2);
  CHECK(shared.nameset_size == 2);
  CHECK(shared.kept.empty());  // neither helps anyone
}

TEST_CASE("k2 keeps the strongest word pronunciations") {
  const auto& t = shipped_table();
  Lexicon lex = demo_lexicon();
  Grammar g = demo_grammar();
  SimulatedRecognizer rec(t.matrix, kLambda, 0.0);
  auto corpus = demo_corpus(0.0, 3, 1);

  // the exact variant plus a cluster-equivalent variant both fix all
  // mason instances; k2 = 1 keeps only the stronger-sorted one
  auto result = prune_per_word(
      "mason",
      {LearnedPron{"mason", pron("m iy s ah n"), 0.5, "m#0"},
       LearnedPron{"mason", pron("m ih s aa n"), 0.4, "m#1"}},
      g, corpus, lex, rec, 1);
  CHECK(result.kept.size() == 1);
}

TEST_CASE("applying learned lists replaces and round-trips") {
  const auto& t = shipped_table();
  Lexicon lex = demo_lexicon();
  std::map<std::string, std::vector<LearnedPron>> finals;
  finals["mason"] = {LearnedPron{"mason", pron("m iy s ah n"), 0.5, "m#0"}};
  finals["paine"] = {};  // empty list leaves the baseline untouched

  Lexicon updated = apply_learned(lex, finals);
  CHECK(updated.prons("mason") ==
        std::vector<Pronunciation>{pron("m iy s ah n")});
  CHECK(updated.prons("paine") == lex.prons("paine"));
  CHECK(updated.prons("abel") == lex.prons("abel"));

  std::ostringstream out;
  serialize_lexicon(out, updated, t.phonemes);
  std::istringstream in(out.str());
  CHECK(parse_lexicon(in, t.phonemes, "mem") == updated);
}

TEST_CASE("learning leaves a perfect corpus alone") {
  const auto& t = shipped_table();
  Lexicon lex = demo_lexicon();
  Grammar g = demo_grammar();
  SimulatedRecognizer rec(t.matrix, kLambda, 0.0);
  auto corpus = demo_corpus(0.0, 3, 1, /*with_variant=*/false);
  auto ndm = NameDistanceMatrix::build(g, lex, t.matrix);

  auto outcome = learn_all(corpus, g, lex, demo_config(), rec, t.matrix, ndm);
  CHECK(outcome.lexicon == lex);
  CHECK(outcome.report.error_count == 0);
  CHECK(outcome.report.names.empty());
  CHECK(outcome.report.words.empty());
}

TEST_CASE("learning repairs the demo corpus end to end") {
  const auto& t = shipped_table();
  Lexicon lex = demo_lexicon();
  Grammar g = demo_grammar();
  SimulatedRecognizer rec(t.matrix, kLambda, 0.0);
  LearnConfig cfg = demo_config();
  auto corpus = demo_corpus(0.0, 3, 1);
  auto ndm = NameDistanceMatrix::build(g, lex, t.matrix);

  auto baseline = evaluate(corpus, g, lex, rec);
  CHECK(baseline.incorrect_instances == 3);

  auto outcome = learn_all(corpus, g, lex, cfg, rec, t.matrix, ndm);
  auto learned_eval = evaluate(corpus, g, outcome.lexicon, rec);
  CHECK(learned_eval.incorrect_instances == 0);
  CHECK(learned_eval.ner == 0.0);

  // the learned pronunciation is recognition-equivalent to the variant
  REQUIRE(outcome.lexicon.prons("mason").size() >= 1);
  CHECK(pron_distance(outcome.lexicon.prons("mason").front(),
                      pron("m iy s ah n"), t.matrix) == 0.0);

  // report invariants: caps respected, every retained gain positive
  for (const auto& nr : outcome.report.names) {
    CHECK(nr.learned.size() <= cfg.k1);
    for (const auto& lp : nr.learned) CHECK(lp.gain > 0.0);
    CHECK(nr.failure.empty());
  }
  for (const auto& wr : outcome.report.words) {
    CHECK(wr.final_prons.size() <= cfg.k2);
    for (const auto& lp : wr.final_prons) CHECK(lp.gain > 0.0);
  }

  // no regression on the union of pruning namesets
  std::set<std::string> dw_names;
  for (const auto& wr : outcome.report.words)
    for (std::size_t n = 0; n < g.size(); ++n)
      for (const auto& w : g.name(n).words)
        if (w == wr.word) dw_names.insert(g.name(n).str());
  std::vector<Utterance> union_corpus;
  for (const auto& u : corpus)
    if (dw_names.count(u.truth)) union_corpus.push_back(u);
  auto before = evaluate(union_corpus, g, lex, rec);
  auto after = evaluate(union_corpus, g, outcome.lexicon, rec);
  CHECK(after.incorrect_instances <= before.incorrect_instances);
}

TEST_CASE("rejection errors are learnable too") {
  const auto& t = shipped_table();
  Lexicon lex;
  lex.add("abel", pron("ey b ah l"));
  lex.add("mason", pron("m ey s ah n"));
  Grammar g(std::vector<Name>{Name{{"abel", "mason"}}});
  LearnConfig cfg = demo_config();
  cfg.reject_threshold = 0.9;
  SimulatedRecognizer rec(t.matrix, kLambda, cfg.reject_threshold);

  auto corpus = synthesize_corpus(g, lex, mason_variant(),
                                  ChannelModel{kLambda, 0.0, 5}, t.matrix, 3);
  auto ndm = NameDistanceMatrix::build(g, lex, t.matrix);

  auto baseline = evaluate(corpus, g, lex, rec);
  CHECK(baseline.incorrect_instances == 3);  // all rejected as no-match

  auto outcome = learn_all(corpus, g, lex, cfg, rec, t.matrix, ndm);
  auto learned_eval = evaluate(corpus, g, outcome.lexicon, rec);
  CHECK(learned_eval.incorrect_instances == 0);
}

TEST_CASE("learning is deterministic run to run") {
  const auto& t = shipped_table();
  Lexicon lex = demo_lexicon();
  Grammar g = demo_grammar();
  SimulatedRecognizer rec(t.matrix, kLambda, 0.0);
  LearnConfig cfg = demo_config();
  auto corpus = demo_corpus(0.05, 4, 77);
  auto ndm = NameDistanceMatrix::build(g, lex, t.matrix);

  auto a = learn_all(corpus, g, lex, cfg, rec, t.matrix, ndm);
  auto b = learn_all(corpus, g, lex, cfg, rec, t.matrix, ndm);
  CHECK(a.lexicon == b.lexicon);
  ChannelModel channel{kLambda, 0.05, 77};
  CHECK(report_to_json(a.report, cfg, channel, t.phonemes) ==
        report_to_json(b.report, cfg, channel, t.phonemes));
}
