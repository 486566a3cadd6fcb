#include <set>
#include <sstream>

#include "doctest.h"
#include "namelex/eval.hpp"
#include "support/data.hpp"
#include "support/synthetic.hpp"

using namespace namelex;
using namelex::testing::shipped_table;

namespace {

constexpr double kLambda = 4.0;

Pronunciation pron(const char* text) {
  return parse_pronunciation(text, shipped_table().phonemes);
}

}  // namespace

TEST_CASE("a perfect corpus scores zero error") {
  const auto& t = shipped_table();
  Lexicon lex = load_lexicon_file(testing::data_path("demo/lexicon.dict"),
                                  t.phonemes);
  Grammar g = load_grammar_file(testing::data_path("demo/grammar.txt"));
  SimulatedRecognizer rec(t.matrix, kLambda, 0.0);
  auto corpus = synthesize_corpus(g, lex, {}, ChannelModel{kLambda, 0.0, 1},
                                  t.matrix, 2);
  auto result = evaluate(corpus, g, lex, rec);
  CHECK(result.total_instances == corpus.size());
  CHECK(result.incorrect_instances == 0);
  CHECK(result.ner == 0.0);
  CHECK(result.unique_names == g.size());
  CHECK(result.unique_incorrect == 0);
}

TEST_CASE("one wrong instance out of four is 25 percent") {
  const auto& t = shipped_table();
  Lexicon lex;
  lex.add("bear", pron("b eh r"));
  lex.add("lion", pron("l ay ah n"));
  Grammar g(std::vector<Name>{Name{{"bear"}}, Name{{"lion"}}});
  SimulatedRecognizer rec(t.matrix, kLambda, 0.0);

  std::vector<Utterance> corpus{
      {"a#0", "bear", pron("b eh r")},
      {"a#1", "bear", pron("b eh r")},
      {"a#2", "lion", pron("l ay ah n")},
      {"a#3", "lion", pron("b eh r")},  // says the other name entirely
  };
  auto result = evaluate(corpus, g, lex, rec);
  CHECK(result.incorrect_instances == 1);
  CHECK(result.ner == 25.0);
  CHECK(result.unique_names == 2);
  CHECK(result.unique_incorrect == 1);
}

TEST_CASE("summary counts agree with an independent log recount") {
  const auto& t = shipped_table();
  Lexicon lex = load_lexicon_file(testing::data_path("demo/lexicon.dict"),
                                  t.phonemes);
  Grammar g = load_grammar_file(testing::data_path("demo/grammar.txt"));
  SimulatedRecognizer rec(t.matrix, kLambda, 0.0);
  auto corpus = synthesize_corpus(g, lex, {}, ChannelModel{kLambda, 0.3, 9},
                                  t.matrix, 5);
  auto result = evaluate(corpus, g, lex, rec);

  REQUIRE(result.log.size() == corpus.size());
  std::size_t wrong = 0;
  std::set<std::string> names, wrong_names;
  for (const auto& entry : result.log) {
    names.insert(entry.truth);
    if (!entry.correct) {
      ++wrong;
      wrong_names.insert(entry.truth);
    }
  }
  CHECK(wrong == result.incorrect_instances);
  CHECK(names.size() == result.unique_names);
  CHECK(wrong_names.size() == result.unique_incorrect);
  CHECK(result.ner == doctest::Approx(100.0 * double(wrong) /
                                      double(corpus.size())));
}

TEST_CASE("error reduction arithmetic matches the published definition") {
  CHECK(std::abs(err_percent(14.10, 8.16) - 42.13) <= 0.05);
  CHECK(err_percent(10.0, 10.0) == 0.0);
  CHECK(err_percent(10.0, 0.0) == 100.0);
  CHECK(err_percent(0.0, 0.0) == 0.0);  // defined as zero on a perfect base
}

TEST_CASE("a single-size sweep is one full evaluation") {
  const auto& t = shipped_table();
  Lexicon lex = load_lexicon_file(testing::data_path("demo/lexicon.dict"),
                                  t.phonemes);
  Grammar g = load_grammar_file(testing::data_path("demo/grammar.txt"));
  auto corpus = synthesize_corpus(g, lex, {}, ChannelModel{kLambda, 0.2, 3},
                                  t.matrix, 3);
  auto sweep = grammar_sweep(corpus, g, {g.size()}, 42, lex, lex, t.matrix,
                             kLambda, 0.0);
  REQUIRE(sweep.points.size() == 1);
  CHECK(sweep.points[0].grammar_size == g.size());
  CHECK(sweep.points[0].base.total_instances == corpus.size());
  CHECK(sweep.points[0].err == 0.0);  // identical lexicons

  SimulatedRecognizer rec(t.matrix, kLambda, 0.0);
  auto direct = evaluate(corpus, g, lex, rec);
  CHECK(sweep.points[0].base.ner == direct.ner);
}

TEST_CASE("sweep subsets are nested") {
  const auto& t = shipped_table();
  Lexicon lex = load_lexicon_file(testing::data_path("demo/lexicon.dict"),
                                  t.phonemes);
  Grammar g = load_grammar_file(testing::data_path("demo/grammar.txt"));
  auto corpus = synthesize_corpus(g, lex, {}, ChannelModel{kLambda, 0.1, 3},
                                  t.matrix, 2);
  auto sweep =
      grammar_sweep(corpus, g, {2, 4, 6}, 7, lex, lex, t.matrix, kLambda, 0.0);
  REQUIRE(sweep.points.size() == 3);

  // instances evaluated at a smaller size reappear at every larger size
  std::set<std::string> prev;
  for (const auto& point : sweep.points) {
    std::set<std::string> ids;
    for (const auto& log : point.base.log) ids.insert(log.instance_id);
    for (const auto& id : prev) CHECK(ids.count(id) == 1);
    prev = std::move(ids);
  }
}

TEST_CASE("sweeps reject bad size lists") {
  const auto& t = shipped_table();
  Lexicon lex = load_lexicon_file(testing::data_path("demo/lexicon.dict"),
                                  t.phonemes);
  Grammar g = load_grammar_file(testing::data_path("demo/grammar.txt"));
  std::vector<Utterance> corpus{{"a#0", "carla paine", pron("p ey n")}};
  CHECK_THROWS_AS(grammar_sweep(corpus, g, {4, 2}, 1, lex, lex, t.matrix,
                                kLambda, 0.0),
                  InputError);
  CHECK_THROWS_AS(grammar_sweep(corpus, g, {g.size() + 1}, 1, lex, lex,
                                t.matrix, kLambda, 0.0),
                  InputError);
}

TEST_CASE("sweep output is deterministic and formatted to two decimals") {
  const auto& t = shipped_table();
  Lexicon lex = load_lexicon_file(testing::data_path("demo/lexicon.dict"),
                                  t.phonemes);
  Grammar g = load_grammar_file(testing::data_path("demo/grammar.txt"));
  auto corpus = synthesize_corpus(g, lex, {}, ChannelModel{kLambda, 0.25, 5},
                                  t.matrix, 3);
  auto s1 = grammar_sweep(corpus, g, {3, 6}, 11, lex, lex, t.matrix, kLambda, 0.0);
  auto s2 = grammar_sweep(corpus, g, {3, 6}, 11, lex, lex, t.matrix, kLambda, 0.0);
  CHECK(sweep_to_json(s1) == sweep_to_json(s2));

  std::ostringstream csv;
  write_sweep_csv(csv, s1);
  auto text = csv.str();
  CHECK(text.find("metric,3,6") == 0);
  CHECK(text.find("ner_base,") != std::string::npos);
  CHECK(text.find("ner_learned,") != std::string::npos);
  CHECK(text.find("err,") != std::string::npos);
}

TEST_CASE("denser grammars trend toward higher error rates") {
  const auto& t = shipped_table();
  namelex::testing::BenchmarkBuilder builder(t, 4242);
  auto bench = builder.build(12, 26);  // 50 names, a quarter with variants
  auto corpus = synthesize_corpus(bench.grammar, bench.lexicon, bench.variants,
                                  ChannelModel{kLambda, 0.05, 21}, t.matrix, 2);

  std::vector<std::size_t> sizes{15, 30, 50};
  std::vector<double> mean_ner(sizes.size(), 0.0);
  const int kSeeds = 6;
  for (int seed = 1; seed <= kSeeds; ++seed) {
    auto sweep = grammar_sweep(corpus, bench.grammar, sizes, seed,
                               bench.lexicon, bench.lexicon, t.matrix, kLambda,
                               0.0);
    for (std::size_t i = 0; i < sizes.size(); ++i)
      mean_ner[i] += sweep.points[i].base.ner / kSeeds;
  }
  // a trend over seeds, not per-seed monotonicity
  CHECK(mean_ner.front() < mean_ner.back());
  for (std::size_t i = 1; i < mean_ner.size(); ++i)
    CHECK(mean_ner[i] >= mean_ner[i - 1] - 1.0);
}
