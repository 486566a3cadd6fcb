// The parallel kernels must match their serial reference implementations
// bit for bit: every cell/instance is computed independently, so thread
// count may not change any output.

#include "doctest.h"
#include "namelex/distance.hpp"
#include "namelex/eval.hpp"
#include "support/data.hpp"
#include "support/synthetic.hpp"

using namespace namelex;
using namelex::testing::shipped_table;

namespace {

constexpr double kLambda = 4.0;

const namelex::testing::LearningBenchmark& bench() {
  static const auto b = [] {
    namelex::testing::BenchmarkBuilder builder(shipped_table(), 909);
    return builder.build(8, 24);  // 40 names
  }();
  return b;
}

}  // namespace

TEST_CASE("distance matrix: parallel equals serial") {
  const auto& t = shipped_table();
  auto par = NameDistanceMatrix::build(bench().grammar, bench().lexicon, t.matrix);
  auto ser =
      NameDistanceMatrix::build_serial(bench().grammar, bench().lexicon, t.matrix);
  REQUIRE(par.size() == ser.size());
  for (std::size_t s = 0; s < par.size(); ++s) {
    auto pr = par.row(s);
    auto sr = ser.row(s);
    for (std::size_t c = 0; c < par.size(); ++c) CHECK(pr[c] == sr[c]);
  }
}

TEST_CASE("corpus synthesis: parallel equals serial") {
  const auto& t = shipped_table();
  ChannelModel channel{kLambda, 0.08, 31};
  auto par = synthesize_corpus(bench().grammar, bench().lexicon,
                               bench().variants, channel, t.matrix, 3);
  auto ser = synthesize_corpus_serial(bench().grammar, bench().lexicon,
                                      bench().variants, channel, t.matrix, 3);
  CHECK(par == ser);
}

TEST_CASE("evaluation: parallel equals serial") {
  const auto& t = shipped_table();
  ChannelModel channel{kLambda, 0.08, 32};
  auto corpus = synthesize_corpus(bench().grammar, bench().lexicon,
                                  bench().variants, channel, t.matrix, 2);
  SimulatedRecognizer rec(t.matrix, kLambda, 0.0);
  auto par = evaluate(corpus, bench().grammar, bench().lexicon, rec);
  auto ser = evaluate_serial(corpus, bench().grammar, bench().lexicon, rec);

  CHECK(par.total_instances == ser.total_instances);
  CHECK(par.incorrect_instances == ser.incorrect_instances);
  CHECK(par.unique_names == ser.unique_names);
  CHECK(par.unique_incorrect == ser.unique_incorrect);
  CHECK(par.ner == ser.ner);
  REQUIRE(par.log.size() == ser.log.size());
  for (std::size_t i = 0; i < par.log.size(); ++i) {
    CHECK(par.log[i].instance_id == ser.log[i].instance_id);
    CHECK(par.log[i].hypothesis == ser.log[i].hypothesis);
    CHECK(par.log[i].score == ser.log[i].score);
    CHECK(par.log[i].correct == ser.log[i].correct);
  }
}
