// Serial vs OpenMP comparisons for the data-parallel kernels: the name
// distance matrix, batch evaluation, and corpus synthesis.
//
//   cmake --build build --target namelex_bench
//   ./build/bench/namelex_bench

#include <benchmark/benchmark.h>

#include "namelex/distance.hpp"
#include "namelex/eval.hpp"
#include "support/data.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

namespace {

using namespace namelex;
using namelex::testing::shipped_table;

constexpr double kLambda = 4.0;

struct Fixture {
  namelex::testing::LearningBenchmark bench;
  std::vector<Utterance> corpus;

  Fixture() {
    namelex::testing::BenchmarkBuilder builder(shipped_table(), 616);
    bench = builder.build(25, 70);  // 120 names
    corpus = synthesize_corpus(bench.grammar, bench.lexicon, bench.variants,
                               ChannelModel{kLambda, 0.05, 99},
                               shipped_table().matrix, 2);
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

void BM_name_matrix_serial(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) {
    auto ndm = NameDistanceMatrix::build_serial(f.bench.grammar,
                                                f.bench.lexicon,
                                                shipped_table().matrix);
    benchmark::DoNotOptimize(ndm.at(0, f.bench.grammar.size() - 1));
  }
}

void BM_name_matrix_parallel(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) {
    auto ndm = NameDistanceMatrix::build(f.bench.grammar, f.bench.lexicon,
                                         shipped_table().matrix);
    benchmark::DoNotOptimize(ndm.at(0, f.bench.grammar.size() - 1));
  }
}

void BM_evaluate_serial(benchmark::State& state) {
  const auto& f = fixture();
  SimulatedRecognizer rec(shipped_table().matrix, kLambda, 0.0);
  for (auto _ : state) {
    auto result = evaluate_serial(f.corpus, f.bench.grammar, f.bench.lexicon, rec);
    benchmark::DoNotOptimize(result.ner);
  }
}

void BM_evaluate_parallel(benchmark::State& state) {
  const auto& f = fixture();
  SimulatedRecognizer rec(shipped_table().matrix, kLambda, 0.0);
  for (auto _ : state) {
    auto result = evaluate(f.corpus, f.bench.grammar, f.bench.lexicon, rec);
    benchmark::DoNotOptimize(result.ner);
  }
}

void BM_synthesize_serial(benchmark::State& state) {
  const auto& f = fixture();
  ChannelModel channel{kLambda, 0.05, 7};
  for (auto _ : state) {
    auto corpus =
        synthesize_corpus_serial(f.bench.grammar, f.bench.lexicon,
                                 f.bench.variants, channel,
                                 shipped_table().matrix, 3);
    benchmark::DoNotOptimize(corpus.size());
  }
}

void BM_synthesize_parallel(benchmark::State& state) {
  const auto& f = fixture();
  ChannelModel channel{kLambda, 0.05, 7};
  for (auto _ : state) {
    auto corpus = synthesize_corpus(f.bench.grammar, f.bench.lexicon,
                                    f.bench.variants, channel,
                                    shipped_table().matrix, 3);
    benchmark::DoNotOptimize(corpus.size());
  }
}

void BM_pron_distance(benchmark::State& state) {
  const auto& t = shipped_table();
  Rng rng(5);
  auto a = namelex::testing::random_pron(rng, std::size_t(state.range(0)));
  auto b = namelex::testing::random_pron(rng, std::size_t(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(pron_distance(a, b, t.matrix));
}

BENCHMARK(BM_name_matrix_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_name_matrix_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_evaluate_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_evaluate_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_synthesize_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_synthesize_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_pron_distance)->Arg(8)->Arg(16)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
