#include <set>

#include "doctest.h"
#include "namelex/candidates.hpp"
#include "namelex/error.hpp"
#include "support/data.hpp"
#include "support/oracles.hpp"

using namespace namelex;
using namelex::testing::shipped_table;

namespace {

constexpr double kDemoRadius = 0.5;

Pronunciation pron(const char* text) {
  return parse_pronunciation(text, shipped_table().phonemes);
}

CandidateSpace paine_space(bool allow_deletion = false) {
  return build_candidate_space(pron("p ey n"), kDemoRadius, 6,
                               shipped_table().matrix, allow_deletion);
}

}  // namespace

TEST_CASE("per-position candidates are cost-then-id ordered") {
  const auto& t = shipped_table();
  auto list = phoneme_candidates(t.phonemes.id("ey"), kDemoRadius, t.matrix);
  REQUIRE(list.size() == 4);
  CHECK(t.phonemes.symbol(list[0].id) == "eh");
  CHECK(t.phonemes.symbol(list[1].id) == "ey");
  CHECK(t.phonemes.symbol(list[2].id) == "iy");
  CHECK(t.phonemes.symbol(list[3].id) == "ih");
  for (const auto& c : list) CHECK(c.cost < kDemoRadius);

  // a tight radius leaves only same-cluster candidates; hh has none
  auto hh = phoneme_candidates(t.phonemes.id("hh"), 0.01, t.matrix);
  REQUIRE(hh.size() == 1);
  CHECK(hh[0].id == t.phonemes.id("hh"));
}

TEST_CASE("filter re-evaluation confirms every admitted candidate") {
  const auto& t = shipped_table();
  Rng rng(5150);
  for (int i = 0; i < 100; ++i) {
    PhonemeId p = PhonemeId(rng.below(kNumPhonemes));
    double r = 0.05 + rng.uniform01() * 0.9;
    auto list = phoneme_candidates(p, r, t.matrix);
    std::set<PhonemeId> admitted;
    for (const auto& c : list) {
      CHECK(t.matrix(p, c.id) < r);
      CHECK(t.matrix(p, c.id) == c.cost);
      admitted.insert(c.id);
    }
    CHECK(admitted.count(p) == 1);
    for (std::size_t q = 0; q < kNumPhonemes; ++q)
      CHECK(admitted.count(PhonemeId(q)) == (t.matrix(p, PhonemeId(q)) < r));
  }
}

TEST_CASE("worked example: the three-position space has 16 candidates") {
  auto space = paine_space();
  REQUIRE(space.length() == 3);
  CHECK(space.count_at(3) == 2);
  CHECK(space.count_at(2) == 4);
  CHECK(space.count_at(1) == 2);
  CHECK(space.total == 16);

  const auto& phonemes = shipped_table().phonemes;
  auto rows = candidate_table(space, phonemes);
  const char* expected[16] = {
      "b eh n",  "b eh ng",  "b ey n",  "b ey ng",
      "b iy n",  "b iy ng",  "b ih n",  "b ih ng",
      "p eh n",  "p eh ng",  "p ey n",  "p ey ng",
      "p iy n",  "p iy ng",  "p ih n",  "p ih ng",
  };
  REQUIRE(rows.size() == 16);
  for (std::size_t x = 0; x < 16; ++x) {
    CHECK(rows[x].x == x);
    CHECK(rows[x].symbols == expected[x]);
  }
}

TEST_CASE("index mapping matches the worked example") {
  auto space = paine_space();
  CHECK(phonemes_to_index(space, {1, 2, 1}) == 13);
  CHECK(phonemes_to_index(space, {0, 0, 0}) == 0);
  CHECK(phonemes_to_index(space, {1, 3, 1}) == 15);

  CHECK(index_to_phonemes(space, 13) == std::vector<std::uint32_t>{1, 2, 1});
  CHECK(index_to_phonemes(space, 0) == std::vector<std::uint32_t>{0, 0, 0});

  CHECK(candidate_at(space, 0) == pron("b eh n"));
  CHECK(candidate_at(space, 10) == pron("p ey n"));  // the base itself
  CHECK(candidate_at(space, 13) == pron("p iy ng"));

  CHECK_THROWS_AS(phonemes_to_index(space, {2, 0, 0}), InputError);
  CHECK_THROWS_AS(index_to_phonemes(space, 16), InputError);
}

TEST_CASE("index mapping round-trips exhaustively on random spaces") {
  Rng rng(99);
  for (int s = 0; s < 50; ++s) {
    std::vector<std::size_t> counts(1 + rng.below(6));
    for (auto& c : counts) c = 1 + rng.below(8);
    auto space = namelex::testing::space_with_counts(counts);
    std::set<std::vector<std::uint32_t>> seen;
    for (std::uint64_t x = 0; x < space.total; ++x) {
      auto digits = index_to_phonemes(space, x);
      CHECK(phonemes_to_index(space, digits) == x);
      CHECK(seen.insert(digits).second);  // tuples all distinct
    }
  }
}

TEST_CASE("the base pronunciation is always reachable") {
  Rng rng(123);
  const auto& t = shipped_table();
  for (int i = 0; i < 50; ++i) {
    auto base = namelex::testing::random_pron(rng, 1 + rng.below(4));
    double r = 0.05 + rng.uniform01() * 0.5;
    auto space = build_candidate_space(base, r, 6, t.matrix);
    bool found = false;
    for (std::uint64_t x = 0; x < space.total && !found; ++x)
      found = candidate_at(space, x) == base;
    CHECK(found);
  }
}

TEST_CASE("outreach averages the per-position maxima") {
  const auto& t = shipped_table();
  auto space = paine_space();
  // positions p and n only reach same-cluster partners (cost 0); ey also
  // reaches ih at the largest pinned cost
  double ih_cost = t.matrix(t.phonemes.id("ey"), t.phonemes.id("ih"));
  CHECK(outreach_distance(space) ==
        doctest::Approx(ih_cost / 3.0).epsilon(1e-12));

  // degenerate space: only the base itself
  auto tiny = build_candidate_space(pron("hh"), 0.01, 6, t.matrix);
  CHECK(tiny.total == 1);
  CHECK(outreach_distance(tiny) == 0.0);
}

TEST_CASE("outreach equals an independent re-evaluation and stays below r0") {
  Rng rng(321);
  ConfusionMatrix m = namelex::testing::random_matrix(rng);
  for (int i = 0; i < 100; ++i) {
    auto base = namelex::testing::random_pron(rng, 1 + rng.below(5));
    double r = 0.05 + rng.uniform01() * 0.9;
    auto space = build_candidate_space(base, r, 8, m);
    double sum = 0.0;
    for (const auto& list : space.positions) {
      double worst = 0.0;
      for (const auto& c : list) worst = std::max(worst, c.cost);
      sum += worst;
    }
    CHECK(outreach_distance(space) ==
          doctest::Approx(sum / double(base.size())).epsilon(1e-12));
    CHECK(outreach_distance(space) < r);
  }
}

TEST_CASE("radius reduction kicks in past the length cap") {
  CHECK(effective_radius(3.0, 10, 6) == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
  CHECK(effective_radius(3.0, 6, 6) == 3.0);
  CHECK(effective_radius(3.0, 2, 6) == 3.0);
  CHECK(effective_radius(2.0, 11, 6) == 1.0);
}

TEST_CASE("radius reduction never grows any candidate list") {
  Rng rng(42);
  // costs spread over [0, 3) so radii above 1 stay meaningful; the
  // unreduced lists are compared per position because the full space of a
  // long word blows the 2^32 guard — the very thing reduction is for
  ConfusionMatrix m = namelex::testing::random_matrix(rng, 3.0);
  for (int i = 0; i < 50; ++i) {
    std::size_t len = 7 + rng.below(4);  // always beyond m_max
    auto base = namelex::testing::random_pron(rng, len);
    auto reduced = build_candidate_space(base, 0.3, 6, m);
    CHECK(reduced.effective_radius < reduced.requested_radius);

    unsigned __int128 full_total = 1;
    for (std::size_t p = 0; p < len; ++p) {
      auto full_list = phoneme_candidates(base[p], 0.3, m);
      full_total *= full_list.size();
      CHECK(reduced.positions[p].size() <= full_list.size());
    }
    CHECK((unsigned __int128)reduced.total <= full_total);
  }
}

TEST_CASE("enlarging the radius never drops a candidate") {
  Rng rng(84);
  ConfusionMatrix m = namelex::testing::random_matrix(rng);
  for (int i = 0; i < 50; ++i) {
    auto base = namelex::testing::random_pron(rng, 1 + rng.below(4));
    double r1 = 0.05 + rng.uniform01() * 0.4;
    double r2 = r1 + rng.uniform01() * 0.5;
    auto small = build_candidate_space(base, r1, 9, m);
    auto large = build_candidate_space(base, r2, 9, m);
    for (std::size_t p = 0; p < base.size(); ++p) {
      std::set<PhonemeId> in_large;
      for (const auto& c : large.positions[p]) in_large.insert(c.id);
      for (const auto& c : small.positions[p]) CHECK(in_large.count(c.id));
    }
  }
}

TEST_CASE("zero radius keeps only the base pronunciation") {
  auto space = build_candidate_space(pron("p ey n"), 0.0, 6,
                                     shipped_table().matrix);
  CHECK(space.total == 1);
  CHECK(candidate_at(space, 0) == pron("p ey n"));
}

TEST_CASE("deletion adds a trailing void candidate per position") {
  auto space = paine_space(true);
  CHECK(space.total == 3 * 5 * 3);
  for (const auto& list : space.positions) {
    CHECK(list.back().id == kVoidPhoneme);
    CHECK(list.back().cost == kIndelCost);
    for (std::size_t i = 0; i + 1 < list.size(); ++i)
      CHECK(list[i].id != kVoidPhoneme);
  }

  // selecting void drops the position from the output
  auto x = phonemes_to_index(space, {2, 1, 2});  // void, ey, void
  CHECK(candidate_at(space, x) == pron("ey"));

  // all-void is rejected
  auto all_void = phonemes_to_index(space, {2, 4, 2});
  CHECK_THROWS_WITH_AS(candidate_at(space, all_void),
                       doctest::Contains("empty candidate"), InputError);

  // void candidates stay out of the outreach maximum
  CHECK(outreach_distance(space) == outreach_distance(paine_space(false)));
}

TEST_CASE("oversized spaces are rejected with advice") {
  ConfusionMatrix zeros;  // every phoneme within any positive radius
  Rng rng(1);
  auto base = namelex::testing::random_pron(rng, 7);  // 39^7 > 2^32
  CHECK_THROWS_WITH_AS(build_candidate_space(base, 0.5, 10, zeros),
                       doctest::Contains("reduce the search radius"),
                       InputError);
}
