#include "namelex/hpd.hpp"

#include <algorithm>
#include <numeric>

#include "namelex/error.hpp"

namespace namelex {

DeterminationOrder determination_order(const CandidateSpace& space,
                                       OrderPolicy policy) {
  DeterminationOrder order;
  order.policy = policy;
  const std::size_t len = space.length();
  order.positions.resize(len);
  // natural order: M, M-1, ..., 1
  for (std::size_t k = 0; k < len; ++k) order.positions[k] = len - k;
  if (policy == OrderPolicy::kNatural) return order;

  // stable sort keeps the natural order among equal counts
  std::stable_sort(order.positions.begin(), order.positions.end(),
                   [&](std::size_t a, std::size_t b) {
                     std::size_t na = space.count_at(a), nb = space.count_at(b);
                     return policy == OrderPolicy::kDescending ? na > nb
                                                               : na < nb;
                   });
  return order;
}

CostEstimate cost_estimate(const CandidateSpace& space,
                           const DeterminationOrder& order) {
  if (order.positions.size() != space.length())
    fail_input("determination order does not match the space");
  CostEstimate est;
  std::uint64_t undetermined = space.total;
  for (std::size_t k = 0; k < order.positions.size(); ++k) {
    std::size_t m = order.positions[k];
    est.recognizer_runs += space.count_at(m);
    // all candidates consistent with the already-fixed positions get
    // enumerated while this position is determined
    est.per_step.push_back(undetermined);
    est.prons_processed += undetermined;
    undetermined /= space.count_at(m);
  }
  return est;
}

namespace {

/// Enumerates the segment of candidates that agree with `fixed` (one digit
/// per position, kUnset = free) and have digit `value` at array slot
/// `slot`. Returns word-level pronunciations (void positions removed,
/// all-void candidates skipped).
constexpr std::uint32_t kUnset = 0xFFFFFFFFu;

std::vector<Pronunciation> materialize_segment(
    const CandidateSpace& space, const std::vector<std::uint32_t>& fixed,
    std::size_t slot, std::uint32_t value, std::uint64_t* enumerated) {
  std::vector<std::size_t> free_slots;
  for (std::size_t i = 0; i < space.length(); ++i)
    if (i != slot && fixed[i] == kUnset) free_slots.push_back(i);

  std::vector<std::uint32_t> digits = fixed;
  digits[slot] = value;
  for (std::size_t f : free_slots) digits[f] = 0;

  std::vector<Pronunciation> prons;
  while (true) {
    ++*enumerated;
    Pronunciation p;
    p.phonemes.reserve(space.length());
    for (std::size_t i = 0; i < space.length(); ++i) {
      PhonemeId id = space.positions[i][digits[i]].id;
      if (id != kVoidPhoneme) p.phonemes.push_back(id);
    }
    if (!p.empty()) prons.push_back(std::move(p));

    // mixed-radix increment over the free slots (last slot fastest, the
    // same significance order as the flat index)
    std::size_t f = free_slots.size();
    while (f > 0) {
      std::size_t i = free_slots[f - 1];
      if (++digits[i] < space.positions[i].size()) break;
      digits[i] = 0;
      --f;
    }
    if (f == 0) break;
  }
  return prons;
}

}  // namespace

HpdResult determine_best_pron(const CandidateSpace& space,
                              const Pronunciation& observed,
                              const DeterminationOrder& order,
                              const ListScorer& scorer) {
  if (order.positions.size() != space.length())
    fail_input("determination order does not match the space");

  HpdResult result;
  std::vector<std::uint32_t> fixed(space.length(), kUnset);

  for (std::size_t m : order.positions) {
    const std::size_t slot = space.length() - m;
    const std::size_t n = space.positions[slot].size();

    HpdStep step;
    step.position = m;
    std::uint64_t enumerated = 0;
    double best_score = -1.0;
    std::uint32_t best_value = 0;
    for (std::uint32_t v = 0; v < n; ++v) {
      auto segment = materialize_segment(space, fixed, slot, v, &enumerated);
      ++result.cost.recognizer_runs;
      double s = segment.empty() ? -1.0 : scorer(observed, segment);
      step.segment_scores.push_back(s);
      step.segment_sizes.push_back(segment.size());
      if (s > best_score) {  // ties keep the smaller candidate index
        best_score = s;
        best_value = v;
      }
    }
    fixed[slot] = best_value;
    step.chosen = best_value;
    step.chosen_phoneme = space.positions[slot][best_value].id;
    result.cost.per_step.push_back(enumerated);
    result.cost.prons_processed += enumerated;
    result.steps.push_back(std::move(step));
    result.score = best_score;
  }

  result.index = phonemes_to_index(space, fixed);
  result.best = candidate_at(space, result.index);
  return result;
}

}  // namespace namelex
