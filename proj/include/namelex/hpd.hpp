#pragma once

#include <functional>
#include <span>
#include <vector>

#include "namelex/candidates.hpp"
#include "namelex/pronunciation.hpp"

namespace namelex {

enum class OrderPolicy { kNatural, kDescending, kAscending };

/// The order in which phoneme positions are fixed. Positions use the
/// reverse-index convention (M..1); natural order is M, M-1, ..., 1, the
/// sorted policies order by candidate count with natural-order tie-breaks.
struct DeterminationOrder {
  OrderPolicy policy = OrderPolicy::kNatural;
  std::vector<std::size_t> positions;  // values in [1, M]
};

DeterminationOrder determination_order(const CandidateSpace& space,
                                       OrderPolicy policy);

/// Cost model of one determination run: recognizer invocations weigh T1,
/// candidate pronunciations processed weigh T2.
struct CostEstimate {
  std::uint64_t recognizer_runs = 0;   // sum of N_m, order-independent
  std::uint64_t prons_processed = 0;   // L, order-dependent
  std::vector<std::uint64_t> per_step; // L_k per determination step
};

CostEstimate cost_estimate(const CandidateSpace& space,
                           const DeterminationOrder& order);

/// Mono-gram scoring callback: best score of `prons` against `observed`.
/// Deliberately list-level — the winning list element is never revealed.
using ListScorer = std::function<double(
    const Pronunciation& observed, std::span<const Pronunciation> prons)>;

/// Per-step trace of a determination run (for the debug CLI).
struct HpdStep {
  std::size_t position;  // m being fixed at this step
  std::vector<double> segment_scores;  // score per candidate value n_m
  std::vector<std::uint64_t> segment_sizes;
  std::uint32_t chosen;      // winning n_m
  PhonemeId chosen_phoneme;  // may be kVoidPhoneme
};

struct HpdResult {
  Pronunciation best;     // void positions removed
  double score = 0.0;
  std::uint64_t index = 0;  // flat candidate index x of the winner
  CostEstimate cost;        // counted during execution
  std::vector<HpdStep> steps;
};

/// Recovers the best candidate pronunciation using only list-level maximum
/// scores: one position per round, the surviving candidate set is
/// partitioned into one segment per candidate value, each segment is scored
/// with a single mono-gram call, and the argmax value is fixed (ties to the
/// smaller index). Segments are materialized one at a time via the
/// mixed-radix index arithmetic. The final score equals the maximum over
/// all X candidates because a partition's best segment maximum is the
/// global maximum at every step.
HpdResult determine_best_pron(const CandidateSpace& space,
                              const Pronunciation& observed,
                              const DeterminationOrder& order,
                              const ListScorer& scorer);

}  // namespace namelex
