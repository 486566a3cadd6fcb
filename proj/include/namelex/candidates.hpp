#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "namelex/phoneme.hpp"
#include "namelex/pronunciation.hpp"

namespace namelex {

/// One entry of a per-position candidate list.
struct PhonemeCandidate {
  PhonemeId id;  // kVoidPhoneme marks position deletion
  double cost;   // substitution cost from the base phoneme
};

/// The candidate-pronunciation pool around one baseline pronunciation.
///
/// Positions follow the reverse-index convention: position m runs from M
/// (first phoneme) down to 1 (last phoneme), so arrays indexed 0..M-1 are
/// in reading order and array slot i holds position m = M - i. The
/// pronunciation index x treats position 1 as the least significant digit.
struct CandidateSpace {
  Pronunciation base;
  double requested_radius = 0.0;
  double effective_radius = 0.0;  // after length-triggered reduction
  /// Candidate lists in reading order; each contains the base phoneme and
  /// is sorted by (cost ascending, id ascending), with the void candidate,
  /// when enabled, appended last at cost kIndelCost.
  std::vector<std::vector<PhonemeCandidate>> positions;
  std::uint64_t total = 0;  // X = product of list sizes

  std::size_t length() const { return positions.size(); }
  /// Number of candidates N_m at position m (m in [1, length()]).
  std::size_t count_at(std::size_t m) const {
    return positions[positions.size() - m].size();
  }
};

/// All phonemes q with m(p, q) < radius, ordered (cost asc, id asc).
/// Contains p itself whenever radius > 0 (zero diagonal).
std::vector<PhonemeCandidate> phoneme_candidates(PhonemeId p, double radius,
                                                 const ConfusionMatrix& m);

/// Effective search radius: r0 unchanged for base lengths <= m_max, scaled
/// by (m_max - 1) / (M - 1) for longer bases.
double effective_radius(double r0, std::size_t base_length,
                        std::size_t m_max);

/// Builds the candidate space for one baseline pronunciation. Rejects
/// spaces with more than 2^32 candidates (callers should reduce the
/// radius).
CandidateSpace build_candidate_space(const Pronunciation& base, double r0,
                                     std::size_t m_max,
                                     const ConfusionMatrix& m,
                                     bool allow_deletion = false);

/// Mixed-radix mapping between per-position candidate indices and the flat
/// pronunciation index x in [0, X). `digits` is in reading order (digit i
/// indexes positions[i]).
std::uint64_t phonemes_to_index(const CandidateSpace& space,
                                const std::vector<std::uint32_t>& digits);
std::vector<std::uint32_t> index_to_phonemes(const CandidateSpace& space,
                                             std::uint64_t x);

/// Candidate pronunciation number x, with void positions removed. Throws
/// if every position is deleted.
Pronunciation candidate_at(const CandidateSpace& space, std::uint64_t x);

/// Average over positions of the largest candidate substitution cost; the
/// radius of the neighborhood a learned pronunciation can reach. Void
/// candidates do not participate.
double outreach_distance(const CandidateSpace& space);

/// Rows of the debug enumeration: x, the index digits, and the candidate's
/// symbol sequence ("-" for deleted positions before removal).
struct CandidateRow {
  std::uint64_t x;
  std::vector<std::uint32_t> digits;
  std::string symbols;
};
std::vector<CandidateRow> candidate_table(const CandidateSpace& space,
                                          const PhonemeSet& phonemes);

}  // namespace namelex
