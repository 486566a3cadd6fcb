#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "namelex/lexicon.hpp"
#include "namelex/phoneme.hpp"
#include "namelex/pronunciation.hpp"

namespace namelex {

/// Insertion/deletion cost of the edit-distance kernel. The confusion
/// matrix never prices indels, so they are pinned to the maximum
/// normalized substitution cost: deleting is never cheaper than the worst
/// substitution.
inline constexpr double kIndelCost = 1.0;

/// Length-normalized weighted edit distance: DP cost C(M,N) divided by
/// max(M, N). Substitutions cost m(a_i, b_j) with a as the spoken side;
/// indels cost kIndelCost each. Zero iff the sequences are identical
/// under a zero-diagonal matrix.
double pron_distance(const Pronunciation& a, const Pronunciation& b,
                     const ConfusionMatrix& m);

/// Same DP with traceback: returns the per-position cost attribution on
/// the b (reference) side. Substitution and reference-deletion costs land
/// on the matched reference position; extra spoken phonemes are charged to
/// the next unconsumed reference position (clamped to the last one).
/// Used to localize recognition errors to words.
std::vector<double> align_reference_costs(const Pronunciation& spoken,
                                          const Pronunciation& reference,
                                          const ConfusionMatrix& m);

/// G x G matrix of distances between canonical name pronunciations.
/// Either fully materialized (row-major float32, built in parallel) or
/// lazy (rows computed on demand and cached) for very large grammars.
class NameDistanceMatrix {
 public:
  /// Builds the dense matrix, parallelized by rows.
  static NameDistanceMatrix build(const Grammar& grammar, const Lexicon& lex,
                                  const ConfusionMatrix& m);
  /// Serial reference implementation; same values as build().
  static NameDistanceMatrix build_serial(const Grammar& grammar,
                                         const Lexicon& lex,
                                         const ConfusionMatrix& m);
  /// Lazy variant: no upfront work, rows computed (and cached) on demand.
  static NameDistanceMatrix lazy(const Grammar& grammar, const Lexicon& lex,
                                 const ConfusionMatrix& m);

  std::size_t size() const { return size_; }
  bool is_lazy() const { return lazy_; }

  /// Distance between names s and t (float32 precision).
  double at(std::size_t s, std::size_t t) const;
  /// Full row for name s.
  std::span<const float> row(std::size_t s) const;

  // -- cache file: magic, G, checksum(grammar+lexicon+matrix), f32 cells --
  void save_cache(const std::string& path) const;
  /// Loads a dense matrix if the cache matches the inputs; returns nullopt
  /// on missing file or checksum/shape mismatch.
  static std::optional<NameDistanceMatrix> load_cache(
      const std::string& path, const Grammar& grammar, const Lexicon& lex,
      const ConfusionMatrix& m);

 private:
  struct LazyState;

  NameDistanceMatrix() = default;
  static std::uint64_t checksum(const Grammar& grammar, const Lexicon& lex,
                                const ConfusionMatrix& m);
  static float distance_cell(const std::vector<Pronunciation>& prons,
                             std::size_t s, std::size_t t,
                             const ConfusionMatrix& m);

  std::size_t size_ = 0;
  bool lazy_ = false;
  std::vector<float> cells_;  // dense storage, row-major
  std::uint64_t checksum_ = 0;
  std::shared_ptr<LazyState> lazy_state_;
};

}  // namespace namelex
