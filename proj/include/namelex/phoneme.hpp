#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

namespace namelex {

using PhonemeId = std::uint8_t;

inline constexpr std::size_t kNumPhonemes = 39;

/// Sentinel id for the position-deletion ("void") candidate. Never appears
/// in a pronunciation; only inside candidate lists.
inline constexpr PhonemeId kVoidPhoneme = 39;

/// The phoneme inventory: symbol <-> id bijection, ids assigned by file
/// line order.
class PhonemeSet {
 public:
  PhonemeSet(std::vector<std::string> symbols);

  std::size_t size() const { return symbols_.size(); }
  const std::string& symbol(PhonemeId id) const;
  PhonemeId id(const std::string& symbol) const;
  bool contains(const std::string& symbol) const {
    return ids_.count(symbol) != 0;
  }

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, PhonemeId> ids_;
};

/// Partition of the inventory into linguistic clusters (the shipped file
/// has 16). cluster_of(p) == cluster_of(q) means substitution is
/// linguistically free.
class LinguisticClusters {
 public:
  LinguisticClusters(std::vector<std::vector<PhonemeId>> clusters);

  std::size_t count() const { return clusters_.size(); }
  const std::vector<std::vector<PhonemeId>>& clusters() const {
    return clusters_;
  }
  int cluster_of(PhonemeId p) const { return cluster_of_.at(p); }
  bool same_cluster(PhonemeId a, PhonemeId b) const {
    return cluster_of_.at(a) == cluster_of_.at(b);
  }

 private:
  std::vector<std::vector<PhonemeId>> clusters_;
  std::array<int, kNumPhonemes> cluster_of_;
};

/// Dense 39x39 grid of doubles, row = spoken phoneme, col = recognized.
class PhonemeGrid {
 public:
  PhonemeGrid() : cells_{} {}

  double at(PhonemeId row, PhonemeId col) const {
    return cells_[row * kNumPhonemes + col];
  }
  void set(PhonemeId row, PhonemeId col, double v) {
    cells_[row * kNumPhonemes + col] = v;
  }

 private:
  std::array<double, kNumPhonemes * kNumPhonemes> cells_;
};

/// Normalized acoustic dissimilarity: zero diagonal, entries in [0, 1].
struct AcousticMatrix {
  PhonemeGrid cost;
};

/// Combined substitution dissimilarity (acoustic x linguistic). Zero for
/// same-cluster pairs, acoustic cost otherwise. Not necessarily symmetric.
/// Directly-constructed matrices (tests, alternative scales) only need a
/// zero diagonal and nonnegative entries.
struct ConfusionMatrix {
  PhonemeGrid cost;

  double operator()(PhonemeId spoken, PhonemeId recognized) const {
    return cost.at(spoken, recognized);
  }
};

// ---- construction --------------------------------------------------------

/// Parses a phoneme inventory: one lowercase symbol per line, exactly 39
/// lines, no duplicates.
PhonemeSet load_phoneme_set(std::istream& in, const std::string& source);
PhonemeSet load_phoneme_set_file(const std::string& path);

/// Parses the cluster file: one cluster per line, space-separated symbols;
/// must cover the inventory exactly once.
LinguisticClusters load_clusters(std::istream& in, const PhonemeSet& phonemes,
                                 const std::string& source);
LinguisticClusters load_clusters_file(const std::string& path,
                                      const PhonemeSet& phonemes);

/// Parses the raw acoustic CSV (header row of symbols, then one row of 39
/// values per spoken phoneme). Rows/columns are permuted into inventory
/// order.
PhonemeGrid load_acoustic_raw(std::istream& in, const PhonemeSet& phonemes,
                              const std::string& source);
PhonemeGrid load_acoustic_raw_file(const std::string& path,
                                   const PhonemeSet& phonemes);

/// Sign-flips and globally normalizes a raw log-likelihood table:
/// cost(i,j) = max(0, raw(i,i) - raw(i,j)) / Z with Z the largest such
/// difference. Throws if the table has no contrast (Z == 0).
AcousticMatrix normalize_acoustic(const PhonemeGrid& raw);

/// Binary matrix: 0 iff same cluster (symmetric, zero diagonal).
PhonemeGrid linguistic_matrix(const LinguisticClusters& clusters);

/// Elementwise product; linguistic similarity takes priority (same-cluster
/// pairs come out 0 regardless of acoustic cost).
ConfusionMatrix combine(const AcousticMatrix& acoustic,
                        const PhonemeGrid& linguistic);

/// Everything needed to score pronunciations, loaded from the three data
/// files.
struct PhonemeTable {
  PhonemeSet phonemes;
  LinguisticClusters clusters;
  ConfusionMatrix matrix;
};

PhonemeTable load_phoneme_table(const std::string& phonemes_path,
                                const std::string& clusters_path,
                                const std::string& acoustic_path);

}  // namespace namelex
