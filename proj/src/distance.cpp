#include "namelex/distance.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <mutex>
#include <unordered_map>

#include "namelex/error.hpp"
#include "namelex/rng.hpp"

namespace namelex {

namespace {

// Full DP table for a x b; cell (i, j) is the cost of aligning the first i
// phonemes of a with the first j of b.
std::vector<double> edit_table(const Pronunciation& a, const Pronunciation& b,
                               const ConfusionMatrix& m) {
  const std::size_t rows = a.size() + 1, cols = b.size() + 1;
  std::vector<double> c(rows * cols);
  auto cell = [&](std::size_t i, std::size_t j) -> double& {
    return c[i * cols + j];
  };
  for (std::size_t i = 0; i < rows; ++i) cell(i, 0) = double(i) * kIndelCost;
  for (std::size_t j = 0; j < cols; ++j) cell(0, j) = double(j) * kIndelCost;
  for (std::size_t i = 1; i < rows; ++i) {
    for (std::size_t j = 1; j < cols; ++j) {
      double sub = cell(i - 1, j - 1) + m(a[i - 1], b[j - 1]);
      double del = cell(i - 1, j) + kIndelCost;
      double ins = cell(i, j - 1) + kIndelCost;
      cell(i, j) = std::min({sub, del, ins});
    }
  }
  return c;
}

}  // namespace

double pron_distance(const Pronunciation& a, const Pronunciation& b,
                     const ConfusionMatrix& m) {
  if (a.empty() || b.empty()) fail_input("pron_distance on empty sequence");
  auto c = edit_table(a, b, m);
  double total = c[a.size() * (b.size() + 1) + b.size()];
  return total / double(std::max(a.size(), b.size()));
}

std::vector<double> align_reference_costs(const Pronunciation& spoken,
                                          const Pronunciation& reference,
                                          const ConfusionMatrix& m) {
  if (spoken.empty() || reference.empty())
    fail_input("alignment on empty sequence");
  const std::size_t rows = spoken.size() + 1, cols = reference.size() + 1;
  auto c = edit_table(spoken, reference, m);
  auto cell = [&](std::size_t i, std::size_t j) {
    return c[i * cols + j];
  };

  std::vector<double> per_ref(reference.size(), 0.0);
  // walk back from (rows-1, cols-1); prefer substitution, then reference
  // deletion, then spoken insertion (fixed, arbitrary tie order).
  std::size_t i = rows - 1, j = cols - 1;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      double sub = m(spoken[i - 1], reference[j - 1]);
      if (cell(i, j) == cell(i - 1, j - 1) + sub) {
        per_ref[j - 1] += sub;
        --i, --j;
        continue;
      }
    }
    if (j > 0 && cell(i, j) == cell(i, j - 1) + kIndelCost) {
      per_ref[j - 1] += kIndelCost;  // reference phoneme dropped
      --j;
      continue;
    }
    // extra spoken phoneme: charge the next unconsumed reference position
    per_ref[std::min(j, reference.size() - 1)] += kIndelCost;
    --i;
  }
  return per_ref;
}

// ---- NameDistanceMatrix -----------------------------------------------------

struct NameDistanceMatrix::LazyState {
  std::vector<Pronunciation> prons;
  const ConfusionMatrix* matrix = nullptr;
  mutable std::mutex mu;
  mutable std::unordered_map<std::size_t, std::vector<float>> rows;
};

float NameDistanceMatrix::distance_cell(
    const std::vector<Pronunciation>& prons, std::size_t s, std::size_t t,
    const ConfusionMatrix& m) {
  if (s == t) return 0.0f;
  return static_cast<float>(pron_distance(prons[s], prons[t], m));
}

namespace {

std::vector<Pronunciation> canonical_prons(const Grammar& grammar,
                                           const Lexicon& lex) {
  std::vector<Pronunciation> prons;
  prons.reserve(grammar.size());
  for (const auto& name : grammar.names())
    prons.push_back(name_pronunciation(name, lex));
  return prons;
}

}  // namespace

NameDistanceMatrix NameDistanceMatrix::build_serial(const Grammar& grammar,
                                                    const Lexicon& lex,
                                                    const ConfusionMatrix& m) {
  NameDistanceMatrix out;
  auto prons = canonical_prons(grammar, lex);
  out.size_ = prons.size();
  out.cells_.resize(out.size_ * out.size_);
  for (std::size_t s = 0; s < out.size_; ++s)
    for (std::size_t t = 0; t < out.size_; ++t)
      out.cells_[s * out.size_ + t] = distance_cell(prons, s, t, m);
  out.checksum_ = checksum(grammar, lex, m);
  return out;
}

NameDistanceMatrix NameDistanceMatrix::build(const Grammar& grammar,
                                             const Lexicon& lex,
                                             const ConfusionMatrix& m) {
  NameDistanceMatrix out;
  auto prons = canonical_prons(grammar, lex);
  out.size_ = prons.size();
  out.cells_.resize(out.size_ * out.size_);
  const std::int64_t n = static_cast<std::int64_t>(out.size_);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t s = 0; s < n; ++s)
    for (std::int64_t t = 0; t < n; ++t)
      out.cells_[s * n + t] =
          distance_cell(prons, std::size_t(s), std::size_t(t), m);
  out.checksum_ = checksum(grammar, lex, m);
  return out;
}

NameDistanceMatrix NameDistanceMatrix::lazy(const Grammar& grammar,
                                            const Lexicon& lex,
                                            const ConfusionMatrix& m) {
  NameDistanceMatrix out;
  out.size_ = grammar.size();
  out.lazy_ = true;
  out.lazy_state_ = std::make_shared<LazyState>();
  out.lazy_state_->prons = canonical_prons(grammar, lex);
  out.lazy_state_->matrix = &m;
  out.checksum_ = checksum(grammar, lex, m);
  return out;
}

std::span<const float> NameDistanceMatrix::row(std::size_t s) const {
  if (s >= size_) fail_input("name index out of range");
  if (!lazy_) return {cells_.data() + s * size_, size_};

  auto& st = *lazy_state_;
  {
    std::lock_guard lock(st.mu);
    auto it = st.rows.find(s);
    if (it != st.rows.end()) return {it->second.data(), size_};
  }
  std::vector<float> r(size_);
  const std::int64_t n = static_cast<std::int64_t>(size_);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t t = 0; t < n; ++t)
    r[std::size_t(t)] = distance_cell(st.prons, s, std::size_t(t), *st.matrix);
  std::lock_guard lock(st.mu);
  auto [it, _] = st.rows.emplace(s, std::move(r));
  return {it->second.data(), size_};
}

double NameDistanceMatrix::at(std::size_t s, std::size_t t) const {
  if (t >= size_) fail_input("name index out of range");
  return row(s)[t];
}

std::uint64_t NameDistanceMatrix::checksum(const Grammar& grammar,
                                           const Lexicon& lex,
                                           const ConfusionMatrix& m) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (const auto& name : grammar.names()) {
    h = fnv1a(name.str(), h);
    h = fnv1a("\n", h);
    const Pronunciation p = name_pronunciation(name, lex);
    h = fnv1a(std::string_view(reinterpret_cast<const char*>(p.phonemes.data()),
                               p.phonemes.size()),
              h);
    h = fnv1a("\n", h);
  }
  for (std::size_t i = 0; i < kNumPhonemes; ++i) {
    for (std::size_t j = 0; j < kNumPhonemes; ++j) {
      double v = m(PhonemeId(i), PhonemeId(j));
      h = fnv1a(std::string_view(reinterpret_cast<const char*>(&v), sizeof v),
                h);
    }
  }
  return h;
}

namespace {
constexpr char kCacheMagic[8] = {'N', 'L', 'X', 'D', 'M', '0', '0', '1'};
}

void NameDistanceMatrix::save_cache(const std::string& path) const {
  if (lazy_) fail_input("cannot cache a lazy distance matrix");
  std::ofstream out(path, std::ios::binary);
  if (!out) fail_input("cannot write ", path);
  out.write(kCacheMagic, sizeof kCacheMagic);
  std::uint64_t g = size_;
  out.write(reinterpret_cast<const char*>(&g), sizeof g);
  out.write(reinterpret_cast<const char*>(&checksum_), sizeof checksum_);
  out.write(reinterpret_cast<const char*>(cells_.data()),
            static_cast<std::streamsize>(cells_.size() * sizeof(float)));
  if (!out) fail_input("short write to ", path);
}

std::optional<NameDistanceMatrix> NameDistanceMatrix::load_cache(
    const std::string& path, const Grammar& grammar, const Lexicon& lex,
    const ConfusionMatrix& m) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[8];
  std::uint64_t g = 0, sum = 0;
  in.read(magic, sizeof magic);
  in.read(reinterpret_cast<char*>(&g), sizeof g);
  in.read(reinterpret_cast<char*>(&sum), sizeof sum);
  if (!in || std::memcmp(magic, kCacheMagic, sizeof magic) != 0)
    return std::nullopt;
  if (g != grammar.size() || sum != checksum(grammar, lex, m))
    return std::nullopt;

  NameDistanceMatrix out;
  out.size_ = g;
  out.checksum_ = sum;
  out.cells_.resize(g * g);
  in.read(reinterpret_cast<char*>(out.cells_.data()),
          static_cast<std::streamsize>(out.cells_.size() * sizeof(float)));
  if (!in || in.gcount() !=
                 static_cast<std::streamsize>(out.cells_.size() * sizeof(float)))
    return std::nullopt;
  return out;
}

}  // namespace namelex
