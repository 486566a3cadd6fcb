#include "namelex/candidates.hpp"

#include <algorithm>

#include "namelex/distance.hpp"
#include "namelex/error.hpp"

namespace namelex {

namespace {

constexpr std::uint64_t kMaxCandidates = 1ull << 32;

}

std::vector<PhonemeCandidate> phoneme_candidates(PhonemeId p, double radius,
                                                 const ConfusionMatrix& m) {
  std::vector<PhonemeCandidate> out;
  for (std::size_t q = 0; q < kNumPhonemes; ++q) {
    double cost = m(p, PhonemeId(q));
    if (cost < radius) out.push_back({PhonemeId(q), cost});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    return a.id < b.id;
  });
  return out;
}

double effective_radius(double r0, std::size_t base_length,
                        std::size_t m_max) {
  if (base_length <= m_max) return r0;
  return r0 * double(m_max - 1) / double(base_length - 1);
}

CandidateSpace build_candidate_space(const Pronunciation& base, double r0,
                                     std::size_t m_max,
                                     const ConfusionMatrix& m,
                                     bool allow_deletion) {
  if (base.empty()) fail_input("candidate space needs a nonempty base");
  if (r0 < 0.0) fail_input("search radius must be nonnegative");
  if (m_max < 1) fail_input("m_max must be at least 1");

  CandidateSpace space;
  space.base = base;
  space.requested_radius = r0;
  space.effective_radius = effective_radius(r0, base.size(), m_max);

  space.positions.reserve(base.size());
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < base.size(); ++i) {
    auto list = phoneme_candidates(base[i], space.effective_radius, m);
    // strict thresholding admits nothing at r = 0; the base phoneme is
    // still a candidate of itself
    if (list.empty()) list.push_back({base[i], 0.0});
    if (allow_deletion) list.push_back({kVoidPhoneme, kIndelCost});
    total *= list.size();
    if (total > kMaxCandidates)
      fail_input("candidate space exceeds 2^32 pronunciations; ",
                 "reduce the search radius");
    space.positions.push_back(std::move(list));
  }
  space.total = total;
  return space;
}

std::uint64_t phonemes_to_index(const CandidateSpace& space,
                                const std::vector<std::uint32_t>& digits) {
  if (digits.size() != space.length())
    fail_input("digit count does not match space length");
  std::uint64_t x = 0;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    std::size_t n = space.positions[i].size();
    if (digits[i] >= n)
      fail_input("candidate index ", digits[i], " out of range at position ",
                 space.length() - i);
    x = x * n + digits[i];
  }
  return x;
}

std::vector<std::uint32_t> index_to_phonemes(const CandidateSpace& space,
                                             std::uint64_t x) {
  if (x >= space.total) fail_input("pronunciation index out of range");
  std::vector<std::uint32_t> digits(space.length());
  for (std::size_t i = space.length(); i-- > 0;) {
    std::size_t n = space.positions[i].size();
    digits[i] = static_cast<std::uint32_t>(x % n);
    x /= n;
  }
  return digits;
}

Pronunciation candidate_at(const CandidateSpace& space, std::uint64_t x) {
  auto digits = index_to_phonemes(space, x);
  Pronunciation out;
  out.phonemes.reserve(space.length());
  for (std::size_t i = 0; i < digits.size(); ++i) {
    PhonemeId id = space.positions[i][digits[i]].id;
    if (id != kVoidPhoneme) out.phonemes.push_back(id);
  }
  if (out.empty()) fail_input("empty candidate: every position deleted");
  return out;
}

double outreach_distance(const CandidateSpace& space) {
  double sum = 0.0;
  for (const auto& list : space.positions) {
    double worst = 0.0;
    for (const auto& cand : list)
      if (cand.id != kVoidPhoneme) worst = std::max(worst, cand.cost);
    sum += worst;
  }
  return sum / double(space.length());
}

std::vector<CandidateRow> candidate_table(const CandidateSpace& space,
                                          const PhonemeSet& phonemes) {
  std::vector<CandidateRow> rows;
  rows.reserve(space.total);
  for (std::uint64_t x = 0; x < space.total; ++x) {
    CandidateRow row;
    row.x = x;
    row.digits = index_to_phonemes(space, x);
    for (std::size_t i = 0; i < row.digits.size(); ++i) {
      if (i) row.symbols += ' ';
      PhonemeId id = space.positions[i][row.digits[i]].id;
      row.symbols += id == kVoidPhoneme ? "-" : phonemes.symbol(id);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace namelex
