#pragma once

#include <compare>
#include <string>
#include <vector>

#include "namelex/phoneme.hpp"

namespace namelex {

/// A finite phoneme sequence; the point type of pronunciation space.
struct Pronunciation {
  std::vector<PhonemeId> phonemes;

  Pronunciation() = default;
  Pronunciation(std::vector<PhonemeId> p) : phonemes(std::move(p)) {}

  std::size_t size() const { return phonemes.size(); }
  bool empty() const { return phonemes.empty(); }
  PhonemeId operator[](std::size_t i) const { return phonemes[i]; }

  auto operator<=>(const Pronunciation&) const = default;
};

/// Parses "p ey n" against the inventory; throws on unknown symbols.
Pronunciation parse_pronunciation(const std::string& text,
                                  const PhonemeSet& phonemes);

/// Space-joined symbol form.
std::string format_pronunciation(const Pronunciation& pron,
                                 const PhonemeSet& phonemes);

/// Concatenation helper.
Pronunciation concat(const std::vector<Pronunciation>& parts);

}  // namespace namelex
