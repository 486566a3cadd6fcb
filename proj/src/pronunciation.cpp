#include "namelex/pronunciation.hpp"

#include <sstream>

#include "namelex/error.hpp"

namespace namelex {

Pronunciation parse_pronunciation(const std::string& text,
                                  const PhonemeSet& phonemes) {
  std::istringstream is(text);
  std::vector<PhonemeId> ids;
  std::string tok;
  while (is >> tok) ids.push_back(phonemes.id(tok));
  return Pronunciation(std::move(ids));
}

std::string format_pronunciation(const Pronunciation& pron,
                                 const PhonemeSet& phonemes) {
  std::string out;
  for (std::size_t i = 0; i < pron.size(); ++i) {
    if (i) out += ' ';
    out += phonemes.symbol(pron[i]);
  }
  return out;
}

Pronunciation concat(const std::vector<Pronunciation>& parts) {
  Pronunciation out;
  for (const auto& p : parts)
    out.phonemes.insert(out.phonemes.end(), p.phonemes.begin(),
                        p.phonemes.end());
  return out;
}

}  // namespace namelex
