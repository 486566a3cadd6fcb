#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "namelex/pronunciation.hpp"

namespace namelex {

/// word -> ordered pronunciation list. The first-listed pronunciation of a
/// word is its canonical one.
class Lexicon {
 public:
  using Map = std::map<std::string, std::vector<Pronunciation>>;

  Lexicon() = default;
  explicit Lexicon(Map entries) : entries_(std::move(entries)) {}

  bool contains(const std::string& word) const {
    return entries_.count(word) != 0;
  }
  /// All pronunciations of a word; throws if the word is absent.
  const std::vector<Pronunciation>& prons(const std::string& word) const;
  /// First-listed pronunciation; throws if the word is absent.
  const Pronunciation& canonical(const std::string& word) const;

  void add(const std::string& word, Pronunciation pron);
  /// Replaces a word's whole pronunciation list.
  void replace(const std::string& word, std::vector<Pronunciation> prons);

  const Map& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  bool operator==(const Lexicon&) const = default;

 private:
  Map entries_;
};

/// A name is an ordered word sequence (2-4 words in production grammars;
/// single-word names are allowed for small tests).
struct Name {
  std::vector<std::string> words;

  std::string str() const;  // words joined by single spaces
  bool operator==(const Name&) const = default;
};

/// Ordered name list; index order is significant (ties in recognition break
/// toward the earliest entry).
class Grammar {
 public:
  Grammar() = default;
  explicit Grammar(std::vector<Name> names);

  std::size_t size() const { return names_.size(); }
  const Name& name(std::size_t i) const { return names_[i]; }
  const std::vector<Name>& names() const { return names_; }
  /// Index of a name by its string form, if present.
  std::optional<std::size_t> index_of(const std::string& name_str) const;

 private:
  std::vector<Name> names_;
  std::unordered_map<std::string, std::size_t> index_;
};

// ---- file formats ---------------------------------------------------------

/// Dictionary text format: one entry per line, `word  phoneme phoneme ...`
/// (two spaces after the word). Repeated lines for a word append alternate
/// pronunciations in file order.
Lexicon parse_lexicon(std::istream& in, const PhonemeSet& phonemes,
                      const std::string& source);
Lexicon load_lexicon_file(const std::string& path, const PhonemeSet& phonemes);
void serialize_lexicon(std::ostream& out, const Lexicon& lex,
                       const PhonemeSet& phonemes);
void write_lexicon_file(const std::string& path, const Lexicon& lex,
                        const PhonemeSet& phonemes);

/// Grammar file: one name per line, words space-separated. Duplicate word
/// sequences are rejected.
Grammar parse_grammar(std::istream& in, const std::string& source);
Grammar load_grammar_file(const std::string& path);

/// Concatenation of each word's canonical pronunciation. Throws, naming the
/// word, if one is missing from the lexicon.
Pronunciation name_pronunciation(const Name& name, const Lexicon& lex);

}  // namespace namelex
