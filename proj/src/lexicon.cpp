#include "namelex/lexicon.hpp"

#include <fstream>
#include <sstream>

#include "namelex/error.hpp"

namespace namelex {

namespace {

constexpr std::size_t kMaxNameWords = 4;

std::ifstream open_or_fail(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_input("cannot open ", path);
  return in;
}

}  // namespace

const std::vector<Pronunciation>& Lexicon::prons(
    const std::string& word) const {
  auto it = entries_.find(word);
  if (it == entries_.end()) fail_input("no pronunciation for ", word);
  return it->second;
}

const Pronunciation& Lexicon::canonical(const std::string& word) const {
  return prons(word).front();
}

void Lexicon::add(const std::string& word, Pronunciation pron) {
  entries_[word].push_back(std::move(pron));
}

void Lexicon::replace(const std::string& word,
                      std::vector<Pronunciation> prons) {
  if (prons.empty()) fail_input("empty pronunciation list for ", word);
  entries_[word] = std::move(prons);
}

std::string Name::str() const {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out += ' ';
    out += words[i];
  }
  return out;
}

Grammar::Grammar(std::vector<Name> names) : names_(std::move(names)) {
  if (names_.empty()) fail_input("grammar is empty");
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!index_.emplace(names_[i].str(), i).second)
      fail_input("duplicate grammar name \"", names_[i].str(), "\"");
  }
}

std::optional<std::size_t> Grammar::index_of(
    const std::string& name_str) const {
  auto it = index_.find(name_str);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Lexicon parse_lexicon(std::istream& in, const PhonemeSet& phonemes,
                      const std::string& source) {
  Lexicon lex;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto sep = line.find("  ");
    if (sep == std::string::npos || sep == 0)
      fail_parse(source, lineno,
                 "expected `word  phonemes` (two-space separator)");
    std::string word = line.substr(0, sep);
    Pronunciation pron;
    try {
      pron = parse_pronunciation(line.substr(sep + 2), phonemes);
    } catch (const InputError& e) {
      fail_parse(source, lineno, e.what());
    }
    if (pron.empty()) fail_parse(source, lineno, "empty pronunciation");
    lex.add(word, std::move(pron));
  }
  return lex;
}

Lexicon load_lexicon_file(const std::string& path,
                          const PhonemeSet& phonemes) {
  auto in = open_or_fail(path);
  return parse_lexicon(in, phonemes, path);
}

void serialize_lexicon(std::ostream& out, const Lexicon& lex,
                       const PhonemeSet& phonemes) {
  for (const auto& [word, prons] : lex.entries())
    for (const auto& pron : prons)
      out << word << "  " << format_pronunciation(pron, phonemes) << "\n";
}

void write_lexicon_file(const std::string& path, const Lexicon& lex,
                        const PhonemeSet& phonemes) {
  std::ofstream out(path);
  if (!out) fail_input("cannot write ", path);
  serialize_lexicon(out, lex, phonemes);
}

Grammar parse_grammar(std::istream& in, const std::string& source) {
  std::vector<Name> names;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream is(line);
    Name name;
    std::string word;
    while (is >> word) name.words.push_back(word);
    if (name.words.empty()) continue;
    if (name.words.size() > kMaxNameWords)
      fail_parse(source, lineno, "name has ", name.words.size(),
                 " words, at most ", kMaxNameWords, " supported");
    names.push_back(std::move(name));
  }
  try {
    return Grammar(std::move(names));
  } catch (const InputError& e) {
    fail_input(source, ": ", e.what());
  }
}

Grammar load_grammar_file(const std::string& path) {
  auto in = open_or_fail(path);
  return parse_grammar(in, path);
}

Pronunciation name_pronunciation(const Name& name, const Lexicon& lex) {
  Pronunciation out;
  for (const auto& word : name.words) {
    const Pronunciation& p = lex.canonical(word);
    out.phonemes.insert(out.phonemes.end(), p.phonemes.begin(),
                        p.phonemes.end());
  }
  return out;
}

}  // namespace namelex
