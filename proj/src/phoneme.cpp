#include "namelex/phoneme.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "namelex/error.hpp"

namespace namelex {

namespace {

std::ifstream open_or_fail(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_input("cannot open ", path);
  return in;
}

bool valid_symbol(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::islower(c); });
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

}  // namespace

PhonemeSet::PhonemeSet(std::vector<std::string> symbols)
    : symbols_(std::move(symbols)) {
  if (symbols_.size() != kNumPhonemes)
    fail_input("expected ", kNumPhonemes, " phonemes, got ", symbols_.size());
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (!ids_.emplace(symbols_[i], static_cast<PhonemeId>(i)).second)
      fail_input("duplicate phoneme \"", symbols_[i], "\"");
  }
}

const std::string& PhonemeSet::symbol(PhonemeId id) const {
  if (id >= symbols_.size()) fail_input("phoneme id out of range");
  return symbols_[id];
}

PhonemeId PhonemeSet::id(const std::string& symbol) const {
  auto it = ids_.find(symbol);
  if (it == ids_.end()) fail_input("unknown phoneme \"", symbol, "\"");
  return it->second;
}

PhonemeSet load_phoneme_set(std::istream& in, const std::string& source) {
  std::vector<std::string> symbols;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!valid_symbol(line))
      fail_parse(source, lineno, "invalid phoneme symbol \"", line, "\"");
    symbols.push_back(line);
  }
  return PhonemeSet(std::move(symbols));
}

PhonemeSet load_phoneme_set_file(const std::string& path) {
  auto in = open_or_fail(path);
  return load_phoneme_set(in, path);
}

LinguisticClusters::LinguisticClusters(
    std::vector<std::vector<PhonemeId>> clusters)
    : clusters_(std::move(clusters)) {
  cluster_of_.fill(-1);
  std::size_t covered = 0;
  for (std::size_t c = 0; c < clusters_.size(); ++c) {
    if (clusters_[c].empty()) fail_input("empty linguistic cluster");
    for (PhonemeId p : clusters_[c]) {
      if (p >= kNumPhonemes) fail_input("cluster phoneme id out of range");
      if (cluster_of_[p] != -1)
        fail_input("phoneme id ", int(p), " appears in two clusters");
      cluster_of_[p] = static_cast<int>(c);
      ++covered;
    }
  }
  if (covered != kNumPhonemes)
    fail_input("clusters cover ", covered, " phonemes, expected ",
               kNumPhonemes);
}

LinguisticClusters load_clusters(std::istream& in, const PhonemeSet& phonemes,
                                 const std::string& source) {
  std::vector<std::vector<PhonemeId>> clusters;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    std::vector<PhonemeId> cluster;
    for (const auto& tok : tokens) {
      if (!phonemes.contains(tok))
        fail_parse(source, lineno, "unknown phoneme \"", tok, "\"");
      cluster.push_back(phonemes.id(tok));
    }
    clusters.push_back(std::move(cluster));
  }
  return LinguisticClusters(std::move(clusters));
}

LinguisticClusters load_clusters_file(const std::string& path,
                                      const PhonemeSet& phonemes) {
  auto in = open_or_fail(path);
  return load_clusters(in, phonemes, path);
}

PhonemeGrid load_acoustic_raw(std::istream& in, const PhonemeSet& phonemes,
                              const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) fail_parse(source, 1, "missing header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::vector<PhonemeId> order;
  std::set<PhonemeId> seen;
  {
    std::istringstream hs(line);
    std::string sym;
    while (std::getline(hs, sym, ',')) {
      if (!phonemes.contains(sym))
        fail_parse(source, 1, "unknown phoneme \"", sym, "\" in header");
      PhonemeId id = phonemes.id(sym);
      if (!seen.insert(id).second)
        fail_parse(source, 1, "duplicate phoneme \"", sym, "\" in header");
      order.push_back(id);
    }
  }
  if (order.size() != kNumPhonemes)
    fail_parse(source, 1, "header has ", order.size(), " symbols, expected ",
               kNumPhonemes);

  PhonemeGrid raw;
  std::size_t lineno = 1;
  for (std::size_t r = 0; r < kNumPhonemes; ++r) {
    if (!std::getline(in, line))
      fail_parse(source, lineno + 1, "missing data row ", r + 1);
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream vs(line);
    std::string cell;
    std::size_t c = 0;
    while (std::getline(vs, cell, ',')) {
      if (c >= kNumPhonemes)
        fail_parse(source, lineno, "too many columns");
      try {
        std::size_t pos = 0;
        double v = std::stod(cell, &pos);
        if (pos != cell.size()) throw std::invalid_argument(cell);
        raw.set(order[r], order[c], v);
      } catch (const std::exception&) {
        fail_parse(source, lineno, "bad value \"", cell, "\"");
      }
      ++c;
    }
    if (c != kNumPhonemes)
      fail_parse(source, lineno, "row has ", c, " columns, expected ",
                 kNumPhonemes);
  }
  return raw;
}

PhonemeGrid load_acoustic_raw_file(const std::string& path,
                                   const PhonemeSet& phonemes) {
  auto in = open_or_fail(path);
  return load_acoustic_raw(in, phonemes, path);
}

AcousticMatrix normalize_acoustic(const PhonemeGrid& raw) {
  double z = 0.0;
  for (std::size_t i = 0; i < kNumPhonemes; ++i)
    for (std::size_t j = 0; j < kNumPhonemes; ++j)
      z = std::max(z, raw.at(PhonemeId(i), PhonemeId(i)) -
                          raw.at(PhonemeId(i), PhonemeId(j)));
  if (z == 0.0) fail_input("acoustic table has no contrast");

  AcousticMatrix out;
  for (std::size_t i = 0; i < kNumPhonemes; ++i) {
    for (std::size_t j = 0; j < kNumPhonemes; ++j) {
      if (i == j) {
        out.cost.set(PhonemeId(i), PhonemeId(j), 0.0);
        continue;
      }
      double d = raw.at(PhonemeId(i), PhonemeId(i)) -
                 raw.at(PhonemeId(i), PhonemeId(j));
      out.cost.set(PhonemeId(i), PhonemeId(j), d < 0.0 ? 0.0 : d / z);
    }
  }
  return out;
}

PhonemeGrid linguistic_matrix(const LinguisticClusters& clusters) {
  PhonemeGrid out;
  for (std::size_t i = 0; i < kNumPhonemes; ++i)
    for (std::size_t j = 0; j < kNumPhonemes; ++j)
      out.set(PhonemeId(i), PhonemeId(j),
              clusters.same_cluster(PhonemeId(i), PhonemeId(j)) ? 0.0 : 1.0);
  return out;
}

ConfusionMatrix combine(const AcousticMatrix& acoustic,
                        const PhonemeGrid& linguistic) {
  ConfusionMatrix out;
  for (std::size_t i = 0; i < kNumPhonemes; ++i)
    for (std::size_t j = 0; j < kNumPhonemes; ++j)
      out.cost.set(PhonemeId(i), PhonemeId(j),
                   acoustic.cost.at(PhonemeId(i), PhonemeId(j)) *
                       linguistic.at(PhonemeId(i), PhonemeId(j)));
  return out;
}

PhonemeTable load_phoneme_table(const std::string& phonemes_path,
                                const std::string& clusters_path,
                                const std::string& acoustic_path) {
  PhonemeSet phonemes = load_phoneme_set_file(phonemes_path);
  LinguisticClusters clusters = [&] {
    auto in = open_or_fail(clusters_path);
    return load_clusters(in, phonemes, clusters_path);
  }();
  PhonemeGrid raw = load_acoustic_raw_file(acoustic_path, phonemes);
  ConfusionMatrix matrix =
      combine(normalize_acoustic(raw), linguistic_matrix(clusters));
  return PhonemeTable{std::move(phonemes), std::move(clusters),
                      std::move(matrix)};
}

}  // namespace namelex
