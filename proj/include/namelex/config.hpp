#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "namelex/learner.hpp"
#include "namelex/recognizer.hpp"

namespace namelex {

/// One experiment's settings: data file paths plus algorithm and channel
/// parameters. Populated from a key=value config file and/or CLI flags
/// (flags win).
struct RunConfig {
  // data files
  std::string phonemes = "data/phonemes.txt";
  std::string clusters = "data/clusters.txt";
  std::string acoustic = "data/acoustic_raw.csv";
  std::string lexicon;
  std::string grammar;
  std::string corpus;
  std::string outdir = ".";
  std::string matrix_cache;  // optional name-distance cache file
  bool lazy_matrix = false;

  LearnConfig learn;
  ChannelModel channel;
  int jobs = 0;  // 0 = library default thread count

  static OrderPolicy parse_order_policy(const std::string& text);
  static std::string order_policy_name(OrderPolicy policy);
};

/// key=value text document; '#' starts a comment, blank lines ignored.
std::map<std::string, std::string> parse_config_text(std::istream& in,
                                                     const std::string& source);
std::map<std::string, std::string> load_config_file(const std::string& path);

/// Applies config keys onto a RunConfig; unknown keys are rejected.
void apply_config(RunConfig& cfg,
                  const std::map<std::string, std::string>& kv);

}  // namespace namelex
