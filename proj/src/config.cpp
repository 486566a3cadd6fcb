#include "namelex/config.hpp"

#include <fstream>

#include "namelex/error.hpp"

namespace namelex {

OrderPolicy RunConfig::parse_order_policy(const std::string& text) {
  if (text == "natural") return OrderPolicy::kNatural;
  if (text == "descending") return OrderPolicy::kDescending;
  if (text == "ascending") return OrderPolicy::kAscending;
  fail_input("unknown order policy \"", text,
             "\" (expected natural, descending or ascending)");
}

std::string RunConfig::order_policy_name(OrderPolicy policy) {
  switch (policy) {
    case OrderPolicy::kNatural: return "natural";
    case OrderPolicy::kDescending: return "descending";
    case OrderPolicy::kAscending: return "ascending";
  }
  return "descending";
}

std::map<std::string, std::string> parse_config_text(
    std::istream& in, const std::string& source) {
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    auto strip = [](std::string s) {
      auto b = s.find_first_not_of(" \t");
      auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    if (strip(line).empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      fail_parse(source, lineno, "expected key=value");
    std::string key = strip(line.substr(0, eq));
    std::string value = strip(line.substr(eq + 1));
    if (key.empty()) fail_parse(source, lineno, "empty key");
    if (!kv.emplace(key, value).second)
      fail_parse(source, lineno, "duplicate key \"", key, "\"");
  }
  return kv;
}

std::map<std::string, std::string> load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_input("cannot open ", path);
  return parse_config_text(in, path);
}

namespace {

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    fail_input("config key ", key, ": bad number \"", value, "\"");
  }
}

std::uint64_t to_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    unsigned long long v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    fail_input("config key ", key, ": bad integer \"", value, "\"");
  }
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  fail_input("config key ", key, ": bad boolean \"", value, "\"");
}

}  // namespace

void apply_config(RunConfig& cfg,
                  const std::map<std::string, std::string>& kv) {
  for (const auto& [key, value] : kv) {
    if (key == "phonemes") cfg.phonemes = value;
    else if (key == "clusters") cfg.clusters = value;
    else if (key == "acoustic") cfg.acoustic = value;
    else if (key == "lexicon") cfg.lexicon = value;
    else if (key == "grammar") cfg.grammar = value;
    else if (key == "corpus") cfg.corpus = value;
    else if (key == "outdir") cfg.outdir = value;
    else if (key == "matrix_cache") cfg.matrix_cache = value;
    else if (key == "lazy_matrix") cfg.lazy_matrix = to_bool(key, value);
    else if (key == "r0") cfg.learn.r0 = to_double(key, value);
    else if (key == "m_max") cfg.learn.m_max = std::size_t(to_u64(key, value));
    else if (key == "k1") cfg.learn.k1 = std::size_t(to_u64(key, value));
    else if (key == "k2") cfg.learn.k2 = std::size_t(to_u64(key, value));
    else if (key == "order")
      cfg.learn.order_policy = RunConfig::parse_order_policy(value);
    else if (key == "reject_threshold")
      cfg.learn.reject_threshold = to_double(key, value);
    else if (key == "allow_deletion")
      cfg.learn.allow_deletion = to_bool(key, value);
    else if (key == "lambda") cfg.channel.lambda = to_double(key, value);
    else if (key == "rho") cfg.channel.rho = to_double(key, value);
    else if (key == "seed") cfg.channel.seed = to_u64(key, value);
    else if (key == "jobs") cfg.jobs = int(to_u64(key, value));
    else fail_input("unknown config key \"", key, "\"");
  }
  if (cfg.channel.lambda <= 0.0) fail_input("lambda must be positive");
  if (cfg.channel.rho < 0.0 || cfg.channel.rho >= 1.0)
    fail_input("rho must be in [0, 1)");
  if (cfg.learn.k1 < 1 || cfg.learn.k2 < 1)
    fail_input("k1 and k2 must be at least 1");
  if (cfg.learn.m_max < 1) fail_input("m_max must be at least 1");
  if (cfg.learn.r0 < 0.0) fail_input("r0 must be nonnegative");
}

}  // namespace namelex
