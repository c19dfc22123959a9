#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "ymtok/core/error.hpp"
#include "ymtok/core/surface.hpp"
#include "ymtok/core/utf8.hpp"
#include "ymtok/tok/token.hpp"

namespace ymtok {

/// Shannon entropy in bits of an empirical distribution.
inline double entropy_bits(const std::map<std::string, std::size_t>& counts) {
  std::size_t total = 0;
  for (const auto& [u, c] : counts) total += c;
  if (total == 0) return 0.0;
  double h = 0;
  for (const auto& [u, c] : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

/// Character distribution of a corpus. Whitespace is left out, like the
/// space tokens of a tokenizer.
inline std::map<std::string, std::size_t> char_counts(const std::vector<std::string>& corpus) {
  std::map<std::string, std::size_t> counts;
  for (const auto& line : corpus)
    for (char32_t c : utf8::decode(line))
      if (!is_space(c)) ++counts[utf8::encode(c)];
  return counts;
}

inline std::map<std::string, std::size_t> token_counts(const Tokenizer& tok, const std::vector<std::string>& corpus) {
  std::map<std::string, std::size_t> counts;
  for (const auto& line : corpus)
    for (const auto& t : tok.tokenize(line).tokens)
      if (!is_special(t.kind)) ++counts[t.text];
  return counts;
}

/// H(tokens) / H(characters).
inline double sparsity(const Tokenizer& tok, const std::vector<std::string>& corpus) {
  const double hc = entropy_bits(char_counts(corpus));
  if (hc == 0) throw Error(Errc::DegenerateCorpus, "corpus has fewer than two distinct characters");
  return entropy_bits(token_counts(tok, corpus)) / hc;
}

}  // namespace ymtok
