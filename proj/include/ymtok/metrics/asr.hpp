#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "ymtok/core/error.hpp"
#include "ymtok/core/utf8.hpp"

namespace ymtok {

/// Levenshtein distance with unit costs.
template <class Seq>
std::size_t edit_distance(const Seq& ref, const Seq& hyp) {
  std::vector<std::size_t> row(hyp.size() + 1);
  for (std::size_t j = 0; j <= hyp.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= ref.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= hyp.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (ref[i - 1] == hyp[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[hyp.size()];
}

inline std::vector<std::string> split_words(std::string_view s) {
  std::istringstream in{std::string(s)};
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

struct ErrorCount {
  std::size_t edits = 0;
  std::size_t ref_length = 0;

  double rate() const {
    if (ref_length == 0) throw Error(Errc::EmptyReference, "empty reference");
    return static_cast<double>(edits) / static_cast<double>(ref_length);
  }

  ErrorCount& operator+=(const ErrorCount& o) {
    edits += o.edits;
    ref_length += o.ref_length;
    return *this;
  }
};

/// Character edits, spaces included.
inline ErrorCount char_errors(std::string_view ref, std::string_view hyp) {
  const auto r = utf8::decode(ref);
  return {edit_distance(r, utf8::decode(hyp)), r.size()};
}

inline ErrorCount word_errors(std::string_view ref, std::string_view hyp) {
  const auto r = split_words(ref);
  return {edit_distance(r, split_words(hyp)), r.size()};
}

inline double cer(std::string_view ref, std::string_view hyp) { return char_errors(ref, hyp).rate(); }
inline double wer(std::string_view ref, std::string_view hyp) { return word_errors(ref, hyp).rate(); }

}  // namespace ymtok
