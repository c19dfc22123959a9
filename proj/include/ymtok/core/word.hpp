#pragma once

#include <algorithm>
#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "ymtok/core/error.hpp"

namespace ymtok {

inline constexpr bool is_tone_digit(char c) { return c >= '1' && c <= '4'; }

// Characters of the practical orthography that make up the segmental
// part of a mora. `~n` spells ñ.
inline constexpr bool is_segment_char(char c) {
  return (c >= 'a' && c <= 'z') || c == '~' || c == '\'';
}

inline bool is_tone_string(std::string_view s) {
  return !s.empty() && s.size() <= 3 && std::all_of(s.begin(), s.end(), is_tone_digit);
}

/// A tone written as 1-3 level digits, or the `#` placeholder that
/// detokenization inserts when a melody is too short.
class Tone {
 public:
  explicit Tone(std::string digits) : digits_(std::move(digits)) {
    if (!is_tone_string(digits_))
      throw Error(Errc::BadFormat, "invalid tone '" + digits_ + "'");
  }

  static Tone placeholder() { return Tone(Placeholder{}); }

  bool is_placeholder() const { return digits_ == "#"; }
  const std::string& str() const { return digits_; }

  /// The nine basic tones.
  bool is_basic() const {
    static constexpr std::array<std::string_view, 9> kBasic = {
        "1", "2", "3", "4", "13", "14", "24", "32", "42"};
    return std::find(kBasic.begin(), kBasic.end(), digits_) != kBasic.end();
  }

  /// Basic tones plus the infrequent contours and filler-word falls seen in
  /// the corpus.
  bool is_attested() const { return is_basic() || is_rare_attested(); }

  bool is_rare_attested() const {
    static constexpr std::array<std::string_view, 6> kRare = {"143", "132", "342",
                                                              "41",  "43",  "34"};
    return std::find(kRare.begin(), kRare.end(), digits_) != kRare.end();
  }

  friend bool operator==(const Tone&, const Tone&) = default;

 private:
  struct Placeholder {};
  explicit Tone(Placeholder) : digits_("#") {}

  std::string digits_;
};

struct Mora {
  std::string segment;
  Tone tone;

  friend bool operator==(const Mora&, const Mora&) = default;
};

enum class WordKind { Native, Foreign };

struct Word {
  std::vector<Mora> morae;
  std::string trailing;
  WordKind kind = WordKind::Native;

  friend bool operator==(const Word&, const Word&) = default;
};

/// Splits a punctuation-free token into (segment, tone) morae.
///
/// A token is native when it is entirely covered by repetitions of
/// `[a-z~']+[1-4]{1,3}` followed by an optional toneless segment run.
/// Anything else (no tone, stray characters, over-long digit runs) is
/// kept verbatim as a foreign word so rendering stays lossless.
inline Word parse_word(std::string_view text) {
  if (text.empty()) throw Error(Errc::EmptyWord, "empty word");

  Word w;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t seg_end = i;
    while (seg_end < text.size() && is_segment_char(text[seg_end])) ++seg_end;
    std::size_t tone_end = seg_end;
    while (tone_end < text.size() && is_tone_digit(text[tone_end])) ++tone_end;

    if (seg_end == i) break;  // no segment where one is required
    if (tone_end == seg_end) {
      if (seg_end == text.size()) {
        w.trailing = std::string(text.substr(i));
        i = text.size();
      }
      break;
    }
    if (tone_end - seg_end > 3) break;
    w.morae.push_back(Mora{std::string(text.substr(i, seg_end - i)),
                           Tone(std::string(text.substr(seg_end, tone_end - seg_end)))});
    i = tone_end;
  }

  if (i != text.size() || w.morae.empty()) {
    return Word{{}, std::string(text), WordKind::Foreign};
  }
  return w;
}

inline std::string render_word(const Word& w) {
  std::string out;
  for (const auto& m : w.morae) {
    out += m.segment;
    out += m.tone.str();
  }
  out += w.trailing;
  return out;
}

}  // namespace ymtok
