#pragma once

#include <string>
#include <vector>

#include "ymtok/core/surface.hpp"
#include "ymtok/core/word.hpp"
#include "ymtok/tok/token.hpp"

namespace ymtok {

namespace segmel {

inline std::vector<std::string> split_parts(std::string_view token) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto bar = token.find('|', start);
    parts.emplace_back(token.substr(start, bar == token.npos ? token.npos : bar - start));
    if (bar == token.npos) break;
    start = bar + 1;
  }
  return parts;
}

inline std::string join_parts(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += '|';
    out += parts[i];
  }
  return out;
}

/// `|`-joined tone strings, `#` placeholders or empty slots, not all empty.
inline bool is_melody(std::string_view token) {
  bool any = false;
  for (const auto& p : split_parts(token)) {
    if (p.empty()) continue;
    if (p != "#" && !is_tone_string(p)) return false;
    any = true;
  }
  return any;
}

inline bool is_boundary_text(std::string_view token) {
  const auto u = utf8::decode(token);
  return u.size() == 1 && classify_char(u[0]) != UnitKind::Text;
}

}  // namespace segmel

/// Tokens for one word: `seg1|…|segn` and `tone1|…|tonen`, or the word
/// itself when it carries no tone. A toneless tail becomes one more
/// segment with an empty tone slot.
inline std::vector<Token> segmel_word(std::string_view word) {
  const Word w = parse_word(word);
  if (w.kind == WordKind::Foreign) return {{TokenKind::Foreign, std::string(word)}};
  std::vector<std::string> segs, tones;
  for (const auto& m : w.morae) {
    segs.push_back(m.segment);
    tones.push_back(m.tone.str());
  }
  if (!w.trailing.empty()) {
    segs.push_back(w.trailing);
    tones.emplace_back();
  }
  return {{TokenKind::Segments, segmel::join_parts(segs)}, {TokenKind::Melody, segmel::join_parts(tones)}};
}

inline TokenStream segmel_tokenize(std::string_view utterance) {
  TokenStream ts;
  for (const auto& unit : split_surface(utterance)) {
    if (unit.kind != UnitKind::Text) {
      ts.tokens.push_back({TokenKind::Boundary, unit.text});
      continue;
    }
    for (auto& t : segmel_word(unit.text)) ts.tokens.push_back(std::move(t));
  }
  return ts;
}

/// Pairs each segments token with the melody after it and interleaves
/// them. Malformed input is repaired:
///   a short melody is padded at the end with `#`, a long one cut to the
///   number of segments; a melody with nothing to pair with is dropped,
///   except right after `-` or `=`, where it is a purely tonal clitic and
///   kept as is; `|`-joined segments with no melody get `#` tones.
inline std::string segmel_detokenize(const std::vector<std::string>& tokens, RepairStats* stats = nullptr) {
  RepairStats local;
  RepairStats& rs = stats ? *stats : local;
  std::vector<SurfaceUnit> units;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string& tok = tokens[i];
    if (segmel::is_boundary_text(tok)) {
      units.push_back({classify_char(utf8::decode(tok)[0]), tok});
      continue;
    }
    if (segmel::is_melody(tok)) {
      if (!units.empty() && units.back().kind == UnitKind::Glue) {
        units.push_back({UnitKind::Text, tok});
      } else {
        ++rs.orphan_melodies;
      }
      continue;
    }
    const bool paired = i + 1 < tokens.size() && segmel::is_melody(tokens[i + 1]);
    if (!paired && tok.find('|') == std::string::npos) {
      units.push_back({UnitKind::Text, tok});
      continue;
    }
    const auto segs = segmel::split_parts(tok);
    std::vector<std::string> tones;
    if (paired) {
      tones = segmel::split_parts(tokens[++i]);
    } else {
      ++rs.missing_melodies;
    }
    if (paired && tones.size() < segs.size()) ++rs.padded_melodies;
    if (tones.size() > segs.size()) ++rs.truncated_melodies;
    tones.resize(segs.size(), "#");
    std::string word;
    for (std::size_t k = 0; k < segs.size(); ++k) word += segs[k] + tones[k];
    units.push_back({UnitKind::Text, word});
  }
  return join_surface(units);
}

class SegMelTokenizer final : public Tokenizer {
 public:
  std::string name() const override { return "segmel"; }
  TokenStream tokenize(std::string_view line) const override { return segmel_tokenize(line); }
  std::string detokenize(const std::vector<std::string>& tokens, RepairStats* stats = nullptr) const override {
    return segmel_detokenize(tokens, stats);
  }
};

}  // namespace ymtok
