#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ymtok/core/utf8.hpp"

namespace ymtok {

// How a unit attaches to its neighbours when a line is laid out again.
enum class UnitKind {
  Text,   // an orthographic word or word piece
  Open,   // ¿ ¡ (   attaches to the following unit
  Close,  // . , ; : ? ! )   attaches to the preceding unit
  Glue,   // - =   morpheme boundaries, attach on both sides
};

struct SurfaceUnit {
  UnitKind kind;
  std::string text;

  friend bool operator==(const SurfaceUnit&, const SurfaceUnit&) = default;
};

inline UnitKind classify_char(char32_t c) {
  switch (c) {
    case U'¿': case U'¡': case U'(':
      return UnitKind::Open;
    case U'.': case U',': case U';': case U':': case U'?': case U'!': case U')':
      return UnitKind::Close;
    case U'-': case U'=':
      return UnitKind::Glue;
    default:
      return UnitKind::Text;
  }
}

inline bool is_space(char32_t c) { return c == U' ' || c == U'\t' || c == U'\r' || c == U'\n'; }

/// Splits a line into words, punctuation and morpheme boundaries.
inline std::vector<SurfaceUnit> split_surface(std::string_view line) {
  std::vector<SurfaceUnit> units;
  std::u32string cur;
  auto flush = [&] {
    if (!cur.empty()) units.push_back({UnitKind::Text, utf8::encode(cur)});
    cur.clear();
  };
  for (char32_t c : utf8::decode(line)) {
    if (is_space(c)) {
      flush();
      continue;
    }
    const UnitKind kind = classify_char(c);
    if (kind == UnitKind::Text) {
      cur.push_back(c);
    } else {
      flush();
      units.push_back({kind, utf8::encode(c)});
    }
  }
  flush();
  return units;
}

inline bool attaches(UnitKind left, UnitKind right) {
  return left == UnitKind::Open || left == UnitKind::Glue || right == UnitKind::Close ||
         right == UnitKind::Glue;
}

/// Inverse of split_surface on normalized text: units are separated by a
/// single space unless one of them attaches to the other.
inline std::string join_surface(const std::vector<SurfaceUnit>& units) {
  std::string out;
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (i > 0 && !attaches(units[i - 1].kind, units[i].kind)) out += ' ';
    out += units[i].text;
  }
  return out;
}

/// Corpus normalization: ñ is spelled `~n`, bracketed transcriber revisions
/// and double quotes are removed, and spacing around punctuation is made
/// canonical. Idempotent.
inline std::string normalize_line(std::string_view line) {
  std::u32string cleaned;
  int depth = 0;
  for (char32_t c : utf8::decode(line)) {
    if (c == U'[') {
      ++depth;
      continue;
    }
    if (c == U']') {
      if (depth > 0) --depth;
      continue;
    }
    if (depth > 0 || c == U'"') continue;
    if (c == U'ñ') {
      cleaned += U"~n";
    } else if (c == U'Ñ') {
      cleaned += U"~N";
    } else {
      cleaned.push_back(c);
    }
  }
  return join_surface(split_surface(utf8::encode(cleaned)));
}

}  // namespace ymtok
