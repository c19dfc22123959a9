#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ymtok/core/error.hpp"

namespace ymtok {

namespace g3 {

struct Literal {
  std::string text;
  friend bool operator==(const Literal&, const Literal&) = default;
};

// `{A>B}` or a chain `{A>B>C}`; steps.front() is the morphemic side and
// steps.back() the surface side.
struct Rewrite {
  std::vector<std::string> steps;

  const std::string& left() const { return steps.front(); }
  const std::string& right() const { return steps.back(); }

  friend bool operator==(const Rewrite&, const Rewrite&) = default;
};

using Span = std::variant<Literal, Rewrite>;

}  // namespace g3

struct G3String {
  std::vector<g3::Span> spans;
  friend bool operator==(const G3String&, const G3String&) = default;
};

inline G3String g3_parse(std::string_view text) {
  G3String g;
  std::string lit;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '}') throw Error(Errc::UnbalancedBraces, "unmatched '}' in '" + std::string(text) + "'");
    if (c != '{') {
      lit.push_back(c);
      ++i;
      continue;
    }
    const auto close = text.find('}', i + 1);
    if (close == std::string_view::npos)
      throw Error(Errc::UnbalancedBraces, "unmatched '{' in '" + std::string(text) + "'");
    const auto body = text.substr(i + 1, close - i - 1);
    if (body.find('{') != std::string_view::npos)
      throw Error(Errc::UnbalancedBraces, "nested '{' in '" + std::string(text) + "'");

    g3::Rewrite rw;
    std::size_t start = 0;
    while (true) {
      const auto arrow = body.find('>', start);
      rw.steps.emplace_back(body.substr(start, arrow == std::string_view::npos ? body.npos : arrow - start));
      if (arrow == std::string_view::npos) break;
      start = arrow + 1;
    }
    if (rw.steps.size() < 2)
      throw Error(Errc::BadFormat, "rewrite without '>' in '" + std::string(text) + "'");
    if (rw.left().empty() && rw.right().empty())
      throw Error(Errc::EmptyRewrite, "empty rewrite in '" + std::string(text) + "'");

    if (!lit.empty()) g.spans.emplace_back(g3::Literal{std::move(lit)});
    lit.clear();
    g.spans.emplace_back(std::move(rw));
    i = close + 1;
  }
  if (!lit.empty()) g.spans.emplace_back(g3::Literal{std::move(lit)});
  return g;
}

inline std::string g3_render(const G3String& g) {
  std::string out;
  for (const auto& span : g.spans) {
    if (const auto* lit = std::get_if<g3::Literal>(&span)) {
      out += lit->text;
      continue;
    }
    const auto& rw = std::get<g3::Rewrite>(span);
    out += '{';
    for (std::size_t k = 0; k < rw.steps.size(); ++k) {
      if (k) out += '>';
      out += rw.steps[k];
    }
    out += '}';
  }
  return out;
}

inline std::string g3_morphemic(const G3String& g) {
  std::string out;
  for (const auto& span : g.spans) {
    if (const auto* lit = std::get_if<g3::Literal>(&span))
      out += lit->text;
    else
      out += std::get<g3::Rewrite>(span).left();
  }
  return out;
}

inline std::string g3_surface(const G3String& g) {
  std::string out;
  for (const auto& span : g.spans) {
    if (const auto* lit = std::get_if<g3::Literal>(&span))
      out += lit->text;
    else
      out += std::get<g3::Rewrite>(span).right();
  }
  return out;
}

inline bool g3_has_rewrites(std::string_view text) { return text.find('{') != text.npos; }

/// Renders a single-mora tone change as the shortest G3 span: an insertion
/// when the surface extends the lemma tone on the left (`{>1}3`) or right
/// (`1{>4}`), a deletion when it shortens it (`{1>}4`), else an overwrite.
inline std::string g3_tone_change(std::string_view lemma, std::string_view surface) {
  const std::string l(lemma), s(surface);
  if (l == s) return l;
  if (l.empty()) return "{>" + s + "}";
  if (s.empty()) return "{" + l + ">}";
  if (s.size() > l.size() && s.ends_with(l))
    return "{>" + s.substr(0, s.size() - l.size()) + "}" + l;
  if (s.size() > l.size() && s.starts_with(l))
    return l + "{>" + s.substr(l.size()) + "}";
  if (l.size() > s.size() && l.ends_with(s))
    return "{" + l.substr(0, l.size() - s.size()) + ">}" + s;
  if (l.size() > s.size() && l.starts_with(s))
    return s + "{" + l.substr(s.size()) + ">}";
  return "{" + l + ">" + s + "}";
}

}  // namespace ymtok
