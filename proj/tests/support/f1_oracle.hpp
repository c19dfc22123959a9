#pragma once

#include <set>
#include <string>

#include "ymtok/metrics/morph_f1.hpp"

namespace ymtok::testing {

struct Counts {
  std::size_t tp = 0, fp = 0, fn = 0;
};

// Brute force over every pair of forms, written without the library's
// pair classification.
inline Counts f1_oracle(const Tokenizer& tok, const InflectionLexicon& lex) {
  auto props = [](const std::string& cell) {
    std::set<std::string> s;
    std::string cur;
    for (char c : cell + "+") {
      if (c == '+') {
        s.insert(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    return s;
  };
  auto toks = [&](const std::string& form) {
    std::set<std::string> s;
    for (const auto& t : tok.tokenize(form).tokens) {
      if (t.kind == TokenKind::Space || t.kind == TokenKind::Boundary) continue;
      const auto p = t.text.find_first_not_of('_');
      if (p != std::string::npos) s.insert(t.text.substr(p));
    }
    return s;
  };
  Counts c;
  const auto& f = lex.forms;
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t j = i + 1; j < f.size(); ++j) {
      bool gold = f[i].lexeme == f[j].lexeme || f[i].cell == f[j].cell || f[i].root == f[j].root;
      for (const auto& p : props(f[i].cell)) gold = gold || props(f[j].cell).count(p);
      bool shared = false;
      const auto ti = toks(f[i].form), tj = toks(f[j].form);
      for (const auto& t : ti) shared = shared || tj.count(t);
      if (gold && shared) ++c.tp;
      if (!gold && shared) ++c.fp;
      if (gold && !shared) ++c.fn;
    }
  }
  return c;
}

inline double oracle_f1(const Counts& c) {
  return c.tp == 0 && c.fp == 0 && c.fn == 0 ? 0.0 : 2.0 * c.tp / (2.0 * c.tp + c.fp + c.fn);
}

}  // namespace ymtok::testing
