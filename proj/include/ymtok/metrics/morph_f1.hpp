#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ymtok/core/error.hpp"
#include "ymtok/tok/token.hpp"

namespace ymtok {

/// One inflected form: row `lexeme_id<TAB>root_id<TAB>cell<TAB>form`.
struct LexiconForm {
  std::string lexeme;
  std::string root;
  std::string cell;  // e.g. HAB or NEG+HAB; `+` separates properties
  std::string form;
};

struct InflectionLexicon {
  std::vector<LexiconForm> forms;

  std::size_t entries() const {
    std::set<std::string> ids;
    for (const auto& f : forms) ids.insert(f.lexeme);
    return ids.size();
  }

  static InflectionLexicon load(std::istream& in) {
    InflectionLexicon lex;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
      ++n;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      std::vector<std::string> f;
      std::size_t start = 0;
      for (std::size_t tab; (tab = line.find('\t', start)) != std::string::npos; start = tab + 1)
        f.push_back(line.substr(start, tab - start));
      f.push_back(line.substr(start));
      if (f.size() != 4 || f[3].empty() || f[2].empty())
        throw Error(Errc::BadFormat, "lexicon line " + std::to_string(n) + " needs lexeme, root, cell and form");
      lex.forms.push_back({f[0], f[1], f[2], f[3]});
    }
    return lex;
  }

  static InflectionLexicon load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::Io, "cannot open " + path);
    return load(in);
  }
};

enum class PairGroup { SameEntry, SameInflection, CrossGroup };

struct PairSample {
  std::size_t a, b;  // indices into InflectionLexicon::forms
  bool shares_morpheme;
  PairGroup group;
};

namespace metrics_detail {

inline std::set<std::string> cell_properties(const std::string& cell) {
  std::set<std::string> out;
  std::size_t start = 0;
  for (std::size_t p; (p = cell.find('+', start)) != std::string::npos; start = p + 1) out.insert(cell.substr(start, p - start));
  out.insert(cell.substr(start));
  return out;
}

inline bool cells_overlap(const std::string& x, const std::string& y) {
  const auto px = cell_properties(x), py = cell_properties(y);
  return std::any_of(px.begin(), px.end(), [&](const std::string& p) { return py.contains(p); });
}

}  // namespace metrics_detail

/// Group and gold label of a pair of forms. Forms of one entry share a
/// morpheme; so do forms in the same cell; otherwise they share one only
/// through a common root or overlapping cell properties.
inline PairSample classify_pair(const InflectionLexicon& lex, std::size_t a, std::size_t b) {
  const auto& x = lex.forms[a];
  const auto& y = lex.forms[b];
  if (x.lexeme == y.lexeme) return {a, b, true, PairGroup::SameEntry};
  if (x.cell == y.cell) return {a, b, true, PairGroup::SameInflection};
  const bool shared = (!x.root.empty() && x.root == y.root) || metrics_detail::cells_overlap(x.cell, y.cell);
  return {a, b, shared, PairGroup::CrossGroup};
}

/// Comparable tokens of a word: specials dropped, the `_` word mark
/// stripped.
inline std::set<std::string> comparable_tokens(const TokenStream& ts) {
  std::set<std::string> out;
  for (const auto& t : ts.tokens) {
    if (is_special(t.kind)) continue;
    std::string s = t.text;
    while (!s.empty() && s[0] == '_') s.erase(0, 1);
    if (!s.empty()) out.insert(std::move(s));
  }
  return out;
}

inline bool share_token(const std::set<std::string>& x, const std::set<std::string>& y) {
  return std::any_of(x.begin(), x.end(), [&](const std::string& t) { return y.contains(t); });
}

struct MorphF1Options {
  std::size_t same_entry = 650;
  std::size_t same_inflection = 650;
  std::size_t cross_group = 2000;
  std::uint64_t seed = 0;
  /// Score every pair instead of sampling.
  bool exhaustive = false;
};

struct MorphF1Result {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  double f1 = 0;
  std::vector<PairSample> pairs;
};

inline double f1_score(std::size_t tp, std::size_t fp, std::size_t fn) {
  const double den = 2.0 * tp + fp + fn;
  return den == 0 ? 0.0 : 2.0 * tp / den;
}

/// Pairs to score: all of them, or the requested number from each group
/// drawn without replacement.
inline std::vector<PairSample> draw_pairs(const InflectionLexicon& lex, const MorphF1Options& opt) {
  const std::size_t n = lex.forms.size();
  std::vector<PairSample> out;
  if (opt.exhaustive) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) out.push_back(classify_pair(lex, i, j));
    return out;
  }
  const std::size_t need[3] = {opt.same_entry, opt.same_inflection, opt.cross_group};
  std::mt19937_64 rng(opt.seed);
  std::vector<PairSample> groups[3];
  const std::uint64_t total = n < 2 ? 0 : static_cast<std::uint64_t>(n) * (n - 1) / 2;
  constexpr std::uint64_t kEnumerateLimit = 2'000'000;

  if (total <= kEnumerateLimit) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        auto p = classify_pair(lex, i, j);
        groups[static_cast<int>(p.group)].push_back(p);
      }
    for (int g = 0; g < 3; ++g) {
      if (groups[g].size() < need[g])
        throw Error(Errc::LexiconTooSmall, "group " + std::to_string(g) + " has " + std::to_string(groups[g].size()) +
                                               " pairs, " + std::to_string(need[g]) + " requested");
      std::shuffle(groups[g].begin(), groups[g].end(), rng);
      out.insert(out.end(), groups[g].begin(), groups[g].begin() + static_cast<std::ptrdiff_t>(need[g]));
    }
    return out;
  }

  // Large lexicons: same-entry pairs are enumerated per lexeme, the others
  // drawn by rejection over uniform pairs.
  std::map<std::string, std::vector<std::size_t>> by_lexeme;
  for (std::size_t i = 0; i < n; ++i) by_lexeme[lex.forms[i].lexeme].push_back(i);
  for (const auto& [id, rows] : by_lexeme)
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = i + 1; j < rows.size(); ++j) groups[0].push_back(classify_pair(lex, rows[i], rows[j]));
  if (groups[0].size() < need[0]) throw Error(Errc::LexiconTooSmall, "too few same-entry pairs");
  std::shuffle(groups[0].begin(), groups[0].end(), rng);
  groups[0].resize(need[0]);

  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  const std::uint64_t max_draws = 1000 * (need[1] + need[2]) + 100000;
  for (std::uint64_t d = 0; groups[1].size() < need[1] || groups[2].size() < need[2]; ++d) {
    if (d == max_draws) throw Error(Errc::LexiconTooSmall, "could not draw enough distinct pairs");
    std::size_t i = pick(rng), j = pick(rng);
    if (i == j) continue;
    if (i > j) std::swap(i, j);
    auto p = classify_pair(lex, i, j);
    const int g = static_cast<int>(p.group);
    if (g == 0 || groups[g].size() >= need[g] || !seen.insert({i, j}).second) continue;
    groups[g].push_back(p);
  }
  for (auto& g : groups) out.insert(out.end(), g.begin(), g.end());
  return out;
}

/// Morphological-consistency F1: a pair is predicted to share a morpheme
/// when the two forms share a token.
inline MorphF1Result morph_f1(const Tokenizer& tok, const InflectionLexicon& lex, const MorphF1Options& opt = {}) {
  if (lex.forms.size() < 2) throw Error(Errc::LexiconTooSmall, "need at least two forms");
  MorphF1Result r;
  r.pairs = draw_pairs(lex, opt);
  std::map<std::size_t, std::set<std::string>> cache;
  auto tokens = [&](std::size_t i) -> const std::set<std::string>& {
    auto it = cache.find(i);
    if (it == cache.end()) it = cache.emplace(i, comparable_tokens(tok.tokenize(lex.forms[i].form))).first;
    return it->second;
  };
  for (const auto& p : r.pairs) {
    const bool predicted = share_token(tokens(p.a), tokens(p.b));
    if (p.shares_morpheme) (predicted ? r.tp : r.fn)++;
    else (predicted ? r.fp : r.tn)++;
  }
  r.f1 = f1_score(r.tp, r.fp, r.fn);
  return r;
}

}  // namespace ymtok
