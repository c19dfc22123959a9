#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ymtok/core/error.hpp"
#include "ymtok/core/utf8.hpp"

namespace ymtok::rewrite {

// Patterns: literals, \-escapes, `.`, [classes] with ranges and ^,
// (groups), `|`, and the postfix operators ? * + {m} {m,} {m,n}.
// A leading `^` and a trailing `$` anchor the pattern; they are only
// meaningful in rule contexts.

struct Node {
  enum class Kind { Epsilon, Symbols, Concat, Alt, Repeat };
  Kind kind = Kind::Epsilon;
  std::set<char32_t> symbols;  // Symbols
  bool negated = false;        // Symbols: complement w.r.t. the alphabet
  std::vector<Node> kids;      // Concat, Alt, Repeat (one kid)
  int min = 0, max = 0;        // Repeat; max < 0 means unbounded
};

struct Pattern {
  Node root;
  bool anchored_start = false;
  bool anchored_end = false;
};

namespace internal {

class PatternParser {
 public:
  explicit PatternParser(std::u32string_view src) : s_(src) {}

  Pattern parse() {
    Pattern p;
    if (!s_.empty() && s_.front() == U'^') {
      p.anchored_start = true;
      ++i_;
    }
    std::size_t end = s_.size();
    if (end > i_ && s_[end - 1] == U'$' && !escaped_at(end - 1)) {
      p.anchored_end = true;
      s_ = s_.substr(0, end - 1);
    }
    p.root = alternation();
    if (i_ != s_.size()) fail("unexpected ')'");
    return p;
  }

 private:
  bool escaped_at(std::size_t pos) const {
    std::size_t n = 0;
    while (pos > n && s_[pos - n - 1] == U'\\') ++n;
    return n % 2 == 1;
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw Error(Errc::BadPattern, why + " in pattern '" + utf8::encode(s_) + "'");
  }

  bool at_end() const { return i_ == s_.size(); }
  char32_t peek() const { return s_[i_]; }

  Node alternation() {
    std::vector<Node> alts{concatenation()};
    while (!at_end() && peek() == U'|') {
      ++i_;
      alts.push_back(concatenation());
    }
    if (alts.size() == 1) return std::move(alts[0]);
    Node n;
    n.kind = Node::Kind::Alt;
    n.kids = std::move(alts);
    return n;
  }

  Node concatenation() {
    Node n;
    n.kind = Node::Kind::Concat;
    while (!at_end() && peek() != U'|' && peek() != U')') n.kids.push_back(repetition());
    if (n.kids.empty()) return Node{};
    if (n.kids.size() == 1) return std::move(n.kids[0]);
    return n;
  }

  Node repetition() {
    Node atom_node = atom();
    for (;;) {
      if (at_end()) break;
      int lo, hi;
      const char32_t c = peek();
      if (c == U'?') {
        lo = 0, hi = 1, ++i_;
      } else if (c == U'*') {
        lo = 0, hi = -1, ++i_;
      } else if (c == U'+') {
        lo = 1, hi = -1, ++i_;
      } else if (c == U'{' && bounds(lo, hi)) {
      } else {
        break;
      }
      Node r;
      r.kind = Node::Kind::Repeat;
      r.min = lo;
      r.max = hi;
      r.kids.push_back(std::move(atom_node));
      atom_node = std::move(r);
    }
    return atom_node;
  }

  // Parses {m}, {m,} or {m,n} at i_; leaves i_ alone when it is not one.
  bool bounds(int& lo, int& hi) {
    std::size_t j = i_ + 1;
    auto number = [&](int& v) {
      const std::size_t k = j;
      v = 0;
      while (j < s_.size() && s_[j] >= U'0' && s_[j] <= U'9') v = v * 10 + int(s_[j++] - U'0');
      return j > k;
    };
    if (!number(lo)) return false;
    hi = lo;
    if (j < s_.size() && s_[j] == U',') {
      ++j;
      if (!number(hi)) hi = -1;
    }
    if (j >= s_.size() || s_[j] != U'}') return false;
    if (hi >= 0 && hi < lo) fail("bad repetition bounds");
    i_ = j + 1;
    return true;
  }

  Node atom() {
    const char32_t c = s_[i_++];
    Node n;
    n.kind = Node::Kind::Symbols;
    switch (c) {
      case U'(': {
        Node inner = alternation();
        if (at_end() || peek() != U')') fail("unbalanced '('");
        ++i_;
        return inner;
      }
      case U'[':
        return klass();
      case U'.':
        n.negated = true;
        return n;
      case U'\\':
        if (at_end()) fail("dangling escape");
        n.symbols.insert(s_[i_++]);
        return n;
      case U'?':
      case U'*':
      case U'+':
        fail("nothing to repeat");
      case U'^':
      case U'$':
        fail("anchor in the middle of a pattern");
      default:
        n.symbols.insert(c);
        return n;
    }
  }

  Node klass() {
    Node n;
    n.kind = Node::Kind::Symbols;
    if (!at_end() && peek() == U'^') {
      n.negated = true;
      ++i_;
    }
    bool first = true;
    for (;;) {
      if (at_end()) fail("unbalanced '['");
      char32_t c = s_[i_++];
      if (c == U']' && !first) break;
      first = false;
      if (c == U'\\') {
        if (at_end()) fail("dangling escape");
        c = s_[i_++];
      }
      if (i_ + 1 < s_.size() && peek() == U'-' && s_[i_ + 1] != U']') {
        char32_t hi = s_[i_ + 1];
        i_ += 2;
        if (hi == U'\\') {
          if (at_end()) fail("dangling escape");
          hi = s_[i_++];
        }
        if (hi < c) fail("bad class range");
        for (char32_t x = c; x <= hi; ++x) n.symbols.insert(x);
      } else {
        n.symbols.insert(c);
      }
    }
    return n;
  }

  std::u32string_view s_;
  std::size_t i_ = 0;
};

}  // namespace internal

inline Pattern parse_pattern(std::u32string_view src) { return internal::PatternParser(src).parse(); }

inline bool is_bounded(const Node& n) {
  if (n.kind == Node::Kind::Repeat && n.max < 0) return false;
  return std::all_of(n.kids.begin(), n.kids.end(), [](const Node& k) { return is_bounded(k); });
}

inline bool is_nullable(const Node& n) {
  switch (n.kind) {
    case Node::Kind::Epsilon: return true;
    case Node::Kind::Symbols: return false;
    case Node::Kind::Concat:
      return std::all_of(n.kids.begin(), n.kids.end(), [](const Node& k) { return is_nullable(k); });
    case Node::Kind::Alt:
      return std::any_of(n.kids.begin(), n.kids.end(), [](const Node& k) { return is_nullable(k); });
    case Node::Kind::Repeat: return n.min == 0 || is_nullable(n.kids[0]);
  }
  return false;
}

/// The single string a pattern matches, when it is a plain literal.
inline std::optional<std::u32string> literal_of(const Node& n) {
  switch (n.kind) {
    case Node::Kind::Epsilon: return std::u32string();
    case Node::Kind::Symbols:
      if (n.negated || n.symbols.size() != 1) return std::nullopt;
      return std::u32string(1, *n.symbols.begin());
    case Node::Kind::Concat: {
      std::u32string out;
      for (const auto& k : n.kids) {
        auto part = literal_of(k);
        if (!part) return std::nullopt;
        out += *part;
      }
      return out;
    }
    default: return std::nullopt;
  }
}

/// Symbols a pattern names explicitly (not through `.` or a negated class).
inline void collect_symbols(const Node& n, std::set<char32_t>& out) {
  if (n.kind == Node::Kind::Symbols && !n.negated) out.insert(n.symbols.begin(), n.symbols.end());
  for (const auto& k : n.kids) collect_symbols(k, out);
}

// Epsilon-NFA with a single start and a single accepting state. Symbol 0
// is epsilon.
struct Nfa {
  struct Edge {
    char32_t sym;
    int to;
  };
  std::vector<std::vector<Edge>> out;
  int start = 0, accept = 0;

  int add_state() {
    out.emplace_back();
    return static_cast<int>(out.size()) - 1;
  }
  void add(int from, char32_t sym, int to) { out[from].push_back({sym, to}); }
};

namespace internal {

inline std::pair<int, int> thompson(Nfa& a, const Node& n, const std::set<char32_t>& alphabet) {
  const int s = a.add_state();
  switch (n.kind) {
    case Node::Kind::Epsilon: {
      const int t = a.add_state();
      a.add(s, 0, t);
      return {s, t};
    }
    case Node::Kind::Symbols: {
      const int t = a.add_state();
      if (n.negated) {
        for (char32_t c : alphabet)
          if (!n.symbols.contains(c)) a.add(s, c, t);
      } else {
        for (char32_t c : n.symbols) a.add(s, c, t);
      }
      return {s, t};
    }
    case Node::Kind::Concat: {
      int cur = s;
      for (const auto& k : n.kids) {
        auto [ks, kt] = thompson(a, k, alphabet);
        a.add(cur, 0, ks);
        cur = kt;
      }
      return {s, cur};
    }
    case Node::Kind::Alt: {
      const int t = a.add_state();
      for (const auto& k : n.kids) {
        auto [ks, kt] = thompson(a, k, alphabet);
        a.add(s, 0, ks);
        a.add(kt, 0, t);
      }
      return {s, t};
    }
    case Node::Kind::Repeat: {
      int cur = s;
      for (int i = 0; i < n.min; ++i) {
        auto [ks, kt] = thompson(a, n.kids[0], alphabet);
        a.add(cur, 0, ks);
        cur = kt;
      }
      const int t = a.add_state();
      a.add(cur, 0, t);
      if (n.max < 0) {
        auto [ks, kt] = thompson(a, n.kids[0], alphabet);
        a.add(cur, 0, ks);
        a.add(kt, 0, cur);
      } else {
        for (int i = n.min; i < n.max; ++i) {
          auto [ks, kt] = thompson(a, n.kids[0], alphabet);
          a.add(cur, 0, ks);
          a.add(kt, 0, t);
          cur = kt;
        }
      }
      return {s, t};
    }
  }
  return {s, s};
}

}  // namespace internal

inline Nfa build_nfa(const Node& n, const std::set<char32_t>& alphabet) {
  Nfa a;
  auto [s, t] = internal::thompson(a, n, alphabet);
  a.start = s;
  a.accept = t;
  return a;
}

inline Nfa reverse_nfa(const Nfa& a) {
  Nfa r;
  r.out.resize(a.out.size());
  for (int s = 0; s < static_cast<int>(a.out.size()); ++s)
    for (const auto& e : a.out[s]) r.add(e.to, e.sym, s);
  r.start = a.accept;
  r.accept = a.start;
  return r;
}

/// Σ* · a, with Σ the given symbols.
inline Nfa prefix_any(const Nfa& a, const std::set<char32_t>& symbols) {
  Nfa r = a;
  const int s = r.add_state();
  for (char32_t c : symbols) r.add(s, c, s);
  r.add(s, 0, a.start);
  r.start = s;
  return r;
}

/// The single symbol c followed by a.
inline Nfa prefix_symbol(const Nfa& a, char32_t c) {
  Nfa r = a;
  const int s = r.add_state();
  r.add(s, c, a.start);
  r.start = s;
  return r;
}

/// Deterministic automaton over an explicit sorted alphabet. Missing
/// transitions are -1.
struct Dfa {
  std::vector<char32_t> alphabet;
  std::vector<std::vector<int>> next;
  std::vector<char> final;
  int start = 0;

  int num_states() const { return static_cast<int>(next.size()); }
  int index_of(char32_t c) const {
    auto it = std::lower_bound(alphabet.begin(), alphabet.end(), c);
    return it != alphabet.end() && *it == c ? static_cast<int>(it - alphabet.begin()) : -1;
  }
  int step(int q, char32_t c) const {
    const int i = index_of(c);
    return i < 0 ? -1 : next[q][i];
  }
  /// Routes missing transitions to a non-final sink.
  void complete() {
    int sink = -1;
    for (int q = 0; q < num_states(); ++q)
      for (std::size_t i = 0; i < alphabet.size(); ++i)
        if (next[q][i] < 0) {
          if (sink < 0) {
            sink = num_states();
            next.emplace_back(alphabet.size(), sink);
            final.push_back(0);
          }
          next[q][i] = sink;
        }
  }
  bool accepts(std::u32string_view s) const {
    int q = start;
    for (char32_t c : s)
      if ((q = step(q, c)) < 0) return false;
    return final[q];
  }
};

/// Subset construction. Symbols outside `alphabet` are ignored.
inline Dfa determinize(const Nfa& a, const std::set<char32_t>& alphabet) {
  Dfa d;
  d.alphabet.assign(alphabet.begin(), alphabet.end());
  auto closure = [&](std::vector<int> set) {
    std::vector<int> stack = set;
    std::set<int> seen(set.begin(), set.end());
    while (!stack.empty()) {
      const int s = stack.back();
      stack.pop_back();
      for (const auto& e : a.out[s])
        if (e.sym == 0 && seen.insert(e.to).second) stack.push_back(e.to);
    }
    return std::vector<int>(seen.begin(), seen.end());
  };
  std::map<std::vector<int>, int> ids;
  std::vector<std::vector<int>> subsets;
  auto get = [&](std::vector<int> set) {
    auto [it, inserted] = ids.try_emplace(set, static_cast<int>(subsets.size()));
    if (inserted) {
      subsets.push_back(std::move(set));
      d.next.emplace_back(d.alphabet.size(), -1);
      const auto& sub = subsets.back();
      d.final.push_back(std::binary_search(sub.begin(), sub.end(), a.accept));
    }
    return it->second;
  };
  d.start = get(closure({a.start}));
  for (std::size_t q = 0; q < subsets.size(); ++q) {
    std::map<char32_t, std::set<int>> moves;
    for (int s : subsets[q])
      for (const auto& e : a.out[s])
        if (e.sym != 0 && alphabet.contains(e.sym)) moves[e.sym].insert(e.to);
    for (auto& [c, targets] : moves) {
      const int t = get(closure(std::vector<int>(targets.begin(), targets.end())));
      d.next[q][d.index_of(c)] = t;
    }
  }
  return d;
}

/// Restricts d to strings whose last symbol is in `last`.
inline Dfa intersect_last_in(const Dfa& d, const std::set<char32_t>& last) {
  Dfa r;
  r.alphabet = d.alphabet;
  std::map<std::pair<int, bool>, int> ids;
  std::vector<std::pair<int, bool>> todo;
  auto get = [&](int q, bool flag) {
    auto [it, inserted] = ids.try_emplace({q, flag}, static_cast<int>(r.next.size()));
    if (inserted) {
      r.next.emplace_back(r.alphabet.size(), -1);
      r.final.push_back(d.final[q] && flag);
      todo.push_back({q, flag});
    }
    return it->second;
  };
  r.start = get(d.start, false);
  for (std::size_t k = 0; k < todo.size(); ++k) {
    const auto [q, flag] = todo[k];
    const int id = static_cast<int>(k);
    for (std::size_t i = 0; i < r.alphabet.size(); ++i) {
      const int t = d.next[q][i];
      if (t >= 0) r.next[id][i] = get(t, last.contains(r.alphabet[i]));
    }
  }
  return r;
}

}  // namespace ymtok::rewrite
