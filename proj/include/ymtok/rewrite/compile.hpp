#pragma once

#include <set>
#include <string>
#include <vector>

#include "ymtok/core/utf8.hpp"
#include "ymtok/rewrite/regex.hpp"
#include "ymtok/wfst/ops.hpp"

namespace ymtok::rewrite {

using fst::TropicalWeight;
using fst::Wfst;

/// φ → ψ / λ _ ρ. φ, λ and ρ are patterns; ψ is a literal replacement.
/// A weight of 0 makes the rule obligatory. A positive weight makes it
/// optional: rewriting costs `weight`, leaving the match alone costs 0.
struct RewriteRule {
  std::string phi;
  std::string psi;
  std::string left;
  std::string right;
  double weight = 0;

  friend bool operator==(const RewriteRule&, const RewriteRule&) = default;
};

// Reserved private-use symbols used while compiling.
inline constexpr char32_t kMarkLeft1 = 0xE000;  // <1: rewrite here, λ must precede
inline constexpr char32_t kMarkLeft2 = 0xE001;  // <2: no rewrite, λ must not precede
inline constexpr char32_t kMarkRight = 0xE002;  // >: ρ follows

inline bool is_marker(char32_t c) { return c >= kMarkLeft1 && c <= kMarkRight; }

inline void require_no_markers(std::u32string_view s, std::string_view what) {
  for (char32_t c : s)
    if (is_marker(c))
      throw Error(Errc::MarkerCollision, std::string(what) + " contains a reserved marker symbol");
}

namespace internal {

// Type 1 marker: inserts one of `marks` after every prefix accepted by d.
// d must be complete over its alphabet.
inline Wfst marker_insert(const Dfa& d, const std::vector<char32_t>& marks) {
  Wfst m;
  const int n = d.num_states();
  for (int q = 0; q < n; ++q) m.add_state();
  std::vector<fst::StateId> from(n);
  for (int q = 0; q < n; ++q) {
    if (d.final[q]) {
      from[q] = m.add_state();
      for (char32_t mk : marks) m.add_arc(q, fst::kEpsilon, std::u32string(1, mk), TropicalWeight::one(), from[q]);
      m.set_final(from[q]);
    } else {
      from[q] = q;
      m.set_final(q);
    }
  }
  for (int q = 0; q < n; ++q)
    for (std::size_t i = 0; i < d.alphabet.size(); ++i)
      if (d.next[q][i] >= 0)
        m.add_arc(from[q], d.alphabet[i], std::u32string(1, d.alphabet[i]), TropicalWeight::one(), d.next[q][i]);
  m.set_start(d.start);
  return m;
}

// Types 2 and 3: `mark` is deleted where d's state is final (type 2) or
// non-final (type 3) and rejected elsewhere. Symbols in `pass` are copied
// without moving d.
inline Wfst marker_check(const Dfa& d, char32_t mark, bool at_final, const std::vector<char32_t>& pass) {
  Wfst m;
  const int n = d.num_states();
  for (int q = 0; q < n; ++q) {
    m.add_state();
    m.set_final(q);
  }
  for (int q = 0; q < n; ++q) {
    for (std::size_t i = 0; i < d.alphabet.size(); ++i)
      if (d.next[q][i] >= 0)
        m.add_arc(q, d.alphabet[i], std::u32string(1, d.alphabet[i]), TropicalWeight::one(), d.next[q][i]);
    if (static_cast<bool>(d.final[q]) == at_final) m.add_arc(q, mark, U"", TropicalWeight::one(), q);
    for (char32_t c : pass) m.add_arc(q, c, std::u32string(1, c), TropicalWeight::one(), q);
  }
  m.set_start(d.start);
  return m;
}

inline Pattern checked_pattern(const std::string& src, std::string_view what) {
  const auto u = utf8::decode(src);
  require_no_markers(u, what);
  return parse_pattern(u);
}

// Σ*·p (or p alone when anchored at `anchored`), as a DFA over sigma.
inline Dfa context_dfa(const Pattern& p, bool anchored, bool reversed, const std::set<char32_t>& sigma) {
  Nfa a = build_nfa(p.root, sigma);
  if (reversed) a = reverse_nfa(a);
  if (!anchored) a = prefix_any(a, sigma);
  Dfa d = determinize(a, sigma);
  d.complete();
  return d;
}

inline Wfst trim(const Wfst& m) { return fst::connect(m); }

}  // namespace internal

/// Symbols a rule set needs: those named in the rules plus those in `extra`.
inline std::set<char32_t> rule_alphabet(const std::vector<RewriteRule>& rules, std::u32string_view extra = {}) {
  std::set<char32_t> sigma(extra.begin(), extra.end());
  for (const auto& r : rules) {
    for (const auto* p : {&r.phi, &r.left, &r.right}) {
      const auto pat = internal::checked_pattern(*p, "rule pattern");
      collect_symbols(pat.root, sigma);
    }
    const auto psi = utf8::decode(r.psi);
    sigma.insert(psi.begin(), psi.end());
  }
  return sigma;
}

/// Compiles r into a transducer over `sigma` as r∘f∘R∘l1∘l2:
///   r  marks with > every position where ρ begins,
///   f  marks with <1 or <2 every position where φ> begins,
///   R  rewrites <1 φ > as <1 ψ and drops the other > markers,
///   l1 keeps only <1 preceded by λ, l2 only <2 not preceded by λ.
/// Matching is left to right; the left context is read on the rewritten
/// side, the right context on the original side.
inline Wfst compile_rule(const RewriteRule& rule, const std::set<char32_t>& sigma) {
  for (char32_t c : sigma)
    if (is_marker(c) || c == fst::kEpsilon)
      throw Error(Errc::MarkerCollision, "alphabet contains a reserved symbol");
  const auto phi = internal::checked_pattern(rule.phi, "phi");
  const auto lambda = internal::checked_pattern(rule.left, "left context");
  const auto rho = internal::checked_pattern(rule.right, "right context");
  const auto psi = utf8::decode(rule.psi);
  require_no_markers(psi, "psi");
  for (char32_t c : psi)
    if (!sigma.contains(c)) throw Error(Errc::BadPattern, "psi symbol outside the rule alphabet");
  if (phi.anchored_start || phi.anchored_end) throw Error(Errc::BadPattern, "anchors are only allowed in contexts");
  if (lambda.anchored_end || rho.anchored_start)
    throw Error(Errc::BadPattern, "left context may only anchor at ^, right context only at $");
  if (!is_bounded(phi.root)) throw Error(Errc::UnboundedPattern, "phi must use bounded repetition only");
  const bool insertion = phi.root.kind == Node::Kind::Epsilon;
  if (!insertion && is_nullable(phi.root))
    throw Error(Errc::BadPattern, "phi matches the empty string; write insertions with an empty phi");
  if (rule.weight < 0) throw Error(Errc::NegativeWeight, "rule weight must be non-negative");

  std::set<char32_t> sigma_r = sigma;
  sigma_r.insert(kMarkRight);

  // r
  const Dfa rho_dfa = internal::context_dfa(rho, rho.anchored_end, true, sigma);
  const Wfst r = fst::reverse(internal::marker_insert(rho_dfa, {kMarkRight}));

  // f: over Σ∪{>}, reversed strings of the form (Σ∪{>})* > rev(φ), where
  // > may also occur between the symbols of φ.
  Nfa phi_rev = reverse_nfa(build_nfa(phi.root, sigma));
  for (int s = 0; s < static_cast<int>(phi_rev.out.size()); ++s) phi_rev.add(s, kMarkRight, s);
  Dfa f_dfa = determinize(prefix_any(prefix_symbol(phi_rev, kMarkRight), sigma_r), sigma_r);
  if (!insertion) f_dfa = intersect_last_in(f_dfa, sigma);
  const Wfst f = fst::reverse(internal::marker_insert(f_dfa, {kMarkLeft1, kMarkLeft2}));

  // R
  const Dfa phi_dfa = determinize(build_nfa(phi.root, sigma), sigma);
  Wfst R;
  const fst::StateId out = R.add_state();
  R.set_start(out);
  R.set_final(out);
  for (char32_t c : sigma) R.add_arc(out, c, std::u32string(1, c), TropicalWeight::one(), out);
  R.add_arc(out, kMarkLeft2, std::u32string(1, kMarkLeft2), TropicalWeight::one(), out);
  R.add_arc(out, kMarkRight, U"", TropicalWeight::one(), out);
  const fst::StateId base = R.num_states();
  for (int q = 0; q < phi_dfa.num_states(); ++q) R.add_state();
  std::u32string head(1, kMarkLeft1);
  head += psi;
  R.add_arc(out, kMarkLeft1, head, TropicalWeight(rule.weight), base + phi_dfa.start);
  if (rule.weight > 0) R.add_arc(out, kMarkLeft1, std::u32string(1, kMarkLeft1), TropicalWeight::one(), out);
  for (int q = 0; q < phi_dfa.num_states(); ++q) {
    for (std::size_t i = 0; i < phi_dfa.alphabet.size(); ++i)
      if (phi_dfa.next[q][i] >= 0) R.add_arc(base + q, phi_dfa.alphabet[i], U"", TropicalWeight::one(), base + phi_dfa.next[q][i]);
    if (!insertion)
      for (char32_t mk : {kMarkLeft1, kMarkLeft2, kMarkRight}) R.add_arc(base + q, mk, U"", TropicalWeight::one(), base + q);
    if (phi_dfa.final[q]) R.add_arc(base + q, kMarkRight, U"", TropicalWeight::one(), out);
  }

  // l1, l2
  const Dfa lambda_dfa = internal::context_dfa(lambda, lambda.anchored_start, false, sigma);
  const Wfst l1 = internal::marker_check(lambda_dfa, kMarkLeft1, true, {kMarkLeft2});
  const Wfst l2 = internal::marker_check(lambda_dfa, kMarkLeft2, false, {});

  using internal::trim;
  Wfst t = trim(fst::compose(r, f));
  t = trim(fst::compose(t, R));
  t = trim(fst::compose(t, l1));
  t = trim(fst::compose(t, l2));
  t = fst::remove_epsilons(t);
  t.input_alphabet = std::set<fst::Label>(sigma.begin(), sigma.end());
  t.output_alphabet = t.input_alphabet;
  return t;
}

/// Identity transducer over sigma.
inline Wfst identity(const std::set<char32_t>& sigma) {
  Wfst m;
  m.set_start(m.add_state());
  m.set_final(0);
  for (char32_t c : sigma) m.add_arc(0, c, std::u32string(1, c), TropicalWeight::one(), 0);
  m.input_alphabet = std::set<fst::Label>(sigma.begin(), sigma.end());
  m.output_alphabet = m.input_alphabet;
  return m;
}

/// Identity acceptor for the whole strings over sigma that match `pattern`.
/// Anchors are implied.
inline Wfst pattern_acceptor(const std::string& pattern, const std::set<char32_t>& sigma) {
  const auto p = internal::checked_pattern(pattern, "filter");
  if (p.anchored_start || p.anchored_end) throw Error(Errc::BadPattern, "filters match whole words; drop the anchors");
  const Dfa d = determinize(build_nfa(p.root, sigma), sigma);
  Wfst m;
  for (int q = 0; q < d.num_states(); ++q) {
    m.add_state();
    if (d.final[q]) m.set_final(q);
  }
  m.set_start(d.start);
  for (int q = 0; q < d.num_states(); ++q)
    for (std::size_t i = 0; i < d.alphabet.size(); ++i)
      if (d.next[q][i] >= 0) m.add_arc(q, d.alphabet[i], std::u32string(1, d.alphabet[i]), TropicalWeight::one(), d.next[q][i]);
  m = fst::connect(m);
  m.input_alphabet = std::set<fst::Label>(sigma.begin(), sigma.end());
  m.output_alphabet = m.input_alphabet;
  return m;
}

/// Composes the compiled rules in order over sigma; the identity for none.
inline Wfst compile_rules(const std::vector<RewriteRule>& rules, const std::set<char32_t>& sigma) {
  if (rules.empty()) return identity(sigma);
  Wfst t = compile_rule(rules[0], sigma);
  for (std::size_t i = 1; i < rules.size(); ++i)
    t = fst::connect(fst::compose(t, compile_rule(rules[i], sigma)));
  return t;
}

/// The lattice of rewrites of s under the rules applied in sequence. The
/// alphabet is the rules' symbols plus those of s.
inline Wfst apply_rules(const std::vector<RewriteRule>& rules, std::string_view s) {
  const auto u = utf8::decode(s);
  require_no_markers(u, "input");
  const auto sigma = rule_alphabet(rules, u);
  Wfst lattice = fst::acceptor(u);
  lattice.output_alphabet = std::set<fst::Label>(u.begin(), u.end());
  for (const auto& r : rules) lattice = fst::connect(fst::compose(lattice, compile_rule(r, sigma)));
  return lattice;
}

}  // namespace ymtok::rewrite
