#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <memory>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include "ymtok/core/g3.hpp"
#include "ymtok/core/surface.hpp"
#include "ymtok/core/word.hpp"
#include "ymtok/rewrite/compile.hpp"
#include "ymtok/scorer/score_request.hpp"
#include "ymtok/tok/morph_rules.hpp"
#include "ymtok/tok/segmel.hpp"
#include "ymtok/tok/token.hpp"
#include "ymtok/wfst/ops.hpp"
#include "ymtok/wfst/search.hpp"

namespace ymtok {

inline constexpr std::size_t kDefaultBeam = 8;

namespace procseq {

using fst::TropicalWeight;

// Boundary symbols between T_pre and T_post: a space, and the edge of a
// punctuation mark (dropped again on output).
inline constexpr char32_t kSpaceMark = 0xE010;
inline constexpr char32_t kJoinMark = 0xE011;

inline std::set<char32_t> native_alphabet() {
  std::set<char32_t> s;
  for (char32_t c = U'a'; c <= U'z'; ++c) s.insert(c);
  for (char32_t c : std::u32string_view(U"'~1234")) s.insert(c);
  return s;
}

inline std::set<char32_t> g3_alphabet() {
  auto s = native_alphabet();
  for (char32_t c : std::u32string_view(U"{}>")) s.insert(c);
  return s;
}

// A word read as itself at the given cost.
inline fst::Wfst identity_word(const std::set<char32_t>& sigma, double cost) {
  fst::Wfst m;
  m.set_start(m.add_state());
  const auto in = m.add_state();
  m.set_final(in, TropicalWeight(cost));
  for (char32_t c : sigma) {
    m.add_arc(0, c, std::u32string(1, c), TropicalWeight::one(), in);
    m.add_arc(in, c, std::u32string(1, c), TropicalWeight::one(), in);
  }
  return m;
}

inline fst::Wfst compile_process(const MorphProcess& p) {
  const auto sigma = g3_alphabet();
  fst::Wfst filter = rewrite::pattern_acceptor(p.filter, native_alphabet());
  fst::Wfst m = fst::connect(fst::compose(filter, rewrite::compile_rules(p.rules, sigma)));
  for (fst::StateId s = 0; s < m.num_states(); ++s)
    if (m.is_final(s)) m.set_final(s, times(m.final_weight(s), TropicalWeight(p.weight)));
  m.input_alphabet.reset();
  m.output_alphabet.reset();
  return m;
}

inline bool is_process_token(std::string_view t) {
  static const std::regex re("[1-4]{1,3}>[1-4]{1,3}");
  return std::regex_match(t.begin(), t.end(), re);
}

}  // namespace procseq

/// Maps one surface word to its G3 analyses: the word itself at the
/// identity cost, plus every process whose filter accepts it.
inline fst::Wfst build_segmentation_fst(const MorphRuleSet& rules) {
  std::vector<fst::Wfst> parts{procseq::identity_word(procseq::native_alphabet(), rules.identity_weight)};
  for (const auto& p : rules.processes) parts.push_back(procseq::compile_process(p));
  return fst::unite(parts);
}

struct Candidate {
  std::string g3;
  double cost;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

/// All distinct outputs of `m` on `word`, cheapest first. `m` must not loop
/// without reading input.
inline std::vector<Candidate> lattice_candidates(const fst::Wfst& m, std::string_view word) {
  const auto x = utf8::decode(word);
  const fst::Wfst lat = fst::connect(fst::compose(fst::acceptor(x), m));
  std::map<std::u32string, double> best;
  if (!lat.empty()) {
    struct Item {
      fst::StateId s;
      std::u32string out;
      double cost;
      std::size_t depth;
    };
    std::vector<Item> stack{{lat.start(), {}, 0.0, 0}};
    const std::size_t max_depth = 4 * x.size() + 16;
    while (!stack.empty()) {
      Item it = std::move(stack.back());
      stack.pop_back();
      if (lat.is_final(it.s)) {
        const double c = it.cost + lat.final_weight(it.s).value;
        auto [pos, fresh] = best.try_emplace(it.out, c);
        if (!fresh) pos->second = std::min(pos->second, c);
      }
      if (it.depth >= max_depth) continue;
      for (const auto& a : lat.arcs(it.s)) stack.push_back({a.next, it.out + a.olabel, it.cost + a.weight.value, it.depth + 1});
    }
  }
  std::vector<Candidate> out;
  for (const auto& [o, c] : best) out.push_back({utf8::encode(o), c});
  std::stable_sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) { return a.cost < b.cost; });
  return out;
}

/// Proposes G3 segmentations for whole utterances and picks one with a
/// beam search guided by a scorer.
class Segmenter {
 public:
  explicit Segmenter(MorphRuleSet rules = default_morph_rules()) : rules_(std::move(rules)) {
    std::vector<fst::Wfst> parts;
    for (const auto& p : rules_.processes) parts.push_back(procseq::compile_process(p));
    processes_ = fst::unite(parts);
    word_fst_ = build_segmentation_fst(rules_);
  }

  const MorphRuleSet& rules() const { return rules_; }
  const fst::Wfst& word_fst() const { return word_fst_; }

  /// Lattice candidates for one word. Words outside the native alphabet
  /// (loans, names) only have the identity reading.
  std::vector<Candidate> candidates(std::string_view word) const {
    auto out = lattice_candidates(word_fst_, word);
    if (out.empty() && !word.empty()) out.push_back({std::string(word), rules_.identity_weight});
    return out;
  }

  /// T_full for x: A ∘ T_pre ∘ T_seg* ∘ T_post without input epsilons.
  fst::Wfst full_machine(std::u32string_view x) const {
    using fst::TropicalWeight;
    using fst::Wfst;
    std::set<char32_t> word_chars, marks;
    for (char32_t c : x) {
      if (c == procseq::kSpaceMark || c == procseq::kJoinMark)
        throw Error(Errc::BadFormat, "input holds a reserved boundary symbol");
      if (is_space(c)) continue;
      (classify_char(c) == UnitKind::Text ? word_chars : marks).insert(c);
    }
    const std::u32string space(1, procseq::kSpaceMark), join(1, procseq::kJoinMark);

    Wfst pre;
    pre.set_start(pre.add_state());
    pre.set_final(pre.add_state());
    pre.add_arc(0, fst::kEpsilon, join, TropicalWeight::one(), 1);
    for (char32_t c : std::set<char32_t>(x.begin(), x.end())) {
      std::u32string out(1, c);
      if (is_space(c)) out = space;
      else if (marks.contains(c)) out = join + out + join;
      pre.add_arc(0, c, out, TropicalWeight::one(), 0);
    }

    Wfst word = fst::unite(std::vector<Wfst>{processes_, procseq::identity_word(word_chars, rules_.identity_weight)});
    Wfst boundary;
    boundary.set_start(boundary.add_state());
    boundary.set_final(boundary.add_state());
    for (char32_t b : {procseq::kSpaceMark, procseq::kJoinMark}) boundary.add_arc(0, b, std::u32string(1, b), TropicalWeight::one(), 1);
    std::vector<Wfst> items{fst::concat(word, boundary)};
    for (char32_t c : marks) items.push_back(fst::acceptor(std::u32string(1, c)));
    items.push_back(boundary);
    const Wfst seg = fst::star_closure(fst::unite(items));

    Wfst post;
    post.set_start(post.add_state());
    post.set_final(0);
    std::set<char32_t> outs = procseq::g3_alphabet();
    outs.insert(word_chars.begin(), word_chars.end());
    outs.insert(marks.begin(), marks.end());
    for (char32_t c : outs) post.add_arc(0, c, std::u32string(1, c), TropicalWeight::one(), 0);
    post.add_arc(0, procseq::kSpaceMark, U" ", TropicalWeight::one(), 0);
    post.add_arc(0, procseq::kJoinMark, U"", TropicalWeight::one(), 0);

    Wfst t = fst::connect(fst::compose(fst::acceptor(x), pre));
    t = fst::connect(fst::compose(t, seg));
    t = fst::connect(fst::compose(t, post));
    return fst::remove_epsilons(t);
  }

  /// The G3 reading of x chosen by beam search. Input that already carries
  /// G3 rewrites is returned unchanged.
  std::string segment(std::string_view x, std::size_t k = kDefaultBeam, const ScoreFn& scorer = {}) const {
    if (g3_has_rewrites(x)) return std::string(x);
    const auto u = utf8::decode(x);
    if (u.empty()) return {};
    const fst::Wfst t = full_machine(u);
    if (t.empty()) throw Error(Errc::NoSurvivingPath, "no segmentation for '" + std::string(x) + "'");
    return utf8::encode(fst::beam_search(t, u, k, scorer).output);
  }

 private:
  MorphRuleSet rules_;
  fst::Wfst processes_;
  fst::Wfst word_fst_;
};

namespace procseq {

inline bool is_tonal(const g3::Rewrite& rw) {
  return std::all_of(rw.steps.begin(), rw.steps.end(), [](const std::string& s) {
    return std::all_of(s.begin(), s.end(), is_tone_digit);
  });
}

/// The lemma spelling of a G3 word: tonal rewrites give way to their
/// original tone, segmental ones stay as written.
inline std::string lemma_of(const G3String& g) {
  std::string out;
  for (const auto& span : g.spans) {
    if (const auto* lit = std::get_if<g3::Literal>(&span)) {
      out += lit->text;
    } else {
      const auto& rw = std::get<g3::Rewrite>(span);
      out += is_tonal(rw) ? rw.left() : g3_render(G3String{{span}});
    }
  }
  return out;
}

inline std::string surface_of_token(const std::string& tok) {
  return g3_has_rewrites(tok) ? g3_surface(g3_parse(tok)) : tok;
}

}  // namespace procseq

/// Lemma token followed by one `from>to` token per mora.
inline std::vector<Token> linearize_word(std::string_view g3_word) {
  const G3String g = g3_parse(g3_word);
  const std::string lemma = procseq::lemma_of(g);
  const Word base = parse_word(g3_surface(g3_parse(lemma)));
  const Word surface = parse_word(g3_surface(g));
  if (base.kind == WordKind::Foreign && surface.kind == WordKind::Foreign && base.trailing == surface.trailing)
    return {{g3_has_rewrites(lemma) ? TokenKind::Lemma : TokenKind::Foreign, lemma}};
  bool same = base.kind == surface.kind && base.morae.size() == surface.morae.size() && base.trailing == surface.trailing;
  for (std::size_t i = 0; same && i < base.morae.size(); ++i) same = base.morae[i].segment == surface.morae[i].segment;
  if (!same) throw Error(Errc::NonTonalRewrite, "'" + std::string(g3_word) + "' changes more than tones");
  std::vector<Token> out{{TokenKind::Lemma, lemma}};
  for (std::size_t i = 0; i < base.morae.size(); ++i)
    out.push_back({TokenKind::Process, base.morae[i].tone.str() + ">" + surface.morae[i].tone.str()});
  return out;
}

inline TokenStream linearize(std::string_view g3_utterance) {
  TokenStream ts;
  for (const auto& unit : split_surface(g3_utterance)) {
    if (unit.kind != UnitKind::Text) {
      ts.tokens.push_back({TokenKind::Boundary, unit.text});
      continue;
    }
    for (auto& t : linearize_word(unit.text)) ts.tokens.push_back(std::move(t));
  }
  return ts;
}

/// Surface text of a linearized stream. Each process sets the tone of the
/// matching mora of the lemma before it. Missing processes leave the tone
/// alone; surplus processes and processes without a lemma are dropped.
inline std::string delinearize(const std::vector<std::string>& tokens, RepairStats* stats = nullptr) {
  RepairStats local;
  RepairStats& rs = stats ? *stats : local;
  std::vector<SurfaceUnit> units;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string& tok = tokens[i];
    if (procseq::is_process_token(tok)) {
      ++rs.orphan_processes;
      continue;
    }
    if (segmel::is_boundary_text(tok)) {
      units.push_back({classify_char(utf8::decode(tok)[0]), tok});
      continue;
    }
    std::string base;
    try {
      base = procseq::surface_of_token(tok);
    } catch (const Error&) {
      base = tok;
    }
    if (base.empty()) continue;
    Word w = parse_word(base);
    std::size_t next = 0;
    while (i + 1 < tokens.size() && procseq::is_process_token(tokens[i + 1])) {
      const std::string& p = tokens[++i];
      if (next >= w.morae.size()) {
        ++rs.surplus_processes;
        continue;
      }
      w.morae[next++].tone = Tone(p.substr(p.find('>') + 1));
    }
    rs.missing_processes += w.morae.size() - std::min(next, w.morae.size());
    units.push_back({UnitKind::Text, render_word(w)});
  }
  return join_surface(units);
}

/// Surface form → licensed G3 segmentations.
class Lexicon {
 public:
  void add(const std::string& surface, const std::string& g3) {
    auto& v = entries_[surface];
    if (std::find(v.begin(), v.end(), g3) == v.end()) v.push_back(g3);
  }

  const std::vector<std::string>* find(const std::string& surface) const {
    auto it = entries_.find(surface);
    return it == entries_.end() ? nullptr : &it->second;
  }

  const std::map<std::string, std::vector<std::string>>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  /// TSV rows `surface<TAB>g3`; `#` starts a comment line.
  static Lexicon load(std::istream& in) {
    Lexicon lex;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
      ++n;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      const auto tab = line.find('\t');
      if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos)
        throw Error(Errc::BadFormat, "lexicon line " + std::to_string(n) + " needs two tab-separated fields");
      lex.add(line.substr(0, tab), line.substr(tab + 1));
    }
    return lex;
  }

  static Lexicon load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::Io, "cannot open " + path);
    return load(in);
  }

 private:
  std::map<std::string, std::vector<std::string>> entries_;
};

/// Replaces words with a single licensed segmentation by it and marks
/// words with several with a leading `$`.
inline std::string transform_line(std::string_view line, const Lexicon& lex) {
  auto units = split_surface(line);
  for (auto& u : units) {
    if (u.kind != UnitKind::Text) continue;
    const auto* c = lex.find(u.text);
    if (!c) continue;
    u.text = c->size() == 1 ? c->front() : "$" + u.text;
  }
  return join_surface(units);
}

inline std::vector<std::string> transform_corpus(const std::vector<std::string>& corpus, const Lexicon& lex) {
  std::vector<std::string> out;
  out.reserve(corpus.size());
  for (const auto& line : corpus) out.push_back(transform_line(line, lex));
  return out;
}

class ProcSeqTokenizer final : public Tokenizer {
 public:
  explicit ProcSeqTokenizer(std::shared_ptr<const Segmenter> seg, ScoreFn scorer = {}, std::size_t beam = kDefaultBeam)
      : seg_(std::move(seg)), scorer_(std::move(scorer)), beam_(beam) {}

  std::string name() const override { return "procseq"; }

  TokenStream tokenize(std::string_view line) const override { return linearize(seg_->segment(line, beam_, scorer_)); }

  std::string detokenize(const std::vector<std::string>& tokens, RepairStats* stats = nullptr) const override {
    return delinearize(tokens, stats);
  }

 private:
  std::shared_ptr<const Segmenter> seg_;
  ScoreFn scorer_;
  std::size_t beam_;
};

}  // namespace ymtok
