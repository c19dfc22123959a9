#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <queue>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ymtok/wfst/wfst.hpp"

namespace ymtok::fst {

/// Linear acceptor for x with unit weights.
template <PathSemiring W = TropicalWeight>
BasicWfst<W> acceptor(std::u32string_view x) {
  BasicWfst<W> m;
  StateId s = m.add_state();
  m.set_start(s);
  for (Label c : x) {
    const StateId t = m.add_state();
    m.add_arc(s, c, std::u32string(1, c), W::one(), t);
    s = t;
  }
  m.set_final(s);
  return m;
}

/// Maps exactly `in` to `out` with weight w.
template <PathSemiring W = TropicalWeight>
BasicWfst<W> string_map(std::u32string_view in, std::u32string_view out, W w = W::one()) {
  BasicWfst<W> m;
  StateId s = m.add_state();
  m.set_start(s);
  if (in.empty()) {
    const StateId t = m.add_state();
    m.add_arc(s, kEpsilon, std::u32string(out), w, t);
    m.set_final(t);
    return m;
  }
  for (std::size_t i = 0; i < in.size(); ++i) {
    const StateId t = m.add_state();
    m.add_arc(s, in[i], i == 0 ? std::u32string(out) : std::u32string(), i == 0 ? w : W::one(), t);
    s = t;
  }
  m.set_final(s);
  return m;
}

namespace internal {

// Appends the states of `src` to `dst`; returns the id offset.
template <PathSemiring W>
StateId append_states(BasicWfst<W>& dst, const BasicWfst<W>& src) {
  const StateId offset = dst.num_states();
  for (StateId s = 0; s < src.num_states(); ++s) dst.add_state();
  for (StateId s = 0; s < src.num_states(); ++s) {
    dst.set_final(s + offset, src.final_weight(s));
    for (auto a : src.arcs(s)) {
      a.next += offset;
      dst.add_arc(s + offset, std::move(a));
    }
  }
  return offset;
}

}  // namespace internal

/// Union with a fresh start state and epsilon arcs into each operand.
template <PathSemiring W>
BasicWfst<W> unite(const std::vector<BasicWfst<W>>& parts) {
  BasicWfst<W> m;
  const StateId s = m.add_state();
  m.set_start(s);
  for (const auto& p : parts) {
    if (p.empty()) continue;
    const StateId off = internal::append_states(m, p);
    m.add_arc(s, kEpsilon, {}, W::one(), p.start() + off);
  }
  return m;
}

template <PathSemiring W>
BasicWfst<W> concat(const BasicWfst<W>& a, const BasicWfst<W>& b) {
  if (a.empty() || b.empty()) return {};
  BasicWfst<W> m;
  internal::append_states(m, a);
  m.set_start(a.start());
  const StateId off = internal::append_states(m, b);
  for (StateId s = 0; s < a.num_states(); ++s) {
    if (!a.is_final(s)) continue;
    m.add_arc(s, kEpsilon, {}, a.final_weight(s), b.start() + off);
    m.set_final(s, W::zero());
  }
  return m;
}

/// Kleene closure: accepts any concatenation of zero or more strings of m,
/// with weights multiplied along the way.
template <PathSemiring W>
BasicWfst<W> star_closure(const BasicWfst<W>& m) {
  BasicWfst<W> out;
  const StateId s = out.add_state();
  out.set_start(s);
  out.set_final(s);
  if (m.empty()) return out;
  const StateId off = internal::append_states(out, m);
  const StateId inner = m.start() + off;
  out.add_arc(s, kEpsilon, {}, W::one(), inner);
  for (StateId q = 0; q < m.num_states(); ++q) {
    if (m.is_final(q)) out.add_arc(q + off, kEpsilon, {}, m.final_weight(q), inner);
  }
  return out;
}

/// Reverses every path; output strings are reversed as well.
template <PathSemiring W>
BasicWfst<W> reverse(const BasicWfst<W>& m) {
  BasicWfst<W> out;
  if (m.empty()) return out;
  for (StateId s = 0; s < m.num_states(); ++s) out.add_state();
  const StateId start = out.add_state();
  out.set_start(start);
  for (StateId s = 0; s < m.num_states(); ++s) {
    for (const auto& a : m.arcs(s)) {
      std::u32string o(a.olabel.rbegin(), a.olabel.rend());
      out.add_arc(a.next, a.ilabel, std::move(o), a.weight, s);
    }
    if (m.is_final(s)) out.add_arc(start, kEpsilon, {}, m.final_weight(s), s);
  }
  out.set_final(m.start());
  return out;
}

/// Keeps only states that are both reachable from the start and able to
/// reach a final state. State order is preserved.
template <PathSemiring W>
BasicWfst<W> connect(const BasicWfst<W>& m) {
  if (m.empty()) return {};
  const StateId n = m.num_states();
  std::vector<char> acc(n, 0), coacc(n, 0);
  std::vector<StateId> stack{m.start()};
  acc[m.start()] = 1;
  std::vector<std::vector<StateId>> rev(n);
  while (!stack.empty()) {
    const StateId s = stack.back();
    stack.pop_back();
    for (const auto& a : m.arcs(s)) {
      if (!acc[a.next]) {
        acc[a.next] = 1;
        stack.push_back(a.next);
      }
    }
  }
  for (StateId s = 0; s < n; ++s)
    for (const auto& a : m.arcs(s)) rev[a.next].push_back(s);
  for (StateId s = 0; s < n; ++s)
    if (m.is_final(s)) {
      coacc[s] = 1;
      stack.push_back(s);
    }
  while (!stack.empty()) {
    const StateId s = stack.back();
    stack.pop_back();
    for (StateId p : rev[s])
      if (!coacc[p]) {
        coacc[p] = 1;
        stack.push_back(p);
      }
  }

  BasicWfst<W> out;
  out.input_alphabet = m.input_alphabet;
  out.output_alphabet = m.output_alphabet;
  if (!coacc[m.start()]) {
    out.set_start(out.add_state());
    return out;
  }
  std::vector<StateId> remap(n, kNoState);
  for (StateId s = 0; s < n; ++s)
    if (acc[s] && coacc[s]) remap[s] = out.add_state();
  for (StateId s = 0; s < n; ++s) {
    if (remap[s] == kNoState) continue;
    out.set_final(remap[s], m.final_weight(s));
    for (const auto& a : m.arcs(s)) {
      if (remap[a.next] == kNoState) continue;
      auto b = a;
      b.next = remap[a.next];
      out.add_arc(remap[s], std::move(b));
    }
  }
  out.set_start(remap[m.start()]);
  return out;
}

/// Splits multi-symbol outputs into chains so every arc writes at most one
/// symbol. The first arc of a chain keeps the input label and weight.
template <PathSemiring W>
BasicWfst<W> expand_outputs(const BasicWfst<W>& m) {
  BasicWfst<W> out;
  if (m.empty()) return out;
  for (StateId s = 0; s < m.num_states(); ++s) {
    out.add_state();
    out.set_final(s, m.final_weight(s));
  }
  out.set_start(m.start());
  for (StateId s = 0; s < m.num_states(); ++s) {
    for (const auto& a : m.arcs(s)) {
      if (a.olabel.size() <= 1) {
        out.add_arc(s, a);
        continue;
      }
      StateId cur = s;
      for (std::size_t i = 0; i < a.olabel.size(); ++i) {
        const bool last = i + 1 == a.olabel.size();
        const StateId nxt = last ? a.next : out.add_state();
        out.add_arc(cur, i == 0 ? a.ilabel : kEpsilon, std::u32string(1, a.olabel[i]),
                    i == 0 ? a.weight : W::one(), nxt);
        cur = nxt;
      }
    }
  }
  out.input_alphabet = m.input_alphabet;
  out.output_alphabet = m.output_alphabet;
  return out;
}

/// Composition f∘g: transduces x→z with weight ⊕_y f(x,y)⊗g(y,z).
///
/// Uses a sequence epsilon filter (g-side epsilon moves before f-side ones
/// between matched moves) so each pair of paths appears exactly once.
template <PathSemiring W>
BasicWfst<W> compose(const BasicWfst<W>& f_in, const BasicWfst<W>& g) {
  if (f_in.output_alphabet && g.input_alphabet) {
    for (Label l : *f_in.output_alphabet)
      if (l != kEpsilon && !g.input_alphabet->contains(l))
        throw Error(Errc::AlphabetMismatch,
                    "output symbol U+" + std::to_string(static_cast<std::uint32_t>(l)) +
                        " of the left machine is not in the right machine's input alphabet");
  }
  BasicWfst<W> out;
  out.input_alphabet = f_in.input_alphabet;
  out.output_alphabet = g.output_alphabet;
  if (f_in.empty() || g.empty()) return out;

  const BasicWfst<W> f = expand_outputs(f_in);

  // g arcs sorted by input label for matching.
  std::vector<std::vector<std::pair<Label, std::size_t>>> gidx(g.num_states());
  for (StateId s = 0; s < g.num_states(); ++s) {
    const auto& arcs = g.arcs(s);
    for (std::size_t i = 0; i < arcs.size(); ++i) gidx[s].emplace_back(arcs[i].ilabel, i);
    std::sort(gidx[s].begin(), gidx[s].end());
  }

  auto key = [](StateId a, StateId b, int flag) {
    return (static_cast<std::uint64_t>(a) << 33) | (static_cast<std::uint64_t>(b) << 1) |
           static_cast<std::uint64_t>(flag);
  };
  struct Tuple {
    StateId f, g;
    int flag;
  };
  std::unordered_map<std::uint64_t, StateId> ids;
  std::vector<Tuple> tuples;
  std::queue<StateId> todo;
  auto get = [&](StateId a, StateId b, int flag) {
    const auto k = key(a, b, flag);
    auto it = ids.find(k);
    if (it != ids.end()) return it->second;
    const StateId s = out.add_state();
    ids.emplace(k, s);
    tuples.push_back({a, b, flag});
    todo.push(s);
    return s;
  };

  out.set_start(get(f.start(), g.start(), 0));
  while (!todo.empty()) {
    const StateId s = todo.front();
    todo.pop();
    const Tuple t = tuples[s];
    if (f.is_final(t.f) && g.is_final(t.g))
      out.set_final(s, times(f.final_weight(t.f), g.final_weight(t.g)));

    // g moves alone on its input epsilons.
    if (t.flag == 0) {
      const auto& gi = gidx[t.g];
      for (auto it = std::lower_bound(gi.begin(), gi.end(), std::make_pair(kEpsilon, std::size_t{0}));
           it != gi.end() && it->first == kEpsilon; ++it) {
        const auto& ga = g.arcs(t.g)[it->second];
        const StateId nxt = get(t.f, ga.next, 0);
        out.add_arc(s, kEpsilon, ga.olabel, ga.weight, nxt);
      }
    }
    for (const auto& fa : f.arcs(t.f)) {
      if (fa.olabel.empty()) {
        const StateId nxt = get(fa.next, t.g, 1);
        out.add_arc(s, fa.ilabel, {}, fa.weight, nxt);
        continue;
      }
      const Label sym = fa.olabel[0];
      const auto& gi = gidx[t.g];
      for (auto it = std::lower_bound(gi.begin(), gi.end(), std::make_pair(sym, std::size_t{0}));
           it != gi.end() && it->first == sym; ++it) {
        const auto& ga = g.arcs(t.g)[it->second];
        const StateId nxt = get(fa.next, ga.next, 0);
        out.add_arc(s, fa.ilabel, ga.olabel, times(fa.weight, ga.weight), nxt);
      }
    }
  }
  return out;
}

/// Removes input-epsilon arcs, folding their outputs and weights into the
/// following arc. Epsilon paths that end in a final state with pending
/// output are routed to a single sink state through an epsilon arc; that
/// sink has no outgoing arcs, so no epsilon arc lies on a cycle.
///
/// Only simple epsilon paths are followed. With non-negative weights this
/// keeps every minimum-cost (input, output) pair; epsilon cycles that emit
/// output are cut after one traversal.
template <PathSemiring W>
BasicWfst<W> remove_epsilons(const BasicWfst<W>& m) {
  if (m.empty()) return {};
  const StateId n = m.num_states();

  BasicWfst<W> out;
  out.input_alphabet = m.input_alphabet;
  out.output_alphabet = m.output_alphabet;
  for (StateId s = 0; s < n; ++s) out.add_state();
  out.set_start(m.start());
  StateId sink = kNoState;

  struct Reach {
    StateId state;
    std::u32string out;
    W weight;
  };

  std::vector<char> on_path(n, 0);
  for (StateId p = 0; p < n; ++p) {
    // Best weight for each (state, pending output) reached by epsilon moves.
    std::map<std::pair<StateId, std::u32string>, W> best;
    std::vector<Reach> order;
    auto dfs = [&](auto&& self, StateId q, const std::u32string& y, W w) -> void {
      auto [it, inserted] = best.try_emplace({q, y}, w);
      if (!inserted) {
        if (!natural_less(w, it->second)) return;
        it->second = w;
      } else {
        order.push_back({q, y, w});
      }
      on_path[q] = 1;
      for (const auto& a : m.arcs(q)) {
        if (a.ilabel != kEpsilon || on_path[a.next]) continue;
        self(self, a.next, y + a.olabel, times(w, a.weight));
      }
      on_path[q] = 0;
    };
    dfs(dfs, p, std::u32string(), W::one());

    // Arcs out of p, deduplicated by (input, output, next).
    std::map<std::tuple<Label, std::u32string, StateId>, W> arcs_out;
    std::vector<std::tuple<Label, std::u32string, StateId>> arc_order;
    W fin = W::zero();
    for (auto& r : order) {
      const W w = best.at({r.state, r.out});
      for (const auto& a : m.arcs(r.state)) {
        if (a.ilabel == kEpsilon) continue;
        auto k = std::make_tuple(a.ilabel, r.out + a.olabel, a.next);
        const W aw = times(w, a.weight);
        auto [it, inserted] = arcs_out.try_emplace(k, aw);
        if (inserted)
          arc_order.push_back(k);
        else
          it->second = plus(it->second, aw);
      }
      if (m.is_final(r.state)) {
        const W fw = times(w, m.final_weight(r.state));
        if (r.out.empty()) {
          fin = plus(fin, fw);
        } else {
          if (sink == kNoState) {
            sink = out.add_state();
            out.set_final(sink);
          }
          auto k = std::make_tuple(kEpsilon, r.out, sink);
          auto [it, inserted] = arcs_out.try_emplace(k, fw);
          if (inserted)
            arc_order.push_back(k);
          else
            it->second = plus(it->second, fw);
        }
      }
    }
    out.set_final(p, fin);
    for (const auto& k : arc_order)
      out.add_arc(p, std::get<0>(k), std::get<1>(k), arcs_out.at(k), std::get<2>(k));
  }
  return connect(out);
}

/// Replaces every output with the input label: the input-side acceptor.
template <PathSemiring W>
BasicWfst<W> project_input(const BasicWfst<W>& m) {
  BasicWfst<W> out = m;
  for (StateId s = 0; s < out.num_states(); ++s)
    for (auto& a : out.mutable_arcs(s))
      a.olabel = a.ilabel == kEpsilon ? std::u32string() : std::u32string(1, a.ilabel);
  return out;
}

}  // namespace ymtok::fst
