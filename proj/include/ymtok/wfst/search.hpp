#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <queue>
#include <string>
#include <unordered_map>
#include <vector>

#include "ymtok/scorer/score_request.hpp"
#include "ymtok/wfst/wfst.hpp"

namespace ymtok::fst {

struct PathStep {
  StateId state;
  std::size_t arc;  // index into arcs(state)

  friend bool operator==(const PathStep&, const PathStep&) = default;
};

template <PathSemiring W>
struct Path {
  std::vector<PathStep> steps;
  StateId final_state = kNoState;
  W weight = W::zero();
  std::u32string output;
};

/// (⊗ arc weights) ⊗ final weight, recomputed from the arcs.
template <PathSemiring W>
W path_weight(const BasicWfst<W>& m, const Path<W>& p) {
  W w = W::one();
  for (const auto& st : p.steps) w = times(w, m.arcs(st.state)[st.arc].weight);
  return times(w, m.final_weight(p.final_state));
}

namespace internal {

template <PathSemiring W>
void require_non_negative(const BasicWfst<W>& m) {
  for (StateId s = 0; s < m.num_states(); ++s) {
    for (const auto& a : m.arcs(s))
      if (natural_less(a.weight, W::one()))
        throw Error(Errc::NegativeWeight, "search needs weights no better than one()");
    if (natural_less(m.final_weight(s), W::one()))
      throw Error(Errc::NegativeWeight, "search needs final weights no better than one()");
  }
}

}  // namespace internal

/// ⊕ over all accepting paths that read x and write y; W::zero() if none.
template <PathSemiring W>
W accepted_weight(const BasicWfst<W>& m, std::u32string_view x, std::u32string_view y) {
  if (m.empty()) return W::zero();
  internal::require_non_negative(m);
  const std::uint64_t nx = x.size() + 1, ny = y.size() + 1;
  auto node = [&](StateId s, std::size_t i, std::size_t j) {
    return (static_cast<std::uint64_t>(s) * nx + i) * ny + j;
  };
  std::unordered_map<std::uint64_t, W> dist;
  std::unordered_map<std::uint64_t, char> done;
  using Item = std::pair<W, std::uint64_t>;
  auto cmp = [](const Item& a, const Item& b) {
    if (natural_less(a.first, b.first)) return false;
    if (natural_less(b.first, a.first)) return true;
    return a.second > b.second;
  };
  std::priority_queue<Item, std::vector<Item>, decltype(cmp)> pq(cmp);
  const auto s0 = node(m.start(), 0, 0);
  dist[s0] = W::one();
  pq.push({W::one(), s0});
  W total = W::zero();
  while (!pq.empty()) {
    const auto [w, id] = pq.top();
    pq.pop();
    if (done[id]) continue;
    done[id] = 1;
    const std::size_t j = id % ny;
    const std::size_t i = (id / ny) % nx;
    const auto s = static_cast<StateId>(id / ny / nx);
    if (i == x.size() && j == y.size() && m.is_final(s))
      total = plus(total, times(w, m.final_weight(s)));
    for (const auto& a : m.arcs(s)) {
      std::size_t ni = i;
      if (a.ilabel != kEpsilon) {
        if (i == x.size() || x[i] != a.ilabel) continue;
        ++ni;
      }
      if (y.substr(j, a.olabel.size()) != a.olabel) continue;
      const std::size_t nj = j + a.olabel.size();
      const auto nid = node(a.next, ni, nj);
      const W nw = times(w, a.weight);
      auto it = dist.find(nid);
      if (it == dist.end() || natural_less(nw, it->second)) {
        dist[nid] = nw;
        pq.push({nw, nid});
      }
    }
  }
  return total;
}

/// Viterbi search for the cheapest accepting path reading x.
///
/// Ties are broken towards the lower (state, arc index) predecessor and,
/// among final states, towards the lower state id.
template <PathSemiring W>
Path<W> best_path(const BasicWfst<W>& m, std::u32string_view x) {
  if (m.empty()) throw Error(Errc::NoAcceptingPath, "empty machine");
  internal::require_non_negative(m);
  const std::size_t n_states = static_cast<std::size_t>(m.num_states());
  const std::size_t width = x.size() + 1;
  const std::size_t n_nodes = n_states * width;
  const std::size_t goal = n_nodes;

  // node = pos * n_states + state
  std::vector<W> dist(n_nodes + 1, W::zero());
  std::vector<char> done(n_nodes + 1, 0);
  struct Back {
    std::size_t prev = SIZE_MAX;
    std::size_t arc = 0;
  };
  std::vector<Back> back(n_nodes + 1);

  using Item = std::pair<W, std::size_t>;
  auto cmp = [](const Item& a, const Item& b) {
    if (natural_less(a.first, b.first)) return false;
    if (natural_less(b.first, a.first)) return true;
    return a.second > b.second;
  };
  std::priority_queue<Item, std::vector<Item>, decltype(cmp)> pq(cmp);
  const std::size_t s0 = static_cast<std::size_t>(m.start());
  dist[s0] = W::one();
  pq.push({W::one(), s0});

  auto better_back = [&](std::size_t v, std::size_t u, std::size_t arc) {
    const Back& b = back[v];
    if (b.prev == SIZE_MAX) return true;
    const std::size_t us = u % n_states, bs = b.prev % n_states;
    return us < bs || (us == bs && arc < b.arc);
  };

  while (!pq.empty()) {
    const auto [w, u] = pq.top();
    pq.pop();
    if (done[u] || !(w == dist[u])) continue;
    done[u] = 1;
    if (u == goal) break;
    const std::size_t pos = u / n_states;
    const auto s = static_cast<StateId>(u % n_states);
    if (pos == x.size() && m.is_final(s)) {
      const W fw = times(w, m.final_weight(s));
      if (natural_less(fw, dist[goal]) || (fw == dist[goal] && better_back(goal, u, 0))) {
        dist[goal] = fw;
        back[goal] = {u, 0};
        pq.push({fw, goal});
      }
    }
    const auto& arcs = m.arcs(s);
    for (std::size_t k = 0; k < arcs.size(); ++k) {
      const auto& a = arcs[k];
      std::size_t npos = pos;
      if (a.ilabel != kEpsilon) {
        if (pos == x.size() || x[pos] != a.ilabel) continue;
        ++npos;
      }
      const std::size_t v = npos * n_states + static_cast<std::size_t>(a.next);
      if (done[v]) continue;
      const W nw = times(w, a.weight);
      if (natural_less(nw, dist[v])) {
        dist[v] = nw;
        back[v] = {u, k};
        pq.push({nw, v});
      } else if (nw == dist[v] && better_back(v, u, k)) {
        back[v] = {u, k};
      }
    }
  }
  if (!done[goal]) throw Error(Errc::NoAcceptingPath, "no accepting path for input");

  Path<W> p;
  p.weight = dist[goal];
  std::size_t v = back[goal].prev;
  p.final_state = static_cast<StateId>(v % n_states);
  while (back[v].prev != SIZE_MAX) {
    const Back& b = back[v];
    p.steps.push_back({static_cast<StateId>(b.prev % n_states), b.arc});
    v = b.prev;
  }
  std::reverse(p.steps.begin(), p.steps.end());
  for (const auto& st : p.steps) p.output += m.arcs(st.state)[st.arc].olabel;
  return p;
}

inline constexpr std::size_t kUnboundedBeam = std::numeric_limits<std::size_t>::max();

struct BeamResult {
  std::u32string output;
  double cost = 0;  // arc costs plus negated scorer log-probabilities
};

/// Frontier beam search with an external scorer.
///
/// The frontier holds one hypothesis (cost, output) per state for the
/// current input position. Each step closes the frontier over input
/// epsilon arcs, keeps the k cheapest states, then advances over arcs
/// reading the next symbol. Reaching q' through arc t from q costs
///   cost(q) + w(t) - log p(out(t) | source, output(q)).
/// With k unbounded and no scorer this is exact Viterbi.
inline BeamResult beam_search(const Wfst& m, std::u32string_view x, std::size_t k,
                              const ScoreFn& scorer = {}) {
  if (k == 0) throw Error(Errc::BadFormat, "beam width must be at least 1");
  if (m.empty()) throw Error(Errc::NoSurvivingPath, "empty machine");
  internal::require_non_negative(m);

  struct Hyp {
    double cost;
    std::u32string out;
  };
  using Frontier = std::unordered_map<StateId, Hyp>;

  auto step_cost = [&](const Hyp& h, const Arc<TropicalWeight>& a) {
    double c = h.cost + a.weight.value;
    if (scorer && !a.olabel.empty()) c -= scorer(ScoreRequest{x, h.out, a.olabel});
    return c;
  };

  auto close = [&](Frontier& fr) {
    using Item = std::pair<double, StateId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    for (const auto& [s, h] : fr) pq.push({h.cost, s});
    std::unordered_map<StateId, char> done;
    while (!pq.empty()) {
      const auto [c, s] = pq.top();
      pq.pop();
      if (done[s] || c != fr.at(s).cost) continue;
      done[s] = 1;
      const Hyp h = fr.at(s);  // fr may rehash below
      for (const auto& a : m.arcs(s)) {
        if (a.ilabel != kEpsilon || done[a.next]) continue;
        const double nc = step_cost(h, a);
        auto it = fr.find(a.next);
        if (it == fr.end() || nc < it->second.cost) {
          fr[a.next] = Hyp{nc, h.out + a.olabel};
          pq.push({nc, a.next});
        }
      }
    }
  };

  auto prune = [&](Frontier& fr) {
    std::vector<std::pair<double, StateId>> order;
    order.reserve(fr.size());
    for (const auto& [s, h] : fr) order.push_back({h.cost, s});
    std::sort(order.begin(), order.end());
    if (order.size() > k) order.resize(k);
    return order;
  };

  Frontier fr;
  fr[m.start()] = Hyp{0.0, {}};
  for (std::size_t i = 0;; ++i) {
    close(fr);
    const auto kept = prune(fr);
    if (i == x.size()) {
      const Hyp* best = nullptr;
      double best_cost = std::numeric_limits<double>::infinity();
      StateId best_state = kNoState;
      for (const auto& [c, s] : kept) {
        if (!m.is_final(s)) continue;
        const double total = c + m.final_weight(s).value;
        if (total < best_cost || (total == best_cost && s < best_state)) {
          best_cost = total;
          best_state = s;
          best = &fr.at(s);
        }
      }
      if (!best) throw Error(Errc::NoSurvivingPath, "no final state survived the beam");
      return BeamResult{best->out, best_cost};
    }
    Frontier next;
    std::vector<StateId> states;
    for (const auto& [c, s] : kept) states.push_back(s);
    std::sort(states.begin(), states.end());
    for (StateId s : states) {
      const Hyp& h = fr.at(s);
      for (const auto& a : m.arcs(s)) {
        if (a.ilabel != x[i]) continue;
        const double nc = step_cost(h, a);
        auto it = next.find(a.next);
        if (it == next.end() || nc < it->second.cost) next[a.next] = Hyp{nc, h.out + a.olabel};
      }
    }
    if (next.empty()) throw Error(Errc::NoSurvivingPath, "beam emptied before end of input");
    fr = std::move(next);
  }
}

}  // namespace ymtok::fst
