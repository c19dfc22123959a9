#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ymtok/core/error.hpp"
#include "ymtok/wfst/semiring.hpp"

namespace ymtok::fst {

using Label = char32_t;
using StateId = std::int32_t;

inline constexpr Label kEpsilon = 0;
inline constexpr StateId kNoState = -1;

/// One transition: reads at most one input symbol and writes a (possibly
/// empty) string of output symbols.
template <class W>
struct Arc {
  Label ilabel = kEpsilon;
  std::u32string olabel;
  W weight = W::one();
  StateId next = kNoState;

  friend bool operator==(const Arc&, const Arc&) = default;
};

/// A weighted finite-state transducer with a single start state, per-state
/// final weights and string-valued arc outputs. States are dense indices.
template <PathSemiring W>
class BasicWfst {
 public:
  using Weight = W;
  using ArcType = Arc<W>;

  StateId add_state() {
    states_.emplace_back();
    return static_cast<StateId>(states_.size() - 1);
  }

  void reserve_states(std::size_t n) { states_.reserve(n); }

  StateId num_states() const { return static_cast<StateId>(states_.size()); }

  StateId start() const { return start_; }
  void set_start(StateId s) {
    check(s);
    start_ = s;
  }

  W final_weight(StateId s) const { return states_[s].final; }
  bool is_final(StateId s) const { return !(states_[s].final == W::zero()); }
  void set_final(StateId s, W w = W::one()) {
    check(s);
    states_[s].final = w;
  }

  void add_arc(StateId s, ArcType arc) {
    check(s);
    check(arc.next);
    states_[s].arcs.push_back(std::move(arc));
  }

  void add_arc(StateId s, Label in, std::u32string out, W w, StateId next) {
    add_arc(s, ArcType{in, std::move(out), w, next});
  }

  const std::vector<ArcType>& arcs(StateId s) const { return states_[s].arcs; }
  std::vector<ArcType>& mutable_arcs(StateId s) { return states_[s].arcs; }

  std::size_t num_arcs() const {
    std::size_t n = 0;
    for (const auto& st : states_) n += st.arcs.size();
    return n;
  }

  bool empty() const { return start_ == kNoState; }

  // Symbol tables in the OpenFst sense. compose() checks them only when
  // both sides declare one.
  std::optional<std::set<Label>> input_alphabet;
  std::optional<std::set<Label>> output_alphabet;

  std::set<Label> used_input_labels() const {
    std::set<Label> out;
    for (const auto& st : states_)
      for (const auto& a : st.arcs)
        if (a.ilabel != kEpsilon) out.insert(a.ilabel);
    return out;
  }

  std::set<Label> used_output_labels() const {
    std::set<Label> out;
    for (const auto& st : states_)
      for (const auto& a : st.arcs) out.insert(a.olabel.begin(), a.olabel.end());
    return out;
  }

  friend bool operator==(const BasicWfst& a, const BasicWfst& b) {
    if (a.start_ != b.start_ || a.states_.size() != b.states_.size()) return false;
    for (std::size_t i = 0; i < a.states_.size(); ++i) {
      if (!(a.states_[i].final == b.states_[i].final) || a.states_[i].arcs != b.states_[i].arcs)
        return false;
    }
    return true;
  }

 private:
  struct State {
    W final = W::zero();
    std::vector<ArcType> arcs;
  };

  void check(StateId s) const {
    if (s < 0 || s >= num_states())
      throw Error(Errc::BadFormat, "state " + std::to_string(s) + " out of range");
  }

  std::vector<State> states_;
  StateId start_ = kNoState;
};

using Wfst = BasicWfst<TropicalWeight>;

}  // namespace ymtok::fst
