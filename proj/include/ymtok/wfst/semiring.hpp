#pragma once

#include <cmath>
#include <concepts>
#include <limits>

namespace ymtok::fst {

// A path semiring whose plus picks one of its arguments, so shortest-path
// style searches are exact.
template <class W>
concept PathSemiring = requires(W a, W b) {
  { W::zero() } -> std::same_as<W>;
  { W::one() } -> std::same_as<W>;
  { plus(a, b) } -> std::same_as<W>;
  { times(a, b) } -> std::same_as<W>;
  { natural_less(a, b) } -> std::same_as<bool>;
  { a == b } -> std::same_as<bool>;
};

/// Min-plus tropical weight. Values are costs (negative log
/// probabilities): lower is better, zero() is +inf and one() is 0.
struct TropicalWeight {
  double value = std::numeric_limits<double>::infinity();

  constexpr TropicalWeight() = default;
  constexpr explicit TropicalWeight(double v) : value(v) {}

  static constexpr TropicalWeight zero() {
    return TropicalWeight(std::numeric_limits<double>::infinity());
  }
  static constexpr TropicalWeight one() { return TropicalWeight(0.0); }

  bool is_zero() const { return value == std::numeric_limits<double>::infinity(); }

  friend constexpr bool operator==(TropicalWeight, TropicalWeight) = default;
};

constexpr TropicalWeight plus(TropicalWeight a, TropicalWeight b) {
  return a.value <= b.value ? a : b;
}

inline TropicalWeight times(TropicalWeight a, TropicalWeight b) {
  if (std::isinf(a.value) && a.value > 0) return a;
  if (std::isinf(b.value) && b.value > 0) return b;
  return TropicalWeight(a.value + b.value);
}

/// Strict order in which plus prefers its first argument.
constexpr bool natural_less(TropicalWeight a, TropicalWeight b) { return a.value < b.value; }

static_assert(PathSemiring<TropicalWeight>);

}  // namespace ymtok::fst
