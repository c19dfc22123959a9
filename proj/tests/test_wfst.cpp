#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support/machines.hpp"
#include "ymtok/wfst/io.hpp"
#include "ymtok/wfst/ops.hpp"
#include "ymtok/wfst/search.hpp"

using namespace ymtok;
using namespace ymtok::fst;
using ymtok::testing::all_strings;
using ymtok::testing::brute_best_cost;
using ymtok::testing::brute_outputs;
using ymtok::testing::brute_pair_cost;
using ymtok::testing::three_state_machine;
using ymtok::testing::random_machine;
using ymtok::testing::RandomMachineSpec;

namespace {

Wfst uppercase_map() {
  Wfst g;
  g.set_start(g.add_state());
  g.set_final(0);
  g.add_arc(0, U'm', U"M", TropicalWeight::one(), 0);
  g.add_arc(0, U'n', U"N", TropicalWeight::one(), 0);
  g.add_arc(0, U'o', U"O", TropicalWeight::one(), 0);
  return g;
}

}  // namespace

TEST(Semiring, LawsOnSampledTriples) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> pick(0, 12);
  auto sample = [&] {
    const int v = pick(rng);
    return v == 12 ? TropicalWeight::zero() : TropicalWeight(v * 0.5);
  };
  for (int i = 0; i < 1000; ++i) {
    const auto a = sample(), b = sample(), c = sample();
    EXPECT_EQ(plus(a, b), plus(b, a));
    EXPECT_EQ(plus(plus(a, b), c), plus(a, plus(b, c)));
    EXPECT_EQ(times(times(a, b), c), times(a, times(b, c)));
    EXPECT_EQ(times(a, plus(b, c)), plus(times(a, b), times(a, c)));
    EXPECT_EQ(plus(a, TropicalWeight::zero()), a);
    EXPECT_EQ(times(a, TropicalWeight::one()), a);
    EXPECT_EQ(times(a, TropicalWeight::zero()), TropicalWeight::zero());
  }
}

TEST(AcceptedWeight, ThreeStateMachine) {
  const Wfst m = three_state_machine();
  EXPECT_EQ(accepted_weight(m, U"baa", U"moo").value, 3);
  EXPECT_EQ(accepted_weight(m, U"baa", U"noo").value, 2);
  EXPECT_TRUE(accepted_weight(m, U"baa", U"zzz").is_zero());
}

TEST(BestPath, ThreeStateMachine) {
  const Wfst m = three_state_machine();
  auto p = best_path(m, U"baa");
  EXPECT_EQ(p.output, U"noo");
  EXPECT_EQ(p.weight.value, 2);
  EXPECT_EQ(path_weight(m, p), p.weight);
  p = best_path(m, U"ba");
  EXPECT_EQ(p.output, U"no");
  EXPECT_EQ(p.weight.value, 2);
  EXPECT_THROW(best_path(m, U"ab"), Error);
}

TEST(BestPath, IdentityAcceptor) {
  const auto p = best_path(acceptor(U"hello"), U"hello");
  EXPECT_EQ(p.output, U"hello");
  EXPECT_EQ(p.weight.value, 0);
}

TEST(BestPath, TieGoesToLowerArc) {
  Wfst m;
  m.add_state();
  m.add_state();
  m.set_start(0);
  m.add_arc(0, U'a', U"p", TropicalWeight(1), 1);
  m.add_arc(0, U'a', U"q", TropicalWeight(1), 1);
  m.set_final(1);
  EXPECT_EQ(best_path(m, U"a").output, U"p");
  EXPECT_EQ(beam_search(m, U"a", kUnboundedBeam).output, U"p");
}

TEST(BestPath, RejectsNegativeWeights) {
  Wfst m = acceptor(U"a");
  m.mutable_arcs(0)[0].weight = TropicalWeight(-1);
  try {
    best_path(m, U"a");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NegativeWeight);
  }
}

TEST(BestPath, MatchesEnumerationOnRandomMachines) {
  std::mt19937_64 rng(11);
  int compared = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Wfst m = random_machine(rng);
    for (const auto& x : all_strings(U"ab", 5)) {
      const double want = brute_best_cost(m, x);
      if (std::isinf(want)) {
        EXPECT_THROW(best_path(m, x), Error);
        continue;
      }
      const auto p = best_path(m, x);
      ASSERT_EQ(p.weight.value, want) << "trial " << trial;
      ASSERT_EQ(path_weight(m, p), p.weight);
      ++compared;
    }
  }
  EXPECT_GT(compared, 100);
}

TEST(Compose, ThreeStateThroughUppercase) {
  const Wfst c = compose(three_state_machine(), uppercase_map());
  EXPECT_EQ(accepted_weight(c, U"baa", U"NOO").value, 2);
  EXPECT_EQ(accepted_weight(c, U"baa", U"MOO").value, 3);
  EXPECT_EQ(best_path(c, U"baa").output, U"NOO");
}

TEST(Compose, IdentityAndAnnihilation) {
  const Wfst m = three_state_machine();
  Wfst id;
  id.set_start(id.add_state());
  id.set_final(0);
  for (char32_t c : std::u32string_view(U"ab")) id.add_arc(0, c, std::u32string(1, c), TropicalWeight::one(), 0);
  const Wfst c = compose(id, m);
  for (const auto& x : all_strings(U"ab", 4))
    for (const auto& y : all_strings(U"mno", 4))
      ASSERT_EQ(accepted_weight(c, x, y), accepted_weight(m, x, y));
  EXPECT_TRUE(accepted_weight(compose(m, Wfst{}), U"baa", U"noo").is_zero());
}

TEST(Compose, AlphabetMismatch) {
  Wfst f = three_state_machine();
  Wfst g = uppercase_map();
  f.output_alphabet = std::set<Label>{U'm', U'n', U'o'};
  g.input_alphabet = std::set<Label>{U'm', U'n'};
  try {
    compose(f, g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::AlphabetMismatch);
  }
  g.input_alphabet->insert(U'o');
  EXPECT_NO_THROW(compose(f, g));
}

TEST(Compose, WeightLawOnRandomPairs) {
  std::mt19937_64 rng(23);
  RandomMachineSpec fs;
  fs.max_states = 5;
  fs.max_arcs = 10;
  fs.forward_epsilons = true;
  RandomMachineSpec gs;
  gs.max_states = 5;
  gs.max_arcs = 10;
  gs.inputs = U"xy";
  gs.outputs = U"pq";
  for (int trial = 0; trial < 150; ++trial) {
    const Wfst f = random_machine(rng, fs);
    const Wfst g = random_machine(rng, gs);
    const Wfst c = compose(f, g);
    for (const auto& x : all_strings(U"ab", 3)) {
      const auto ys = brute_outputs(f, x);
      for (const auto& z : all_strings(U"pq", 3)) {
        double want = ymtok::testing::kInf;
        for (const auto& [y, fc] : ys) want = std::min(want, fc + brute_pair_cost(g, y, z));
        ASSERT_EQ(accepted_weight(c, x, z).value, want) << "trial " << trial;
      }
    }
  }
}

TEST(StarClosure, Iterations) {
  const Wfst m = string_map(U"ab", U"x", TropicalWeight(1.5));
  const Wfst s = star_closure(m);
  EXPECT_EQ(accepted_weight(s, U"", U"").value, 0);
  EXPECT_EQ(accepted_weight(s, U"ab", U"x").value, 1.5);
  EXPECT_EQ(accepted_weight(s, U"abab", U"xx").value, 3.0);
  EXPECT_TRUE(accepted_weight(s, U"aba", U"x").is_zero());
}

TEST(StarClosure, CountsFinalWeightEachRound) {
  Wfst m = acceptor(U"a");
  m.set_final(1, TropicalWeight(2));
  const Wfst s = star_closure(m);
  EXPECT_EQ(accepted_weight(s, U"aaa", U"aaa").value, 6);
}

TEST(RemoveEpsilons, ChainCollapses) {
  Wfst m;
  for (int i = 0; i < 3; ++i) m.add_state();
  m.set_start(0);
  m.add_arc(0, kEpsilon, U"", TropicalWeight(1), 1);
  m.add_arc(1, U'a', U"b", TropicalWeight(2), 2);
  m.set_final(2);
  const Wfst r = remove_epsilons(m);
  ASSERT_EQ(r.num_arcs(), 1u);
  const auto& a = r.arcs(r.start())[0];
  EXPECT_EQ(a.ilabel, U'a');
  EXPECT_EQ(a.olabel, U"b");
  EXPECT_EQ(a.weight.value, 3);
  EXPECT_TRUE(r.is_final(a.next));
}

TEST(RemoveEpsilons, CostlyCycleKeepsCheapTraversal) {
  Wfst m;
  for (int i = 0; i < 3; ++i) m.add_state();
  m.set_start(0);
  m.add_arc(0, kEpsilon, U"", TropicalWeight(1), 1);
  m.add_arc(1, kEpsilon, U"", TropicalWeight(1), 0);
  m.add_arc(1, U'a', U"a", TropicalWeight(0), 2);
  m.set_final(2);
  const Wfst r = remove_epsilons(m);
  for (StateId s = 0; s < r.num_states(); ++s)
    for (const auto& a : r.arcs(s)) EXPECT_NE(a.ilabel, kEpsilon);
  EXPECT_EQ(accepted_weight(r, U"a", U"a").value, 1);
}

TEST(RemoveEpsilons, PreservesBestCost) {
  std::mt19937_64 rng(31);
  RandomMachineSpec spec;
  spec.epsilon_rate = 0.35;
  for (int trial = 0; trial < 200; ++trial) {
    const Wfst m = random_machine(rng, spec);
    const Wfst r = remove_epsilons(m);
    for (StateId s = 0; s < r.num_states(); ++s)
      for (const auto& a : r.arcs(s))
        if (a.ilabel == kEpsilon) {
          ASSERT_TRUE(r.arcs(a.next).empty());
        }
    for (const auto& x : all_strings(U"ab", 4)) {
      const double want = brute_best_cost(m, x);
      const double got = r.empty() ? ymtok::testing::kInf : brute_best_cost(r, x);
      ASSERT_EQ(got, want) << "trial " << trial;
    }
  }
}

TEST(RemoveEpsilons, PreservesAcceptedWeight) {
  std::mt19937_64 rng(37);
  RandomMachineSpec spec;
  spec.epsilon_rate = 0.35;
  spec.forward_epsilons = true;
  for (int trial = 0; trial < 150; ++trial) {
    const Wfst m = random_machine(rng, spec);
    const Wfst r = remove_epsilons(m);
    for (const auto& x : all_strings(U"ab", 3)) {
      for (const auto& [y, cost] : brute_outputs(m, x))
        ASSERT_EQ(accepted_weight(r, x, y).value, cost) << "trial " << trial;
      for (const auto& [y, cost] : brute_outputs(r, x))
        ASSERT_EQ(accepted_weight(m, x, y).value, cost) << "trial " << trial;
    }
  }
}

TEST(BeamSearch, ThreeStateMachine) {
  const Wfst m = three_state_machine();
  auto r = beam_search(m, U"baa", kUnboundedBeam);
  EXPECT_EQ(r.output, U"noo");
  EXPECT_EQ(r.cost, 2);

  // A scorer that strongly prefers m over n flips the decision.
  const ScoreFn prefer_m = [](const ScoreRequest& q) {
    return q.extension == U"n" ? -10.0 : 0.0;
  };
  r = beam_search(m, U"baa", kUnboundedBeam, prefer_m);
  EXPECT_EQ(r.output, U"moo");
  EXPECT_EQ(r.cost, 3);
}

TEST(BeamSearch, NarrowBeamCanMissTheBestPath) {
  // The cheap first step leads into an expensive second step.
  Wfst m;
  for (int i = 0; i < 4; ++i) m.add_state();
  m.set_start(0);
  m.add_arc(0, U'a', U"x", TropicalWeight(0), 1);
  m.add_arc(0, U'a', U"y", TropicalWeight(1), 2);
  m.add_arc(1, U'b', U"x", TropicalWeight(10), 3);
  m.add_arc(2, U'b', U"y", TropicalWeight(0), 3);
  m.set_final(3);
  EXPECT_EQ(brute_best_cost(m, U"ab"), 1);
  EXPECT_EQ(beam_search(m, U"ab", kUnboundedBeam).output, U"yy");
  const auto narrow = beam_search(m, U"ab", 1);
  EXPECT_EQ(narrow.output, U"xx");
  EXPECT_EQ(narrow.cost, 10);
}

TEST(BeamSearch, EmptiedBeam) {
  Wfst m;
  for (int i = 0; i < 3; ++i) m.add_state();
  m.set_start(0);
  m.add_arc(0, U'a', U"", TropicalWeight(0), 1);
  m.add_arc(0, U'a', U"", TropicalWeight(1), 2);
  m.add_arc(2, U'b', U"", TropicalWeight(0), 2);
  m.set_final(2);
  try {
    beam_search(m, U"ab", 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NoSurvivingPath);
  }
  EXPECT_EQ(beam_search(m, U"ab", 2).cost, 1);
}

TEST(BeamSearch, UnboundedEqualsBestPathOnRandomMachines) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const Wfst m = random_machine(rng);
    const Wfst r = remove_epsilons(m);
    for (const auto& x : all_strings(U"ab", 5)) {
      const double want = brute_best_cost(m, x);
      if (std::isinf(want)) {
        EXPECT_THROW(beam_search(m, x, kUnboundedBeam), Error);
        continue;
      }
      ASSERT_EQ(beam_search(m, x, kUnboundedBeam).cost, want) << "trial " << trial;
      ASSERT_EQ(beam_search(r, x, kUnboundedBeam).cost, want) << "trial " << trial;
      // Equal-cost outputs may differ; the beam's output must still be
      // accepted at the optimal cost.
      const auto b = beam_search(r, x, kUnboundedBeam);
      ASSERT_EQ(accepted_weight(r, x, b.output).value, want);
    }
  }
}

TEST(TextFormat, RoundTripIsExact) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    Wfst m = random_machine(rng);
    for (StateId q = 0; q < m.num_states(); ++q)
      for (auto& a : m.mutable_arcs(q)) a.weight = TropicalWeight(a.weight.value * 0.1 + 1e-17 * q);
    const std::string text = to_text(m);
    const Wfst back = from_text(text);
    ASSERT_EQ(back, m);
    ASSERT_EQ(to_text(back), text);
  }
}

TEST(TextFormat, EscapesAwkwardLabels) {
  Wfst m;
  m.add_state();
  m.add_state();
  m.set_start(0);
  m.add_arc(0, U' ', U"a b\\", TropicalWeight(0.25), 1);
  m.add_arc(0, U'ñ', U"<eps>", TropicalWeight(1.0 / 3), 1);
  m.add_arc(0, kEpsilon, U"\t\n", TropicalWeight(0), 1);
  m.set_final(1, TropicalWeight(2));
  EXPECT_EQ(from_text(to_text(m)), m);
}

TEST(TextFormat, HeaderlessInputStartsAtFirstSource) {
  const Wfst m = from_text("2 0 a x 1\n0 0.5\n");
  EXPECT_EQ(m.start(), 2);
  EXPECT_EQ(m.num_states(), 3);
  EXPECT_EQ(accepted_weight(m, U"a", U"x").value, 1.5);
  EXPECT_THROW(from_text("0 1 a\n"), Error);
}
