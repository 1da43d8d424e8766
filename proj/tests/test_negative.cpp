#include <gtest/gtest.h>

#include <chrono>
#include <iostream>

#include "heyting/negative.hpp"
#include "heyting/prover.hpp"
#include "heyting/random.hpp"

using namespace heyting;

namespace {

struct Pipeline {
  ModelSlice k2{2, 1};
  Omega omega{k2, 3};
};

Pipeline& pipeline() {
  static Pipeline instance;
  return instance;
}

}  // namespace

TEST(GodelGentzen, Clauses) {
  EXPECT_EQ(godel_gentzen(var(1)), mk_not(mk_not(var(1))));
  EXPECT_EQ(godel_gentzen(bottom()), bottom());
  EXPECT_EQ(godel_gentzen(top()), top());
  const Formula a = var(1), b = var(2);
  EXPECT_EQ(godel_gentzen(mk_and(a, b)), mk_and(godel_gentzen(a), godel_gentzen(b)));
  EXPECT_EQ(godel_gentzen(mk_imp(a, b)), mk_imp(godel_gentzen(a), godel_gentzen(b)));
  EXPECT_EQ(godel_gentzen(mk_or(a, b)), mk_not(mk_and(mk_not(godel_gentzen(a)), mk_not(godel_gentzen(b)))));
  // Not (&, |)-preserving.
  EXPECT_NE(godel_gentzen(mk_or(a, b)), mk_or(godel_gentzen(a), godel_gentzen(b)));
}

TEST(GodelGentzen, ExcludedMiddle) {
  EXPECT_TRUE(provable(godel_gentzen(parse("x1 | ~x1"))));
  EXPECT_FALSE(provable(parse("x1 | ~x1")));
}

TEST(NegativeTranslations, TautologiesAgree) {
  Rng rng(79);
  int tautologies = 0;
  for (int i = 0; i < 300; ++i) {
    const Formula f = random_formula_upto(rng, 3, 6);
    const bool classical = prove_classical({}, f);
    tautologies += classical;
    ASSERT_EQ(provable(glivenko(f)), classical) << print(f);
    ASSERT_EQ(provable(godel_gentzen(f)), classical) << print(f);
  }
  EXPECT_GT(tautologies, 20);
}

TEST(NegativeTranslations, GentzenRespectsConsequence) {
  Rng rng(83);
  int positive = 0;
  for (int i = 0; i < 200; ++i) {
    std::vector<Formula> premises, translated;
    const std::size_t count = 1 + rng() % 2;
    for (std::size_t k = 0; k < count; ++k) {
      premises.push_back(random_formula_upto(rng, 3, 4));
      translated.push_back(godel_gentzen(premises.back()));
    }
    const Formula goal = random_formula_upto(rng, 3, 4);
    const bool classical = prove_classical(premises, goal);
    positive += classical;
    ASSERT_EQ(prove_ipc(translated, godel_gentzen(goal)), classical) << print(goal);
  }
  EXPECT_GT(positive, 20);
}

TEST(Glivenko, Examples) {
  EXPECT_TRUE(equiv_ipc(glivenko(bottom()), bottom()));
  EXPECT_TRUE(provable(glivenko(parse("((x1 -> x2) -> x1) -> x1"))));
  // Not consequence-respecting as a map of intuitionistic logic: ~~x1 |- x1
  // fails, while the images ~~~~x1 |- ~~x1 hold.
  EXPECT_FALSE(prove_ipc({parse("~~x1")}, var(1)));
  EXPECT_TRUE(prove_ipc({glivenko(parse("~~x1"))}, glivenko(var(1))));
}

TEST(Glivenko, RespectsClassicalConsequence) {
  // Propositionally ~~ commutes with -> and &, so classical consequence is
  // reflected exactly.
  Rng rng(89);
  for (int i = 0; i < 150; ++i) {
    const Formula p = random_formula_upto(rng, 3, 4);
    const Formula g = random_formula_upto(rng, 3, 4);
    ASSERT_EQ(prove_ipc({glivenko(p)}, glivenko(g)), prove_classical({p}, g)) << print(p) << " |- " << print(g);
  }
}

TEST(ClassicalToIpc2, Examples) {
  auto& [k2, omega] = pipeline();
  EXPECT_TRUE(provable(classical_to_ipc2(omega, parse("x1 | ~x1"))));
  EXPECT_FALSE(provable(classical_to_ipc2(omega, var(1))));
  EXPECT_TRUE(prove_ipc({classical_to_ipc2(omega, var(1))}, classical_to_ipc2(omega, parse("x1 | x2"))));
  EXPECT_FALSE(prove_ipc({classical_to_ipc2(omega, parse("x1 | x2"))}, classical_to_ipc2(omega, var(1))));
  EXPECT_LE(max_variable(classical_to_ipc2(omega, parse("x3 -> x1"))), 2u);
  EXPECT_THROW(classical_to_ipc2(omega, var(9)), VariableBeyondBound);
}

TEST(ClassicalToIpc2, RespectsBoth) {
  // Pairs where the prover exhausts its budget are skipped and counted.
  auto& [k2, omega] = pipeline();
  ProverLimits limits;
  limits.time_budget = std::chrono::milliseconds(5000);
  Rng rng(97);
  int tautologies = 0, consequences = 0, completed = 0;
  for (int i = 0; i < 100; ++i) {
    const Formula p = random_formula_upto(rng, 2, 3);
    const Formula g = random_formula_upto(rng, 2, 3);
    try {
      const bool taut = prove_classical({}, g);
      ASSERT_EQ(provable(classical_to_ipc2(omega, g), limits), taut) << print(g);
      const bool cons = prove_classical({p}, g);
      ASSERT_EQ(prove_ipc({classical_to_ipc2(omega, p)}, classical_to_ipc2(omega, g), limits), cons)
          << print(p) << " |- " << print(g);
      tautologies += taut;
      consequences += cons;
      ++completed;
    } catch (const ProverTimeout&) {
      std::cout << "budget exhausted: " << print(p) << " |- " << print(g) << "\n";
    }
  }
  EXPECT_GE(completed, 95);
  EXPECT_GT(tautologies, 5);
  EXPECT_GT(consequences, 20);
}
