#include <gtest/gtest.h>

#include "heyting/formula.hpp"
#include "heyting/random.hpp"

using namespace heyting;

TEST(Parse, ImplicationIsRightAssociative) {
  EXPECT_EQ(parse("x1 -> x2 -> x1"), mk_imp(var(1), mk_imp(var(2), var(1))));
}

TEST(Parse, NegationBindsTighterThanAnd) {
  EXPECT_EQ(parse("~x1 & x2"), mk_and(mk_imp(var(1), bottom()), var(2)));
}

TEST(Parse, Constants) {
  EXPECT_EQ(parse("F"), bottom());
  EXPECT_EQ(parse("T"), top());
  EXPECT_EQ(parse(" ( ( x12 ) ) "), var(12));
}

TEST(Parse, AndOrAreLeftAssociative) {
  EXPECT_EQ(parse("x1 & x2 & x3"), mk_and(mk_and(var(1), var(2)), var(3)));
  EXPECT_EQ(parse("x1 | x2 | x3"), mk_or(mk_or(var(1), var(2)), var(3)));
  EXPECT_EQ(parse("x1 | x2 & x3 -> x1"), mk_imp(mk_or(var(1), mk_and(var(2), var(3))), var(1)));
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse("x0"), ParseError);
  EXPECT_THROW(parse("x01"), ParseError);
  EXPECT_THROW(parse("x1 &"), ParseError);
  EXPECT_THROW(parse("(x1"), ParseError);
  EXPECT_THROW(parse("x1 x2"), ParseError);
  EXPECT_THROW(parse(""), ParseError);
  try {
    parse("x1 & & x2");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 5u);
  }
  EXPECT_THROW(var(0), std::invalid_argument);
}

TEST(Print, Sugar) {
  EXPECT_EQ(print(mk_imp(var(1), bottom())), "~x1");
  EXPECT_EQ(print(mk_and(mk_or(var(1), var(2)), var(3))), "(x1 | x2) & x3");
  EXPECT_EQ(print(top()), "T");
  EXPECT_EQ(print(bottom()), "F");
  EXPECT_EQ(print(parse("(x1 -> x2) -> x1")), "(x1 -> x2) -> x1");
  EXPECT_EQ(print(parse("x1 -> (x2 -> x1)")), "x1 -> x2 -> x1");
  EXPECT_EQ(print(parse("~(x1 & x2)")), "~(x1 & x2)");
  EXPECT_EQ(print(parse("~~x1")), "~~x1");
  EXPECT_EQ(print(parse("(x1 -> F) -> F")), "~~x1");
  EXPECT_EQ(print(parse("x1 & (x2 & x3)")), "x1 & (x2 & x3)");
}

TEST(Print, LimitedRefusesLongOutput) {
  Formula f = var(1);
  for (int i = 0; i < 20; ++i) f = mk_and(f, mk_or(f, var(2)));
  EXPECT_FALSE(print_limited(f, 1000).has_value());
  EXPECT_EQ(print_limited(var(3), 2), "x3");
  EXPECT_FALSE(print_limited(var(3), 1).has_value());
}

TEST(Store, Dedup) {
  Formula a = mk_imp(var(1), var(2));
  Formula b = mk_imp(var(1), var(2));
  EXPECT_EQ(a, b);
  EXPECT_NE(a, mk_imp(var(2), var(1)));
  EXPECT_TRUE(mk_not(var(1)).is_negation());
  EXPECT_EQ(bottom().id(), 0u);
  EXPECT_EQ(top().id(), 1u);
}

TEST(Size, SharedSubtermCountedOnce) {
  Formula s = mk_imp(var(1), var(1));
  Formula f = mk_and(s, s);
  EXPECT_EQ(dag_size(f), 3u);
  EXPECT_EQ(tree_size(f), 7u);
  EXPECT_EQ(dag_size(var(1)), 1u);
  EXPECT_EQ(tree_size(var(1)), 1u);
}

TEST(Size, TreeSizeSaturates) {
  Formula f = var(1);
  for (int i = 0; i < 80; ++i) f = mk_and(f, f);
  EXPECT_EQ(dag_size(f), 81u);
  EXPECT_EQ(tree_size(f), UINT64_MAX);
}

TEST(Traversal, VariablesAndDepth) {
  Formula f = parse("(x3 -> x1) -> x3 | ~x7");
  EXPECT_EQ(variables(f), (std::vector<std::uint32_t>{1, 3, 7}));
  EXPECT_EQ(max_variable(f), 7u);
  EXPECT_EQ(implication_depth(f), 2u);
  EXPECT_EQ(implication_depth(parse("x1 & x2")), 0u);
  auto subs = subformulas(f);
  EXPECT_EQ(subs.back(), f);
  EXPECT_EQ(subs.size(), dag_size(f));
}

TEST(Traversal, Substitute) {
  Formula f = parse("x1 -> x2 & x1");
  Formula g = substitute(f, [](std::uint32_t i) { return i == 1 ? parse("~x3") : var(i); });
  EXPECT_EQ(g, parse("~x3 -> x2 & ~x3"));
}

TEST(Property, RoundTripOnRandomFormulas) {
  Rng rng(7);
  for (int i = 0; i < 2000; ++i) {
    Formula f = random_formula_upto(rng, 4, 12);
    ASSERT_EQ(parse(print(f)), f) << print(f);
    ASSERT_EQ(dag_size(mk_and(f, f)), dag_size(f) + 1);
    ASSERT_LE(dag_size(f), tree_size(f));
  }
}
