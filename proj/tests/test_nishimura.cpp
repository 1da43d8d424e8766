#include <gtest/gtest.h>

#include "heyting/nishimura.hpp"
#include "heyting/random.hpp"

using namespace heyting;
using Tag = LadderPoint::Tag;

TEST(Ladder, FirstRungs) {
  EXPECT_EQ(ladder(1), std::make_pair(parse("~x1"), parse("x1")));
  EXPECT_EQ(ladder(2), std::make_pair(parse("~x1 -> x1"), parse("~x1 | x1")));
  EXPECT_EQ(ladder(3).second, parse("(~x1 -> x1) | (~x1 | x1)"));
  EXPECT_THROW(ladder(0), std::invalid_argument);
}

TEST(Classify, Examples) {
  EXPECT_EQ(classify(parse("x1 -> x1")), (LadderPoint{Tag::Top, 0}));
  EXPECT_EQ(classify(parse("~~x1")), (LadderPoint{Tag::Phi, 2}));
  EXPECT_EQ(classify(bottom()), (LadderPoint{Tag::Bottom, 0}));
  EXPECT_EQ(classify(parse("x1 & ~x1")), (LadderPoint{Tag::Bottom, 0}));
  EXPECT_EQ(classify(parse("~~x1 -> x1")), (LadderPoint{Tag::Phi, 3}));
  EXPECT_THROW(classify(var(2)), std::invalid_argument);
  EXPECT_EQ(classify(parse("~~x1")).str(), "phi2");
}

TEST(Classify, CapIsAHardError) { EXPECT_THROW(classify(ladder(5).first, 3), ClassifyCapExceeded); }

TEST(Ladder, PointsUpToSixArePairwiseDistinct) {
  std::vector<LadderPoint> points{{Tag::Bottom, 0}, {Tag::Top, 0}};
  for (std::uint32_t i = 1; i <= 6; ++i) {
    points.push_back({Tag::Phi, i});
    points.push_back({Tag::Psi, i});
  }
  for (std::size_t a = 0; a < points.size(); ++a)
    for (std::size_t b = a + 1; b < points.size(); ++b)
      EXPECT_FALSE(equiv_ipc(ladder_formula(points[a]), ladder_formula(points[b])))
          << points[a].str() << " " << points[b].str();
}

TEST(Ladder, KnownOrderFacts) {
  EXPECT_TRUE(ladder_leq({Tag::Psi, 1}, {Tag::Psi, 2}));
  EXPECT_TRUE(ladder_leq({Tag::Phi, 1}, {Tag::Psi, 2}));
  EXPECT_FALSE(ladder_leq({Tag::Phi, 2}, {Tag::Psi, 1}));
}

TEST(Classify, EveryFormulaUpToThreeConnectives) {
  auto corpus = all_formulas(1, 3);
  EXPECT_GT(corpus.size(), 1000u);
  for (Formula f : corpus) {
    LadderPoint p = classify(f);
    ASSERT_TRUE(equiv_ipc(f, ladder_formula(p))) << print(f);
  }
}

TEST(Classify, InvariantUnderEquivalentRewrites) {
  Rng rng(17);
  FormulaShape shape;
  shape.variables = 1;
  for (int i = 0; i < 60; ++i) {
    shape.connectives = i % 6;
    Formula a = random_formula(rng, shape);
    Formula b = random_formula(rng, shape);
    EXPECT_EQ(classify(mk_and(a, b)), classify(mk_and(b, a)));
    EXPECT_EQ(classify(mk_not(mk_not(mk_not(a)))), classify(mk_not(a)));
    EXPECT_EQ(classify(mk_or(a, a)), classify(a));
  }
}
