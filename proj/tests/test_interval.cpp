#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "heyting/interval.hpp"
#include "heyting/random.hpp"

using namespace heyting;

namespace {

std::vector<NodeId> ids(std::initializer_list<NodeId> l) { return l; }

struct M2 {
  ModelSlice k2{2, 1};
  Interval iv{k2, 2};
};

M2& m2() {
  static M2 instance;
  return instance;
}

}  // namespace

TEST(IntervalSpec, RejectsUnsupportedM) {
  ModelSlice k2(2, 1);
  EXPECT_THROW(Interval(k2, 0), UnsupportedParameters);
  EXPECT_THROW(Interval(k2, 4), UnsupportedParameters);
}

TEST(IntervalSpec, M2Anchors) {
  auto& [k2, iv] = m2();
  const IntervalSpec& s = iv.spec();
  ASSERT_EQ(s.A.size(), 2u);
  EXPECT_EQ(k2.node(s.A[0]).T, ids({0, 1}));
  EXPECT_EQ(k2.node(s.A[1]).T, ids({2, 3}));
  ASSERT_EQ(s.gamma.size(), 4u);
  EXPECT_EQ(k2.node(s.gamma[0]).T, ids({0, 1, 2, 3}));
  EXPECT_EQ(k2.level(s.gamma[0]), 1u);
  for (std::size_t mask = 1; mask < 4; ++mask) EXPECT_EQ(k2.level(s.gamma[mask]), 2u);
  EXPECT_EQ(k2.node(s.gamma[3]).T.size(), 2u);
}

TEST(IntervalSpec, M2MaxS) {
  auto& [k2, iv] = m2();
  const IntervalSpec& s = iv.spec();
  std::vector<NodeId> level1;
  std::size_t level2 = 0;
  for (NodeId r : s.maxS) {
    if (k2.level(r) == 1) level1.push_back(r);
    if (k2.level(r) == 2) ++level2;
    EXPECT_LE(k2.level(r), 2u);
  }
  std::vector<NodeId> expected;
  for (NodeId u : k2.level_nodes(1))
    if (u != s.A[0] && u != s.A[1] && u != s.gamma[0]) expected.push_back(u);
  EXPECT_EQ(level1, expected);
  EXPECT_EQ(level1.size(), 15u);
  EXPECT_EQ(level2, 4u);
}

TEST(IntervalSpec, M3Family) {
  ModelSlice k2(2, 1);
  Interval iv(k2, 3);
  const IntervalSpec& s = iv.spec();
  EXPECT_EQ(s.gamma.size(), 8u);
  std::vector<NodeId> sorted = s.gamma;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(std::adjacent_find(sorted.begin(), sorted.end()), sorted.end());
  EXPECT_EQ(k2.level(s.gamma[0]), 1u);
}

TEST(IntervalSpec, M1Degenerate) {
  ModelSlice k2(2, 1);
  Interval iv(k2, 1);
  EXPECT_EQ(iv.spec().phi, bottom());
  EXPECT_EQ(iv.spec().psi, var(2));
  EXPECT_EQ(iv.f(var(1)), parse("x1 & x2"));
  EXPECT_EQ(iv.h(var(2)), top());
  EXPECT_EQ(iv.h(var(1)), var(1));
}

TEST(GMap, RulesAndInjection) {
  auto& [k2, iv] = m2();
  ModelSlice km(2, 1);
  GMap g = iv.g_map(km, 1);
  const IntervalSpec& s = iv.spec();
  EXPECT_EQ(g.image[km.level0(0)], s.gamma[3]);
  EXPECT_EQ(g.image[km.level0(3)], s.gamma[0]);
  EXPECT_EQ(check_g_map(k2, km, s, g), std::nullopt);
  EXPECT_THROW(iv.g_map(km, 2), SliceError);
}

TEST(F, StructuralRules) {
  auto& [k2, iv] = m2();
  const IntervalSpec& s = iv.spec();
  EXPECT_EQ(iv.f(bottom()), s.phi);
  Formula a = parse("x1 -> x2");
  Formula b = parse("~x2");
  EXPECT_EQ(iv.f(mk_and(a, b)), mk_and(iv.f(a), iv.f(b)));
  EXPECT_EQ(iv.f(mk_or(a, b)), mk_or(iv.f(a), iv.f(b)));
  EXPECT_THROW(iv.f(var(3)), std::invalid_argument);
  EXPECT_LT(dag_size(iv.f(parse("x1 & x1"))), tree_size(iv.f(parse("x1 & x1"))));
}

TEST(H, StructuralRules) {
  auto& [k2, iv] = m2();
  EXPECT_EQ(iv.h(parse("x1 | x2")), mk_or(bottom(), bottom()));
  EXPECT_EQ(iv.h(bottom()), bottom());
}

TEST(Export, Json) {
  auto& [k2, iv] = m2();
  nlohmann::json j = iv.to_json(1 << 20);
  EXPECT_EQ(j["m"], 2);
  EXPECT_EQ(j["maxS"].size(), 19u);
  EXPECT_TRUE(j["phi"].contains("text"));
  EXPECT_TRUE(iv.to_json(10)["psi"].contains("dag"));
}
