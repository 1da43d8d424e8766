#include <gtest/gtest.h>

#include "heyting/charform.hpp"
#include "heyting/prover.hpp"

using namespace heyting;

namespace {

const ModelSlice& k2() {
  static const ModelSlice slice(2, 1);
  return slice;
}

}  // namespace

TEST(CharPair, MaximalNodes) {
  CharTable table(k2());
  const Formula top_node = table.phi(k2().level0(3));
  EXPECT_TRUE(equiv_ipc(top_node, parse("x1 & x2")));
  EXPECT_TRUE(equiv_ipc(table.phi(k2().level0(0)), parse("~x1 & ~x2")));
  // Exactly one level-0 node forces a maximal characteristic formula.
  for (VarSet u = 0; u < 4; ++u) {
    int forcing = 0;
    for (VarSet v = 0; v < 4; ++v) forcing += force_at(k2(), k2().level0(v), table.phi(k2().level0(u)));
    EXPECT_EQ(forcing, 1);
  }
}

TEST(CharPair, NodeForcesPhiButNotPhiPrime) {
  CharTable table(k2());
  for (NodeId a = 0; a < k2().size(); ++a) {
    auto [phi, phi_prime] = table.pair(a);
    EXPECT_TRUE(force_at(k2(), a, phi));
    EXPECT_FALSE(force_at(k2(), a, phi_prime));
    EXPECT_FALSE(prove_ipc({phi}, phi_prime));
  }
}

TEST(VerifySlice, LevelOneGridOfK2) {
  CharTable table(k2());
  CharReport r = verify_char_slice(table, 1);
  EXPECT_EQ(r.alphas, 22u);
  EXPECT_EQ(r.betas, 22u);
  EXPECT_TRUE(r.ok());
}

TEST(VerifySlice, K1UpToLevelTwo) {
  ModelSlice k1(1, 4);
  CharTable table(k1);
  CharReport r = verify_char_slice(table, 2);
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.alphas, 6u);
}

TEST(VerifySlice, LevelOneFormulasOverTheLevelTwoSlice) {
  ModelSlice full(2, 2);
  CharTable table(full);
  CharReport r = verify_char_slice(table, 1);
  EXPECT_EQ(r.betas, 265450u);
  EXPECT_TRUE(r.ok());
}

TEST(VerifySlice, SampledLevelTwoFormulas) {
  ModelSlice full(2, 2);
  CharTable table(full);
  auto level2 = full.level_nodes(2);
  for (std::size_t i = 0; i < level2.size(); i += 20011) {
    const NodeId a = level2[i];
    const auto k_phi = truth_set(full, table.phi(a));
    const auto k_prime = truth_set(full, table.phi_prime(a));
    for (NodeId b = 0; b < full.size(); ++b) {
      ASSERT_EQ(k_phi[b], full.leq(a, b)) << a << " " << b;
      ASSERT_EQ(k_prime[b], !full.leq(b, a)) << a << " " << b;
    }
  }
}

TEST(VerifySlice, MutationIsDetected) {
  CharTable table(k2());
  table.override_entry(7, parse("x1"), parse("~x1"));
  CharReport r = verify_char_slice(table, 1);
  EXPECT_FALSE(r.ok());
}

TEST(OrderReflection, ProverGridOnLevelOne) {
  CharTable table(k2());
  for (NodeId a = 0; a < k2().size(); ++a)
    for (NodeId b = 0; b < k2().size(); ++b) {
      ASSERT_EQ(prove_ipc({table.phi(b)}, table.phi(a)), k2().leq(a, b)) << a << " " << b;
      ASSERT_EQ(prove_ipc({table.phi(b)}, table.phi_prime(a)), !k2().leq(b, a)) << a << " " << b;
    }
}
