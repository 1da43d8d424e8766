#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

#include "heyting/poset.hpp"
#include "heyting/prover.hpp"
#include "heyting/random.hpp"

using namespace heyting;

namespace {

struct Tree {
  ModelSlice k2{2, 1};
  SigmaTree tree{k2};
};

Tree& shared() {
  static Tree instance;
  return instance;
}

bool above_any(const ModelSlice& k2, std::span<const NodeId> gens, NodeId u) {
  return std::any_of(gens.begin(), gens.end(), [&](NodeId g) { return k2.leq(g, u); });
}

// u forces psi(G) iff every node of level <= Lev(G) above u is above G.
bool in_cone(const ModelSlice& k2, std::span<const NodeId> gens, NodeId u) {
  const std::uint32_t level = k2.level(gens[0]);
  for (NodeId v : k2.up_set(u))
    if (k2.level(v) <= level && !above_any(k2, gens, v)) return false;
  return true;
}

std::vector<std::string> strings_upto(std::size_t length) {
  std::vector<std::string> out{""};
  for (std::size_t k = 0; k < out.size(); ++k)
    if (out[k].size() < length) {
      out.push_back(out[k] + "0");
      out.push_back(out[k] + "1");
    }
  return out;
}

PosetSpec chain(std::size_t n) {
  PosetSpec p;
  for (std::size_t i = 0; i < n; ++i) p.elements.push_back("c" + std::to_string(i));
  for (std::size_t i = 0; i + 1 < n; ++i) p.le.emplace_back(p.elements[i], p.elements[i + 1]);
  return p;
}

}  // namespace

TEST(Permissive, LevelOneConeIsTheGenerators) {
  auto& [k2, tree] = shared();
  const auto level1 = k2.level_nodes(1);
  const PermissiveFormula pf = tree.permissive({level1[0], level1[7], level1[12]});
  EXPECT_EQ(pf.level, 1u);
  std::vector<NodeId> forced;
  for (NodeId u : level1)
    if (force_at(k2, u, pf.formula)) forced.push_back(u);
  EXPECT_EQ(forced, (std::vector<NodeId>{level1[0], level1[7], level1[12]}));
}

TEST(Permissive, MaximalSMatchesVerbatimS) {
  ModelSlice k2(2, 2);
  SigmaTree tree(k2);
  Rng rng(61);
  const auto level1 = k2.level_nodes(1);
  for (int round = 0; round < 12; ++round) {
    std::vector<NodeId> gens;
    while (gens.size() < 3 + round % 3) {
      NodeId g = level1[rng() % level1.size()];
      if (std::find(gens.begin(), gens.end(), g) == gens.end()) gens.push_back(g);
    }
    const PermissiveFormula pf = tree.permissive(gens);
    std::vector<Formula> phis, primes;
    for (NodeId g : gens) phis.push_back(tree.chars().phi(g));
    for (NodeId d : k2.nodes_up_to(1))
      if (!above_any(k2, gens, d)) primes.push_back(tree.chars().phi_prime(d));
    const Formula verbatim = mk_and(mk_not(mk_not(disj(phis))), conj(primes));
    EXPECT_TRUE(equiv_ipc(verbatim, pf.formula));
    for (NodeId d : pf.maxS) EXPECT_FALSE(above_any(k2, gens, d));
    const std::vector<bool> truth = truth_set(k2, pf.formula);
    for (NodeId u : k2.nodes_up_to(2)) ASSERT_EQ(truth[u], in_cone(k2, gens, u)) << u;
  }
}

TEST(Permissive, LevelZeroNodesAboveGeneratorsLeaveS) {
  auto& [k2, tree] = shared();
  const auto level1 = k2.level_nodes(1);
  const std::vector<NodeId> gens{level1[3], level1[4], level1[5]};
  const PermissiveFormula pf = tree.permissive(gens);
  for (NodeId u : k2.level_nodes(0)) {
    const bool excluded = std::find(pf.maxS.begin(), pf.maxS.end(), u) == pf.maxS.end();
    EXPECT_EQ(excluded, above_any(k2, gens, u)) << u;
  }
}

TEST(Permissive, Errors) {
  auto& [k2, tree] = shared();
  const auto level1 = k2.level_nodes(1);
  EXPECT_THROW(tree.permissive({level1[0], level1[1]}), PosetError);
  EXPECT_THROW(tree.permissive({level1[0], level1[1], level1[1]}), PosetError);
  EXPECT_THROW(tree.permissive({level1[0], level1[1], k2.level_nodes(0)[0]}), PosetError);
  EXPECT_THROW(tree.permissive({level1[0], level1[1], 1'000'000}), PosetError);
}

TEST(Split, LevelOneLandsAtLevelTwo) {
  ModelSlice k2(2, 2);
  SigmaTree tree(k2);
  const auto level1 = k2.level_nodes(1);
  const PermissiveFormula parent = tree.permissive({level1[0], level1[1], level1[2]});
  const auto [left, right] = tree.split_permissive(parent);
  for (const PermissiveFormula* child : {&left, &right}) {
    EXPECT_EQ(child->level, 2u);
    ASSERT_EQ(child->generators.size(), 3u);
    for (NodeId g : child->generators) {
      const auto& T = k2.node(g).T;
      EXPECT_TRUE(std::any_of(T.begin(), T.end(), [&](NodeId t) {
        return std::find(parent.generators.begin(), parent.generators.end(), t) != parent.generators.end();
      }));
      for (NodeId t : T) EXPECT_TRUE(in_cone(k2, parent.generators, t));
    }
    EXPECT_TRUE(prove_ipc({child->formula}, parent.formula));
    EXPECT_FALSE(prove_ipc({parent.formula}, child->formula));
  }
  for (NodeId g : left.generators)
    EXPECT_EQ(std::find(right.generators.begin(), right.generators.end(), g), right.generators.end());
  // Full level 2 is in the slice: the cones meet only below it.
  const std::vector<bool> a = truth_set(k2, left.formula);
  const std::vector<bool> b = truth_set(k2, right.formula);
  for (NodeId u : k2.nodes_up_to(2))
    if (a[u] && b[u]) EXPECT_LE(k2.level(u), 1u);
  // The six chosen nodes lead the canonical cone of level 2.
  const std::vector<NodeId> cone = tree.cone_level(parent.generators, 2);
  std::size_t swept = 0;
  for (NodeId u : k2.level_nodes(2)) swept += in_cone(k2, parent.generators, u);
  EXPECT_EQ(cone.size(), swept);
  EXPECT_EQ(std::vector<NodeId>(cone.begin(), cone.begin() + 3), left.generators);
  EXPECT_EQ(std::vector<NodeId>(cone.begin() + 3, cone.begin() + 6), right.generators);
}

TEST(Sigma, Examples) {
  auto& [k2, tree] = shared();
  EXPECT_EQ(tree.psi(""), top());
  EXPECT_TRUE(prove_ipc({tree.psi("01")}, tree.psi("0")));
  EXPECT_FALSE(prove_ipc({tree.psi("0")}, tree.psi("1")));
  // The first level-1 nodes, three per child.
  EXPECT_EQ(tree.node("0").pf->generators, (std::vector<NodeId>{4, 5, 6}));
  EXPECT_EQ(tree.node("1").pf->generators, (std::vector<NodeId>{7, 8, 9}));
  for (NodeId g : tree.node("1").pf->generators) {
    EXPECT_TRUE(force_at(k2, g, tree.psi("1")));
    EXPECT_FALSE(force_at(k2, g, tree.psi("0")));
  }
  EXPECT_THROW(tree.psi("012"), PosetError);
  EXPECT_THROW(tree.psi(std::string(tree.depth_cap() + 1, '0')), CapExceeded);
}

TEST(Sigma, ImplicationIsReversedPrefix) {
  auto& [k2, tree] = shared();
  const std::vector<std::string> all = strings_upto(3);
  for (const std::string& s : all)
    for (const std::string& t : all)
      ASSERT_EQ(prove_ipc({tree.psi(s)}, tree.psi(t)), is_prefix(t, s)) << s << " |- " << t;
}

TEST(Sigma, ChildrenGrowOneLevel) {
  auto& [k2, tree] = shared();
  for (const std::string& s : strings_upto(6)) {
    if (s.empty()) continue;
    const SigmaNode& node = tree.node(s);
    ASSERT_TRUE(node.pf.has_value());
    EXPECT_EQ(node.pf->level, s.size());
  }
}

TEST(Sigma, DisjunctionsFollowThePrefixRule) {
  auto& [k2, tree] = shared();
  const std::vector<std::string> all = strings_upto(3);
  Rng rng(67);
  auto draw = [&] {
    Disjuncts d;
    const std::size_t count = 1 + rng() % 3;
    while (d.size() < count) {
      const std::string& s = all[1 + rng() % (all.size() - 1)];
      if (std::find(d.begin(), d.end(), s) == d.end()) d.push_back(s);
    }
    std::sort(d.begin(), d.end());
    return d;
  };
  int positive = 0;
  for (int i = 0; i < 80; ++i) {
    const Disjuncts a = draw(), b = draw();
    const bool fast = prefix_implies(a, b);
    positive += fast;
    ASSERT_EQ(prove_ipc({disjunction_formula(tree, a)}, disjunction_formula(tree, b)), fast);
  }
  EXPECT_GT(positive, 5);
}

TEST(Complete, BaseCase) {
  const auto [cs, phi] = extend_complete(CompleteSet{}, Position{});
  EXPECT_EQ(phi, Disjuncts{"0"});
  const std::map<std::uint32_t, std::string> table{{0u, "10"}, {1u, "00"}};
  EXPECT_EQ(cs.table(), table);
  EXPECT_TRUE(audit_complete(cs).empty());
}

TEST(Complete, TopElementIsImpliedByAll) {
  auto& [k2, tree] = shared();
  CompleteSet cs = extend_complete(CompleteSet{}, Position{}).first;
  cs = extend_complete(cs, Position{{}, {}, {0}}).first;
  const auto [next, phi] = extend_complete(cs, Position{{0, 1}, {}, {}});
  const Formula top_image = disjunction_formula(tree, phi);
  for (std::size_t i = 0; i < 2; ++i) {
    const Formula below = disjunction_formula(tree, next.elements()[i]);
    EXPECT_TRUE(prove_ipc({below}, top_image));
    EXPECT_FALSE(prove_ipc({top_image}, below));
  }
  EXPECT_TRUE(audit_complete(next).empty());
}

TEST(Complete, IncomparableToSingleton) {
  auto& [k2, tree] = shared();
  const CompleteSet one = extend_complete(CompleteSet{}, Position{}).first;
  const auto [two, phi] = extend_complete(one, Position{{}, {}, {0}});
  const Formula a = disjunction_formula(tree, two.elements()[0]);
  const Formula b = disjunction_formula(tree, phi);
  EXPECT_FALSE(prove_ipc({a}, b));
  EXPECT_FALSE(prove_ipc({b}, a));
}

TEST(Complete, MalformedPositions) {
  CompleteSet cs = extend_complete(CompleteSet{}, Position{}).first;
  cs = extend_complete(cs, Position{{0}, {}, {}}).first;  // 0 <= 1
  EXPECT_THROW(extend_complete(cs, Position{{0}, {}, {}}), PosetError);         // 1 missing
  EXPECT_THROW(extend_complete(cs, Position{{0}, {0}, {1}}), PosetError);       // overlap
  EXPECT_THROW(extend_complete(cs, Position{{1}, {}, {0}}), PosetError);        // T1 not down-closed
  EXPECT_THROW(extend_complete(cs, Position{{}, {0}, {1}}), PosetError);        // T2 not up-closed
  EXPECT_THROW(extend_complete(cs, Position{{0, 1}, {2}, {}}), PosetError);     // unknown index
  EXPECT_NO_THROW(extend_complete(cs, Position{{}, {0, 1}, {}}));
  for (std::size_t n = 2; n < CompleteSet::kMaxElements; ++n) {
    Position p;
    for (std::size_t i = 0; i < n; ++i) p.below.push_back(i);
    cs = extend_complete(cs, p).first;
  }
  EXPECT_THROW(extend_complete(cs, Position{}), CapExceeded);
}

TEST(Complete, T1MustLieBelowT2) {
  CompleteSet cs = extend_complete(CompleteSet{}, Position{}).first;
  cs = extend_complete(cs, Position{{}, {}, {0}}).first;
  EXPECT_THROW(extend_complete(cs, Position{{0}, {1}, {}}), PosetError);
}

TEST(Complete, AuditAlongRandomBuilds) {
  Rng rng(71);
  for (int round = 0; round < 60; ++round) {
    CompleteSet cs;
    const std::size_t size = 1 + rng() % CompleteSet::kMaxElements;
    for (std::size_t n = 0; n < size; ++n) {
      // A random down-closed T1 and an up-closed T2 above it.
      std::vector<bool> lower(n, false), upper(n, false);
      for (std::size_t i = 0; i < n; ++i)
        if (rng() % 4 == 0)
          for (std::size_t j = 0; j < n; ++j) lower[j] = lower[j] || cs.leq(j, i);
      for (std::size_t i = 0; i < n; ++i) {
        if (lower[i] || rng() % 4 != 0) continue;
        bool fits = true;
        for (std::size_t j = 0; j < n; ++j)
          if (lower[j] && !cs.leq(j, i)) fits = false;
        if (fits)
          for (std::size_t j = 0; j < n; ++j) upper[j] = upper[j] || cs.leq(i, j);
      }
      Position p;
      for (std::size_t j = 0; j < n; ++j) (lower[j] ? p.below : upper[j] ? p.above : p.incomparable).push_back(j);
      const auto [next, phi] = extend_complete(cs, p);
      cs = next;
      ASSERT_TRUE(audit_complete(cs).empty()) << "round " << round << " size " << cs.size();
      for (std::size_t j = 0; j < n; ++j) {
        ASSERT_EQ(prefix_implies(cs.elements()[j], phi), lower[j]);
        ASSERT_EQ(prefix_implies(phi, cs.elements()[j]), upper[j]);
      }
    }
    EXPECT_EQ(cs.sigma_length(), 2 * cs.size());
  }
}

TEST(Complete, ProverAuditSmallSets) {
  auto& [k2, tree] = shared();
  for (std::size_t n = 1; n <= 3; ++n)
    for (const PosetSpec& p : poset_classes(n)) {
      const PosetEmbedder emb = embed_poset(p);
      EXPECT_TRUE(audit_complete_prover(emb.set(), tree).empty()) << n;
    }
}

TEST(Complete, ProverAuditFourAndFive) {
  // Two classes of each size; wide antichains take minutes, see the fast audit.
  auto& [k2, tree] = shared();
  for (std::size_t n : {4u, 5u}) {
    const std::vector<PosetSpec> classes = poset_classes(n);
    for (std::size_t c : {classes.size() / 2, classes.size() - 1}) {
      const PosetEmbedder emb = embed_poset(classes[c]);
      EXPECT_TRUE(audit_complete_prover(emb.set(), tree).empty()) << n << " class " << c;
      EXPECT_TRUE(verify_embedding(emb, Verify::Prover, &tree).empty()) << n << " class " << c;
    }
  }
}

TEST(Embed, ClassCounts) {
  const std::vector<std::size_t> expected{1, 1, 2, 5, 16, 63};
  for (std::size_t n = 0; n <= 5; ++n) EXPECT_EQ(poset_classes(n).size(), expected[n]) << n;
}

TEST(Embed, Examples) {
  auto& [k2, tree] = shared();
  auto image = [&](const PosetEmbedder& e, const std::string& name) {
    return disjunction_formula(tree, e.set().elements()[e.index_of(name)]);
  };
  const PosetEmbedder antichain = embed_poset({{"a", "b"}, {}});
  EXPECT_FALSE(prove_ipc({image(antichain, "a")}, image(antichain, "b")));
  EXPECT_FALSE(prove_ipc({image(antichain, "b")}, image(antichain, "a")));

  const PosetEmbedder two = embed_poset({{"a", "b"}, {{"a", "b"}}});
  EXPECT_TRUE(prove_ipc({image(two, "a")}, image(two, "b")));
  EXPECT_FALSE(prove_ipc({image(two, "b")}, image(two, "a")));

  const PosetEmbedder vee = embed_poset({{"r", "p", "q"}, {{"r", "p"}, {"r", "q"}}});
  int comparabilities = 0;
  for (const char* a : {"r", "p", "q"})
    for (const char* b : {"r", "p", "q"})
      if (std::string(a) != b) comparabilities += prove_ipc({image(vee, a)}, image(vee, b));
  EXPECT_EQ(comparabilities, 2);
  EXPECT_TRUE(prove_ipc({image(vee, "r")}, image(vee, "p")));
  EXPECT_TRUE(prove_ipc({image(vee, "r")}, image(vee, "q")));
}

TEST(Embed, AllFourElementClasses) {
  for (const PosetSpec& p : poset_classes(4)) {
    const PosetEmbedder emb = embed_poset(p);
    EXPECT_TRUE(verify_embedding(emb, Verify::Fast).empty());
    EXPECT_TRUE(audit_complete(emb.set()).empty());
  }
}

TEST(Embed, SmallClassesByProver) {
  auto& [k2, tree] = shared();
  for (std::size_t n = 1; n <= 3; ++n)
    for (const PosetSpec& p : poset_classes(n)) {
      const PosetEmbedder emb = embed_poset(p);
      EXPECT_TRUE(verify_embedding(emb, Verify::Prover, &tree).empty()) << n;
    }
}

TEST(Embed, ArrivalOrderDoesNotMatter) {
  // The same diamond arriving top first and bottom first.
  for (const std::vector<std::string>& order :
       {std::vector<std::string>{"t", "l", "r", "b"}, std::vector<std::string>{"b", "r", "l", "t"}}) {
    PosetSpec p{order, {{"b", "l"}, {"b", "r"}, {"l", "t"}, {"r", "t"}}};
    EXPECT_TRUE(verify_embedding(embed_poset(p), Verify::Fast).empty());
  }
  EXPECT_TRUE(verify_embedding(embed_poset(chain(8)), Verify::Fast).empty());
  EXPECT_THROW(embed_poset(chain(9)), CapExceeded);
}

TEST(Embed, JsonInput) {
  const auto j = nlohmann::json::parse(R"({"elements":["a","b","c"],"le":[["a","b"],["b","c"]]})");
  const PosetEmbedder emb = embed_poset(parse_poset_json(j));
  EXPECT_TRUE(emb.set().leq(0, 2));
  EXPECT_TRUE(verify_embedding(emb, Verify::Fast).empty());
  EXPECT_THROW(parse_poset_json(nlohmann::json::parse(R"({"le":[]})")), PosetError);
  EXPECT_THROW(parse_poset_json(nlohmann::json::parse(R"({"elements":["a"],"le":[["a"]]})")), PosetError);
  EXPECT_THROW(embed_poset(parse_poset_json(nlohmann::json::parse(R"({"elements":["a","b"],"le":[["a","b"],["b","a"]]})"))),
               PosetError);
  EXPECT_THROW(embed_poset(parse_poset_json(nlohmann::json::parse(R"({"elements":["a","a"]})"))), PosetError);
  EXPECT_THROW(embed_poset(parse_poset_json(nlohmann::json::parse(R"({"elements":["a"],"le":[["a","z"]]})"))),
               PosetError);
  const nlohmann::json out = embedding_json(emb);
  EXPECT_EQ(out["elements"].size(), 3u);
  EXPECT_EQ(out["le"].size(), 3u);
  EXPECT_EQ(out["sigma_length"], 6);
}

TEST(Embed, StreamInput) {
  std::istringstream in("# a streamed diamond\nb\nl above b\nr above b\n\nt above l r\n");
  const PosetEmbedder emb = embed_poset_stream(in);
  ASSERT_EQ(emb.names().size(), 4u);
  const auto& cs = emb.set();
  EXPECT_TRUE(cs.leq(emb.index_of("b"), emb.index_of("t")));
  EXPECT_FALSE(cs.leq(emb.index_of("l"), emb.index_of("r")));
  EXPECT_TRUE(verify_embedding(emb, Verify::Fast).empty());

  PosetEmbedder more = emb;
  more.add_line("m below t above l");
  EXPECT_TRUE(more.set().leq(emb.index_of("b"), more.index_of("m")));
  EXPECT_THROW(more.add_line("x below b above t"), PosetError);  // would equal b and t
  EXPECT_THROW(more.add_line("y below l above r"), PosetError);  // r is not below l
  EXPECT_THROW(more.add_line("z beside t"), PosetError);
  EXPECT_THROW(more.add_line("b"), PosetError);
  EXPECT_THROW(more.add_line("w above nowhere"), PosetError);
  EXPECT_TRUE(verify_embedding(more, Verify::Fast).empty());
}

TEST(Logic, ClassicalLindenbaumOrder) {
  LogicEmbedder emb([](Formula a, Formula b) { return prove_classical({a}, b); });
  Rng rng(73);
  std::vector<Formula> sentences;
  std::vector<std::size_t> cls;
  while (emb.set().size() < CompleteSet::kMaxElements && sentences.size() < 60) {
    Formula f = random_formula_upto(rng, 2, 3);
    sentences.push_back(f);
    cls.push_back(emb.add(f));
  }
  EXPECT_GT(emb.set().size(), 3u);
  EXPECT_LT(emb.set().size(), sentences.size());
  for (std::size_t i = 0; i < sentences.size(); ++i)
    for (std::size_t j = 0; j < sentences.size(); ++j)
      ASSERT_EQ(prove_classical({sentences[i]}, sentences[j]), prefix_implies(emb.image(cls[i]), emb.image(cls[j])))
          << print(sentences[i]) << " vs " << print(sentences[j]);
}
