#include "heyting/selfcheck.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <set>
#include <stdexcept>
#include <utility>

#include <nlohmann/json.hpp>

#include "heyting/bellissima.hpp"
#include "heyting/charform.hpp"
#include "heyting/formula.hpp"
#include "heyting/interval.hpp"
#include "heyting/kripke.hpp"
#include "heyting/negative.hpp"
#include "heyting/nishimura.hpp"
#include "heyting/omega.hpp"
#include "heyting/oracles.hpp"
#include "heyting/poset.hpp"
#include "heyting/prover.hpp"
#include "heyting/random.hpp"

namespace heyting {
namespace {

using Clock = std::chrono::steady_clock;

class Failure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Failure(what);
}

struct Context {
  Rng rng;
  Clock::time_point start;
  std::chrono::milliseconds budget;

  // Prover limits that expire with the row budget; a timeout fails the row.
  ProverLimits limits() const {
    const auto left = budget - std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start);
    ProverLimits l;
    l.time_budget = std::max(left, std::chrono::milliseconds(1));
    return l;
  }
};

std::string pair_text(Formula a, Formula b) { return print(a) + " |- " + print(b); }

Formula depth_bounded(Rng& rng, std::uint32_t vars, std::size_t connectives, std::size_t depth) {
  for (;;) {
    const Formula f = random_formula_upto(rng, vars, connectives);
    if (implication_depth(f) <= depth) return f;
  }
}

std::string level_counts_row(Context&) {
  const ModelSlice k2(2, 1), k1(1, 1);
  const auto o2 = oracle::level_counts(2, 1);
  const auto o1 = oracle::level_counts(1, 1);
  const std::uint64_t expected2[] = {4, 18}, expected1[] = {2, 2};
  for (std::uint32_t level = 0; level <= 1; ++level) {
    const std::string at = " at level " + std::to_string(level);
    require(k2.level_nodes(level).size() == expected2[level], "K_2 construction count" + at);
    require(o2[level] == expected2[level], "K_2 oracle count" + at);
    require(k1.level_nodes(level).size() == expected1[level], "K_1 construction count" + at);
    require(o1[level] == expected1[level], "K_1 oracle count" + at);
  }
  return "K_2 4/18, K_1 2/2 by both enumerators";
}

std::string exceeds_row(Context&) {
  require(level_count_exceeds(2, 2, 18), "exceeds mode found at most 18 level-2 nodes of K_2");
  // Collect 19 level-2 nodes directly and confirm they are distinct.
  const ModelSlice k2(2, 1);
  std::set<std::pair<std::vector<NodeId>, VarSet>> seen;
  stream_next_level(k2, 1, [&](std::span<const NodeId> T, VarSet U) {
    seen.emplace(std::vector<NodeId>(T.begin(), T.end()), U);
    return seen.size() < 19;
  });
  require(seen.size() == 19, "streamed fewer than 19 distinct level-2 nodes");
  require(!level_count_exceeds(1, 1, 2), "K_1 level 1 exceeds 2 nodes");
  require(level_count_exact(1, 1) == 2 && level_count_exact(1, 0) == 2, "K_1 levels 0 and 1 differ from 2");
  return "19 distinct level-2 nodes; n = 1 stays at 2";
}

std::string charform_row(Context& ctx) {
  const ModelSlice k2(2, 1);
  CharTable table(k2);
  const CharReport report = verify_char_slice(table, 1);
  require(report.alphas == 22, "verify_char_slice covered " + std::to_string(report.alphas) + " nodes");
  require(report.ok(), std::to_string(report.violations.size()) + " characteristic formula violations");
  for (NodeId a = 0; a < k2.size(); ++a)
    for (NodeId b = 0; b < k2.size(); ++b)
      require(prove_ipc({table.phi(b)}, table.phi(a), ctx.limits()) == k2.leq(a, b),
              "phi order grid at " + std::to_string(a) + ", " + std::to_string(b));
  return "22 nodes, 0 violations, 484 prover pairs";
}

// Hand-picked pairs of implication depth at most 2; the corpus is topped up
// with seeded pairs of the same depth.
const char* const kCuratedPairs[][2] = {
    {"~~x1", "x1"},
    {"x1", "~~x1"},
    {"T", "x1 | ~x1"},
    {"T", "~x1 | ~~x1"},
    {"T", "(x1 -> x2) | (x2 -> x1)"},
    {"~(x1 & x2)", "~x1 | ~x2"},
    {"~x1 | ~x2", "~(x1 & x2)"},
    {"~(x1 | x2)", "~x1 & ~x2"},
    {"~x1 & ~x2", "~(x1 | x2)"},
    {"x1 -> x2", "~x2 -> ~x1"},
    {"~x2 -> ~x1", "x1 -> x2"},
    {"~~x1", "x1 | ~x1"},
    {"~x1 | x1", "x1 | ~x1"},
    {"~x1 -> x2", "x1 | x2"},
    {"x1 | x2", "~x1 -> x2"},
    {"~~(x1 & x2)", "~~x1 & ~~x2"},
    {"~~x1 & ~~x2", "~~(x1 & x2)"},
    {"~~(x1 | x2)", "~~x1 | ~~x2"},
    {"(x1 -> x2) -> x2", "x1 | x2"},
    {"x1 | x2", "(x1 -> x2) -> x2"},
    {"x1 & (x1 -> x2)", "x2"},
    {"F", "x1"},
    {"x1", "T"},
    {"x1 -> x2 | x1", "T"},
    {"~x1 | x2", "x1 -> x2"},
    {"x1 -> x2", "~x1 | x2"},
};

std::string exactness_row(Context& ctx) {
  const ModelSlice k2(2, 2);
  const std::vector<NodeId> nodes = k2.nodes_up_to(2);
  std::vector<std::pair<Formula, Formula>> corpus;
  for (const auto& p : kCuratedPairs) corpus.emplace_back(parse(p[0]), parse(p[1]));
  while (corpus.size() < 100)
    corpus.emplace_back(depth_bounded(ctx.rng, 2, 5, 2), depth_bounded(ctx.rng, 2, 5, 2));
  std::size_t unprovable = 0;
  for (const auto& [a, b] : corpus) {
    require(implication_depth(a) <= 2 && implication_depth(b) <= 2, "corpus pair too deep: " + pair_text(a, b));
    const std::vector<bool> ka = truth_set(k2, a), kb = truth_set(k2, b);
    const bool witness = std::any_of(nodes.begin(), nodes.end(), [&](NodeId u) { return ka[u] && !kb[u]; });
    const bool proved = prove_ipc({a}, b, ctx.limits());
    require(witness == !proved, "prover and slice witness disagree on " + pair_text(a, b));
    unprovable += !proved;
  }
  return "100 pairs agree, " + std::to_string(unprovable) + " unprovable";
}

std::string nishimura_row(Context& ctx) {
  using Tag = LadderPoint::Tag;
  constexpr std::uint32_t kTop = 6;
  std::vector<LadderPoint> points{{Tag::Bottom, 0}, {Tag::Top, 0}};
  for (std::uint32_t i = 1; i <= kTop; ++i) {
    points.push_back({Tag::Phi, i});
    points.push_back({Tag::Psi, i});
  }
  for (std::size_t a = 0; a < points.size(); ++a)
    for (std::size_t b = a + 1; b < points.size(); ++b)
      require(!equiv_ipc(ladder_formula(points[a]), ladder_formula(points[b]), ctx.limits()),
              points[a].str() + " and " + points[b].str() + " are equivalent");
  const std::vector<Formula> corpus = all_formulas(1, 3);
  for (Formula f : corpus) {
    LadderPoint p;
    try {
      p = classify(f, kTop, ctx.limits());
    } catch (const ClassifyCapExceeded&) {
      throw Failure("no ladder point up to index 6 for " + print(f));
    }
    require(equiv_ipc(f, ladder_formula(p), ctx.limits()), print(f) + " is not equivalent to " + p.str());
  }
  return std::to_string(corpus.size()) + " formulas, 14 distinct points";
}

std::string interval_m1_row(Context& ctx) {
  ModelSlice k2(2, 1);
  Interval iv(k2, 1);
  int positive = 0;
  for (int i = 0; i < 200; ++i) {
    const Formula a = random_formula_upto(ctx.rng, 1, 5);
    const Formula b = random_formula_upto(ctx.rng, 1, 5);
    const bool source = prove_ipc({a}, b, ctx.limits());
    require(source == prove_ipc({iv.f(a)}, iv.f(b), ctx.limits()), "embedding fails on " + pair_text(a, b));
    require(equiv_ipc(iv.h(iv.f(a)), a, ctx.limits()), "h(f(r)) differs from r = " + print(a));
    positive += source;
  }
  return "200 pairs, " + std::to_string(positive) + " consequences";
}

std::string interval_m2_row(Context& ctx) {
  ModelSlice k2(2, 2);
  Interval iv(k2, 2);
  const IntervalSpec& s = iv.spec();
  require(s.maxS == maxS_by_sweep(k2, s), "maxS differs from the level-2 sweep");
  const std::vector<bool> psi = truth_set(k2, s.psi), phi = truth_set(k2, s.phi);
  const std::vector<NodeId> range = iv.range_up_to_level(2);
  std::size_t violations = 0;
  for (NodeId u : k2.nodes_up_to(2)) {
    const bool ranged = std::binary_search(range.begin(), range.end(), u);
    violations += psi[u] != (phi[u] || ranged) || (phi[u] && ranged);
  }
  require(violations == 0, std::to_string(violations) + " slice audit violations");
  int positive = 0;
  for (int i = 0; i < 20; ++i) {
    const Formula a = depth_bounded(ctx.rng, 2, 4, 2);
    const Formula b = depth_bounded(ctx.rng, 2, 4, 2);
    const bool source = prove_ipc({a}, b, ctx.limits());
    require(source == prove_ipc({iv.f(a)}, iv.f(b), ctx.limits()), "embedding fails on " + pair_text(a, b));
    require(equiv_ipc(iv.h(iv.f(a)), a, ctx.limits()), "h(f(r)) differs from r = " + print(a));
    require(equiv_ipc(iv.h(iv.f(b)), b, ctx.limits()), "h(f(r)) differs from r = " + print(b));
    positive += source;
  }
  return std::to_string(s.maxS.size()) + " maximal S nodes, 0 audit violations, 20 pairs (" +
         std::to_string(positive) + " consequences)";
}

std::string omega_row(Context& ctx) {
  ModelSlice k2(2, 1);
  Omega om(k2, 4);
  const OmegaSpec& s = om.spec();
  for (std::size_t i = 1; i <= 4; ++i) {
    require(force_at(k2, s.beta[i][0], s.phi), "b^1_" + std::to_string(i) + " does not force phi");
    for (std::size_t j = 1; j < i; ++j)
      require(!k2.comparable(s.beta[i][0], s.beta[j][0]),
              "b^1_" + std::to_string(j) + " and b^1_" + std::to_string(i) + " are comparable");
  }
  static const std::uint32_t kConsidered[] = {1, 2};
  int pairs = 0, witnessed = 0;
  while (pairs < 10) {
    const Formula a = random_formula_upto(ctx.rng, 2, 3);
    const Formula b = random_formula_upto(ctx.rng, 2, 3);
    if (tree_size(a) > 5 || tree_size(b) > 5) continue;
    ++pairs;
    if (prove_ipc({a}, b, ctx.limits())) {
      require(prove_ipc({om.f(a)}, om.f(b), ctx.limits()), "image loses " + pair_text(a, b));
      continue;
    }
    // A countermodel injected into the target model refutes the image.
    const auto search = semantic_consequence_search(std::vector<Formula>{a}, b, 4);
    if (search.status == ConsequenceSearch::Status::Countermodel) {
      const NodeId w = om.inject_model(*search.model, kConsidered)[search.node];
      if (om.virtual_force(w, a) && !om.virtual_force(w, b)) {
        ++witnessed;
        continue;
      }
    }
    require(!prove_ipc({om.f(a)}, om.f(b), ctx.limits()), "image gains " + pair_text(a, b));
  }
  return "beta incomparable, 10 pairs, " + std::to_string(witnessed) + " negatives by witness";
}

std::string poset_row(Context&) {
  ModelSlice k2(2, 1);
  SigmaTree tree(k2);
  std::size_t classes4 = 0, by_prover = 0;
  for (std::size_t n = 1; n <= 4; ++n)
    for (const PosetSpec& spec : poset_classes(n)) {
      const PosetEmbedder emb = embed_poset(spec);
      const auto closure = poset_closure(spec);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          require(emb.set().leq(emb.index_of(spec.elements[i]), emb.index_of(spec.elements[j])) == closure[i][j],
                  "embedder order differs from the input poset");
      require(verify_embedding(emb, Verify::Fast).empty(), "fast verification mismatch on a " +
                                                              std::to_string(n) + "-element class");
      classes4 += n == 4;
      if (n <= 3) {
        require(verify_embedding(emb, Verify::Prover, &tree).empty(),
                "prover verification mismatch on a " + std::to_string(n) + "-element class");
        ++by_prover;
      }
    }
  require(classes4 == 16, std::to_string(classes4) + " four-element classes, expected 16");
  return "16 four-element classes, " + std::to_string(by_prover) + " small classes by prover";
}

std::string taxonomy_row(Context& ctx) {
  ModelSlice k2(2, 1);
  Interval iv(k2, 2);
  const Formula id = parse("x1 -> x1");
  require(!provable(iv.f(id), ctx.limits()), "f(x1 -> x1) is provable");
  require(provable(iv.f_lift(id), ctx.limits()), "lifted f(x1 -> x1) is unprovable");
  int split = 0;
  for (int i = 0; i < 50; ++i) {
    Formula a = depth_bounded(ctx.rng, 2, 3, 2);
    const Formula b = i % 3 == 0 ? mk_not(a) : depth_bounded(ctx.rng, 2, 3, 2);
    if (i % 5 == 0) a = mk_imp(b, b);
    const Formula d = mk_or(a, b);
    split += disjunction_split(d, ctx.limits()) != DisjunctionSplit::NotApplicable;
    require(equiv_ipc(iv.f_gate(d, ctx.limits()),
                      mk_or(iv.f_gate(a, ctx.limits()), iv.f_gate(b, ctx.limits())), ctx.limits()),
            "gate does not preserve " + print(d));
  }
  return "f not tautology-respecting, lift repairs it, 50 disjunctions (" + std::to_string(split) + " provable)";
}

std::string negative_row(Context& ctx) {
  int tautologies = 0;
  for (int i = 0; i < 300; ++i) {
    const Formula f = random_formula_upto(ctx.rng, 3, 6);
    const bool classical = prove_classical({}, f);
    require(provable(glivenko(f), ctx.limits()) == classical, "double negation disagrees on " + print(f));
    require(provable(godel_gentzen(f), ctx.limits()) == classical, "Godel-Gentzen disagrees on " + print(f));
    tautologies += classical;
  }
  return "300 formulas, " + std::to_string(tautologies) + " tautologies";
}

// A root below two submodels, valued by what both covers force; kept when
// the covers agree on every subformula.
std::optional<std::pair<FiniteModel, Formula>> lemma_instance(Rng& rng) {
  RandomModelShape shape;
  shape.nodes = 1 + rng() % 3;
  const FiniteModel left = random_model(rng, shape);
  shape.nodes = 1 + rng() % 3;
  const FiniteModel right = rng() % 2 ? left : random_model(rng, shape);
  std::vector<std::vector<std::uint32_t>> succ{{1, static_cast<std::uint32_t>(1 + left.size())}};
  std::vector<std::vector<std::uint32_t>> val(1);
  for (const FiniteModel* part : {&left, &right}) {
    const auto offset = static_cast<std::uint32_t>(succ.size());
    for (std::uint32_t u = 0; u < part->size(); ++u) {
      std::vector<std::uint32_t> s;
      for (std::uint32_t v : part->successors(u)) s.push_back(v + offset);
      succ.push_back(std::move(s));
      const auto forced = part->valuation(u);
      val.emplace_back(forced.begin(), forced.end());
    }
  }
  for (std::uint32_t v : val[1])
    if (std::find(val[1 + left.size()].begin(), val[1 + left.size()].end(), v) != val[1 + left.size()].end())
      val[0].push_back(v);
  FiniteModel m(std::move(succ), std::move(val));
  const Formula f = random_formula_upto(rng, 2, 5);
  if (two_successor_lemma_check(m, 0, f).status == TwoSuccessorCheck::Status::PreconditionFailed) return std::nullopt;
  return std::make_pair(std::move(m), f);
}

std::string lemma_fuzz_row(Context& ctx) {
  int instances = 0;
  std::size_t draws = 0;
  while (instances < 500) {
    require(++draws < 1'000'000, "too few precondition-satisfying instances");
    const auto inst = lemma_instance(ctx.rng);
    if (!inst) continue;
    const TwoSuccessorCheck r = two_successor_lemma_check(inst->first, 0, inst->second);
    require(r.status == TwoSuccessorCheck::Status::Holds, "lemma violated: " + r.detail);
    ++instances;
  }
  for (int i = 0; i < 500; ++i) {
    RandomModelShape shape;
    shape.nodes = 1 + i % 7;
    const FiniteModel m = random_model(ctx.rng, shape);
    const Formula f = random_formula_upto(ctx.rng, 2, 6);
    for (std::uint32_t u = 0; u < m.size(); ++u)
      if (force(m, u, f))
        for (std::uint32_t v : m.up_set(u)) require(force(m, v, f), "persistence fails for " + print(f));
  }
  return "500 lemma instances from " + std::to_string(draws) + " draws, 500 models";
}

struct Suite {
  const char* name;
  double budget_seconds;
  std::string (*run)(Context&);
};

const Suite kSuites[] = {
    {"levels", 1, level_counts_row},
    {"exceeds", 1, exceeds_row},
    {"charform", 60, charform_row},
    {"exactness", 60, exactness_row},
    {"nishimura", 30, nishimura_row},
    {"interval-m1", 60, interval_m1_row},
    {"interval-m2", 300, interval_m2_row},
    {"omega", 300, omega_row},
    {"poset", 120, poset_row},
    {"taxonomy", 60, taxonomy_row},
    {"negative", 60, negative_row},
    {"lemma-fuzz", 30, lemma_fuzz_row},
};

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const Suite& s : kSuites) v.emplace_back(s.name);
    return v;
  }();
  return names;
}

SuiteResult run_suite(std::string_view name, std::uint64_t base_seed) {
  const auto it = std::find_if(std::begin(kSuites), std::end(kSuites), [&](const Suite& s) { return s.name == name; });
  if (it == std::end(kSuites)) throw std::invalid_argument("unknown suite " + std::string(name));
  SuiteResult r;
  r.row = static_cast<std::uint32_t>(it - std::begin(kSuites)) + 1;
  r.name = it->name;
  r.budget_seconds = it->budget_seconds;
  Context ctx{Rng(base_seed + r.row), Clock::now(),
              std::chrono::milliseconds(static_cast<std::int64_t>(it->budget_seconds * 1000))};
  try {
    r.detail = it->run(ctx);
    r.passed = true;
  } catch (const Failure& e) {
    r.detail = e.what();
  } catch (const ProverTimeout& e) {
    r.detail = std::string("prover budget exhausted: ") + e.what();
  } catch (const std::exception& e) {
    r.detail = std::string("error: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - ctx.start).count();
  if (r.passed && r.seconds > r.budget_seconds) {
    r.passed = false;
    r.detail = "over budget; " + r.detail;
  }
  return r;
}

std::vector<SuiteResult> run_selfcheck(const std::vector<std::string>& names, std::uint64_t base_seed) {
  std::vector<SuiteResult> out;
  for (const std::string& n : names.empty() ? suite_names() : names) out.push_back(run_suite(n, base_seed));
  return out;
}

std::string format_row(const SuiteResult& r) {
  char head[96];
  std::snprintf(head, sizeof head, "%s %2u %-12s %8.2fs / %gs  ", r.passed ? "PASS" : "FAIL", r.row, r.name.c_str(),
                r.seconds, r.budget_seconds);
  return head + r.detail;
}

nlohmann::json result_json(const SuiteResult& r) {
  return {{"row", r.row},         {"suite", r.name},   {"passed", r.passed},
          {"seconds", r.seconds}, {"budget_seconds", r.budget_seconds}, {"detail", r.detail}};
}

}  // namespace heyting
