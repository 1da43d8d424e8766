#include "heyting/poset.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "heyting/io.hpp"
#include "heyting/prover.hpp"

namespace heyting {

namespace {

bool contains_sorted(const std::vector<NodeId>& sorted, NodeId u) {
  return std::binary_search(sorted.begin(), sorted.end(), u);
}

std::uint32_t node_level_over(const ModelSlice& k2, std::span<const NodeId> T) {
  std::uint32_t top = 0;
  for (NodeId t : T) top = std::max(top, k2.level(t));
  return top + 1;
}

}  // namespace

SigmaTree::SigmaTree(ModelSlice& k2, std::size_t depth_cap, std::size_t cone_cap)
    : k2_(&k2), chars_(k2), depth_cap_(depth_cap), cone_cap_(cone_cap) {
  if (k2.n() != 2) throw std::invalid_argument("the sigma tree lives in K_2");
}

std::vector<NodeId> SigmaTree::up_of(std::span<const NodeId> nodes) const {
  std::vector<NodeId> up;
  for (NodeId g : nodes) up.insert(up.end(), k2_->up_set(g).begin(), k2_->up_set(g).end());
  std::sort(up.begin(), up.end());
  up.erase(std::unique(up.begin(), up.end()), up.end());
  return up;
}

PermissiveFormula SigmaTree::permissive(std::vector<NodeId> generators) {
  std::sort(generators.begin(), generators.end());
  generators.erase(std::unique(generators.begin(), generators.end()), generators.end());
  if (generators.size() < 3) throw PosetError("a permissive formula needs at least three generators");
  for (NodeId g : generators)
    if (g >= k2_->size()) throw PosetError("generator " + std::to_string(g) + " is not in the slice");
  const std::uint32_t level = k2_->level(generators[0]);
  for (NodeId g : generators)
    if (k2_->level(g) != level) throw PosetError("permissive generators must share one level");

  // S is down-closed in K^level with the up-closed complement up(G), so d in
  // S is maximal iff all its immediate successors lie in up(G).
  const std::vector<NodeId> up = up_of(generators);
  std::vector<NodeId> maxS;
  for (NodeId u : k2_->level_nodes(0))
    if (!contains_sorted(up, u)) maxS.push_back(u);
  std::vector<NodeId> pool;
  for (NodeId u : up)
    if (k2_->level(u) < level) pool.push_back(u);
  std::vector<std::pair<std::vector<NodeId>, VarSet>> candidates;
  for_each_node_over(*k2_, pool, [&](std::span<const NodeId> T, VarSet U) {
    if (candidates.size() >= cone_cap_) throw CapExceeded("S enumeration passed the cone cap");
    candidates.emplace_back(std::vector<NodeId>(T.begin(), T.end()), U);
    return true;
  });
  for (auto& [T, U] : candidates) {
    const NodeId d = k2_->intern(std::move(T), U);
    if (!contains_sorted(up, d)) maxS.push_back(d);
  }
  std::sort(maxS.begin(), maxS.end());
  maxS.erase(std::unique(maxS.begin(), maxS.end()), maxS.end());
  k2_->sort_canonical(maxS);
  k2_->sort_canonical(generators);

  std::vector<Formula> phis, primes;
  for (NodeId g : generators) phis.push_back(chars_.phi(g));
  for (NodeId d : maxS) primes.push_back(chars_.phi_prime(d));
  PermissiveFormula pf;
  pf.formula = mk_and(mk_not(mk_not(disj(phis))), conj(primes));
  pf.generators = std::move(generators);
  pf.level = level;
  pf.maxS = std::move(maxS);
  return pf;
}

std::vector<NodeId> SigmaTree::cone_level(std::span<const NodeId> generators, std::uint32_t level) {
  if (generators.empty()) throw PosetError("cone of an empty generator set");
  std::uint32_t current = k2_->level(generators[0]);
  if (level <= current) throw PosetError("cone levels start above the generators");
  // Every node over T inside the cone is again in the cone, and a node of
  // the next level needs a member of the current one.
  std::vector<NodeId> pool = up_of(generators);
  std::vector<NodeId> layer;
  std::size_t visited = 0;
  while (current < level) {
    std::vector<std::pair<std::vector<NodeId>, VarSet>> candidates;
    for_each_node_over(*k2_, pool, [&](std::span<const NodeId> T, VarSet U) {
      if (++visited > cone_cap_) throw CapExceeded("cone enumeration passed the cap");
      if (node_level_over(*k2_, T) == current + 1) candidates.emplace_back(std::vector<NodeId>(T.begin(), T.end()), U);
      return true;
    });
    layer.clear();
    for (auto& [T, U] : candidates) layer.push_back(k2_->intern(std::move(T), U));
    std::sort(layer.begin(), layer.end());
    layer.erase(std::unique(layer.begin(), layer.end()), layer.end());
    pool.insert(pool.end(), layer.begin(), layer.end());
    std::sort(pool.begin(), pool.end());
    ++current;
  }
  k2_->sort_canonical(layer);
  return layer;
}

std::pair<std::vector<NodeId>, std::vector<NodeId>> SigmaTree::split_generators(std::span<const NodeId> generators) {
  const std::uint32_t level = k2_->level(generators[0]);
  // The cone grows without bound, so some level reaches six nodes.
  for (std::uint32_t target = level + 1;; ++target) {
    std::vector<NodeId> cone = cone_level(generators, target);
    if (cone.size() < 6) continue;
    return {{cone[0], cone[1], cone[2]}, {cone[3], cone[4], cone[5]}};
  }
}

std::pair<PermissiveFormula, PermissiveFormula> SigmaTree::split_permissive(const PermissiveFormula& pf) {
  auto [a, b] = split_generators(pf.generators);
  return {permissive(std::move(a)), permissive(std::move(b))};
}

const SigmaNode& SigmaTree::node(std::string_view sigma) {
  for (char c : sigma)
    if (c != '0' && c != '1') throw PosetError("sigma strings use only 0 and 1");
  if (sigma.size() > depth_cap_)
    throw CapExceeded("sigma of length " + std::to_string(sigma.size()) + " exceeds the depth cap " +
                      std::to_string(depth_cap_));
  const std::string key(sigma);
  if (auto it = nodes_.find(key); it != nodes_.end()) return it->second;
  if (sigma.empty()) return nodes_.emplace(key, SigmaNode{key, std::nullopt, top()}).first->second;

  const std::string parent_key(sigma.substr(0, sigma.size() - 1));
  const SigmaNode& parent = node(parent_key);
  // psi_e behaves as the permissive formula over all of level 0.
  const std::vector<NodeId> level0(k2_->level_nodes(0).begin(), k2_->level_nodes(0).end());
  auto [a, b] = split_generators(parent.pf ? std::span<const NodeId>(parent.pf->generators) : level0);
  PermissiveFormula left = permissive(std::move(a));
  PermissiveFormula right = permissive(std::move(b));
  const Formula fl = left.formula, fr = right.formula;
  nodes_.emplace(parent_key + "0", SigmaNode{parent_key + "0", std::move(left), fl});
  nodes_.emplace(parent_key + "1", SigmaNode{parent_key + "1", std::move(right), fr});
  return nodes_.at(key);
}

bool is_prefix(std::string_view prefix, std::string_view s) {
  return prefix.size() <= s.size() && s.substr(0, prefix.size()) == prefix;
}

bool prefix_implies(const Disjuncts& a, const Disjuncts& b) {
  return std::all_of(a.begin(), a.end(), [&](const std::string& s) {
    return std::any_of(b.begin(), b.end(), [&](const std::string& t) { return is_prefix(t, s); });
  });
}

Formula disjunction_formula(SigmaTree& tree, const Disjuncts& d) {
  std::vector<Formula> parts;
  for (const std::string& s : d) parts.push_back(tree.psi(s));
  return disj(parts);
}

CompleteSet::CompleteSet() { table_.emplace(0u, std::string{}); }

std::size_t CompleteSet::max_disjunct_length() const {
  std::size_t out = 0;
  for (const Disjuncts& d : elements_)
    for (const std::string& s : d) out = std::max(out, s.size());
  return out;
}

bool CompleteSet::is_up_closed(std::uint32_t mask) const {
  for (std::size_t i = 0; i < elements_.size(); ++i)
    if ((mask >> i & 1) && (up_[i] & ~mask) != 0) return false;
  return true;
}

std::pair<CompleteSet, Disjuncts> extend_complete(const CompleteSet& cs, const Position& position) {
  const std::size_t n = cs.size();
  if (n >= CompleteSet::kMaxElements)
    throw CapExceeded("complete sets are capped at " + std::to_string(CompleteSet::kMaxElements) + " elements");
  auto mask_of = [&](const std::vector<std::size_t>& ids) {
    std::uint32_t m = 0;
    for (std::size_t i : ids) {
      if (i >= n) throw PosetError("position names element " + std::to_string(i) + " of " + std::to_string(n));
      if (m >> i & 1) throw PosetError("position repeats element " + std::to_string(i));
      m |= 1u << i;
    }
    return m;
  };
  const std::uint32_t t1 = mask_of(position.below), t2 = mask_of(position.above), t3 = mask_of(position.incomparable);
  const std::uint32_t all = (1u << n) - 1;
  if ((t1 & t2) || (t1 & t3) || (t2 & t3) || (t1 | t2 | t3) != all)
    throw PosetError("T1, T2, T3 must partition the elements");
  for (std::size_t i = 0; i < n; ++i) {
    if (t2 >> i & 1 && (cs.up_[i] & ~t2)) throw PosetError("T2 is not up-closed");
    if (t1 >> i & 1 && (t2 & ~cs.up_[i])) throw PosetError("some element of T1 is not below all of T2");
    for (std::size_t j = 0; j < n; ++j)
      if (t1 >> i & 1 && cs.leq(j, i) && !(t1 >> j & 1)) throw PosetError("T1 is not down-closed");
  }

  Disjuncts phi;
  for (std::size_t i = 0; i < n; ++i)
    if (t1 >> i & 1) phi.insert(phi.end(), cs.elements_[i].begin(), cs.elements_[i].end());
  for (const auto& [s1, sigma] : cs.table_)
    if ((t2 & ~s1) == 0) phi.push_back(sigma + "0");
  std::sort(phi.begin(), phi.end());
  phi.erase(std::unique(phi.begin(), phi.end()), phi.end());

  CompleteSet out;
  out.elements_ = cs.elements_;
  out.elements_.push_back(phi);
  out.up_ = cs.up_;
  for (std::size_t i = 0; i < n; ++i)
    if (t1 >> i & 1) out.up_[i] |= 1u << n;
  out.up_.push_back(t2 | 1u << n);
  // The new disjuncts have length |sigma| + 1, so |sigma| + 2 suffices.
  out.length_ = cs.length_ + 2;
  out.table_.clear();
  const std::uint32_t bit = 1u << n;
  for (std::uint32_t mask = 0; mask < bit << 1; ++mask) {
    if (!out.is_up_closed(mask)) continue;
    const std::uint32_t s1 = mask & ~bit;
    std::string sigma = cs.table_.at(s1);
    if (mask & bit)
      sigma += '0';
    else if ((t2 & ~s1) == 0)
      sigma += '1';
    sigma.resize(out.length_, '0');
    out.table_.emplace(mask, std::move(sigma));
  }
  return {std::move(out), std::move(phi)};
}

namespace {

std::vector<CompletenessViolation> audit_with(const CompleteSet& cs,
                                              const std::function<bool(const std::string&, std::size_t)>& implies) {
  std::vector<CompletenessViolation> out;
  const std::size_t longest = cs.max_disjunct_length();
  for (std::uint32_t mask = 0; mask < (1u << cs.size()); ++mask)
    if (cs.is_up_closed(mask) && !cs.table().contains(mask)) out.push_back({mask, cs.size(), true});
  for (const auto& [mask, sigma] : cs.table()) {
    if (sigma.size() != cs.sigma_length() || (cs.size() > 0 && sigma.size() <= longest))
      out.push_back({mask, cs.size(), false});
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const bool expected = mask >> i & 1;
      if (implies(sigma, i) != expected) out.push_back({mask, i, expected});
    }
  }
  return out;
}

}  // namespace

std::vector<CompletenessViolation> audit_complete(const CompleteSet& cs) {
  return audit_with(cs, [&](const std::string& sigma, std::size_t i) {
    return prefix_implies({sigma}, cs.elements()[i]);
  });
}

std::vector<CompletenessViolation> audit_complete_prover(const CompleteSet& cs, SigmaTree& tree) {
  return audit_with(cs, [&](const std::string& sigma, std::size_t i) {
    return prove_ipc({tree.psi(sigma)}, disjunction_formula(tree, cs.elements()[i]));
  });
}

std::vector<std::vector<bool>> poset_closure(const PosetSpec& spec) {
  const std::size_t n = spec.elements.size();
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) {
    if (spec.elements[i].empty()) throw PosetError("empty element name");
    if (!index.emplace(spec.elements[i], i).second) throw PosetError("repeated element " + spec.elements[i]);
  }
  std::vector<std::vector<bool>> le(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) le[i][i] = true;
  for (const auto& [a, b] : spec.le) {
    auto ia = index.find(a), ib = index.find(b);
    if (ia == index.end() || ib == index.end()) throw PosetError("relation names an unknown element");
    le[ia->second][ib->second] = true;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (le[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (le[k][j]) le[i][j] = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (le[i][j] && le[j][i])
        throw PosetError("not a partial order: " + spec.elements[i] + " and " + spec.elements[j] + " lie on a cycle");
  return le;
}

PosetSpec parse_poset_json(const nlohmann::json& j) {
  PosetSpec out;
  try {
    out.elements = j.at("elements").get<std::vector<std::string>>();
    if (j.contains("le"))
      for (const auto& pair : j.at("le")) {
        if (!pair.is_array() || pair.size() != 2) throw PosetError("each relation is a pair [a, b]");
        out.le.emplace_back(pair[0].get<std::string>(), pair[1].get<std::string>());
      }
  } catch (const nlohmann::json::exception& e) {
    throw PosetError(std::string("malformed poset document: ") + e.what());
  }
  return out;
}

std::size_t PosetEmbedder::index_of(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw PosetError("unknown element " + name);
  return it->second;
}

const Disjuncts& PosetEmbedder::add(const std::string& name, const std::vector<std::string>& upper,
                                    const std::vector<std::string>& lower) {
  if (name.empty()) throw PosetError("empty element name");
  if (index_.contains(name)) throw PosetError("repeated element " + name);
  const std::size_t n = cs_.size();
  std::vector<bool> above(n, false), below(n, false);
  for (const std::string& u : upper) {
    const std::size_t i = index_of(u);
    for (std::size_t j = 0; j < n; ++j) above[j] = above[j] || cs_.leq(i, j);
  }
  for (const std::string& l : lower) {
    const std::size_t i = index_of(l);
    for (std::size_t j = 0; j < n; ++j) below[j] = below[j] || cs_.leq(j, i);
  }
  Position pos;
  for (std::size_t j = 0; j < n; ++j) {
    if (above[j] && below[j]) throw PosetError(name + " would equal " + names_[j]);
    (above[j] ? pos.above : below[j] ? pos.below : pos.incomparable).push_back(j);
  }
  for (std::size_t a : pos.below)
    for (std::size_t b : pos.above)
      if (!cs_.leq(a, b))
        throw PosetError(name + " would force " + names_[a] + " <= " + names_[b] + " between earlier elements");
  cs_ = extend_complete(cs_, pos).first;
  index_.emplace(name, n);
  names_.push_back(name);
  return cs_.elements().back();
}

bool PosetEmbedder::add_line(std::string_view line) {
  std::istringstream in{std::string(line)};
  std::string name;
  if (!(in >> name) || name[0] == '#') return false;
  std::vector<std::string> upper, lower;
  std::vector<std::string>* target = nullptr;
  for (std::string token; in >> token;) {
    if (token == "below")
      target = &upper;
    else if (token == "above")
      target = &lower;
    else if (!target)
      throw PosetError("expected 'below' or 'above' after " + name);
    else
      target->push_back(token);
  }
  add(name, upper, lower);
  return true;
}

PosetEmbedder embed_poset(const PosetSpec& spec) {
  const auto le = poset_closure(spec);
  PosetEmbedder emb;
  for (std::size_t i = 0; i < spec.elements.size(); ++i) {
    std::vector<std::string> upper, lower;
    for (std::size_t j = 0; j < i; ++j) {
      if (le[i][j]) upper.push_back(spec.elements[j]);
      if (le[j][i]) lower.push_back(spec.elements[j]);
    }
    emb.add(spec.elements[i], upper, lower);
  }
  return emb;
}

PosetEmbedder embed_poset_stream(std::istream& in) {
  PosetEmbedder emb;
  for (std::string line; std::getline(in, line);) emb.add_line(line);
  return emb;
}

std::vector<RelationMismatch> verify_embedding(const PosetEmbedder& emb, Verify mode, SigmaTree* tree) {
  if (mode == Verify::Prover && !tree) throw std::invalid_argument("prover verification needs a sigma tree");
  const CompleteSet& cs = emb.set();
  std::vector<Formula> images;
  if (mode == Verify::Prover)
    for (const Disjuncts& d : cs.elements()) images.push_back(disjunction_formula(*tree, d));
  std::vector<RelationMismatch> out;
  for (std::size_t a = 0; a < cs.size(); ++a)
    for (std::size_t b = 0; b < cs.size(); ++b) {
      const bool expected = cs.leq(a, b);
      const bool got = mode == Verify::Fast ? prefix_implies(cs.elements()[a], cs.elements()[b])
                                            : prove_ipc({images[a]}, images[b]);
      if (got != expected) out.push_back({a, b, expected});
    }
  return out;
}

std::vector<PosetSpec> poset_classes(std::size_t n) {
  if (n > 5) throw std::invalid_argument("poset classes are enumerated for n <= 5");
  // A strict order is a bitmask over ordered pairs (i, j), bit i*n + j for i < j.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  std::vector<std::size_t> perm(n);
  std::vector<std::uint32_t> codes;
  std::uint64_t states = 1;
  for (std::size_t k = 0; k < pairs.size(); ++k) states *= 3;
  for (std::uint64_t code = 0; code < states; ++code) {
    std::uint32_t rel = 0;
    std::uint64_t c = code;
    for (const auto& [i, j] : pairs) {
      const int s = static_cast<int>(c % 3);
      c /= 3;
      if (s == 1) rel |= 1u << (i * n + j);
      if (s == 2) rel |= 1u << (j * n + i);
    }
    auto lt = [&](std::uint32_t r, std::size_t i, std::size_t j) { return r >> (i * n + j) & 1; };
    bool transitive = true;
    for (std::size_t i = 0; i < n && transitive; ++i)
      for (std::size_t j = 0; j < n && transitive; ++j)
        for (std::size_t k = 0; k < n && transitive; ++k)
          if (lt(rel, i, j) && lt(rel, j, k) && !lt(rel, i, k)) transitive = false;
    if (!transitive) continue;
    std::iota(perm.begin(), perm.end(), 0);
    std::uint32_t best = rel;
    do {
      std::uint32_t r = 0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (lt(rel, i, j)) r |= 1u << (perm[i] * n + perm[j]);
      best = std::min(best, r);
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (best == rel) codes.push_back(rel);
  }
  std::sort(codes.begin(), codes.end());
  std::vector<PosetSpec> out;
  for (std::uint32_t rel : codes) {
    PosetSpec p;
    for (std::size_t i = 0; i < n; ++i) p.elements.push_back(std::to_string(i));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (rel >> (i * n + j) & 1) p.le.emplace_back(p.elements[i], p.elements[j]);
    out.push_back(std::move(p));
  }
  return out;
}

std::size_t LogicEmbedder::add(Formula sentence) {
  Position pos;
  for (std::size_t c = 0; c < representatives_.size(); ++c) {
    const bool down = entails_(representatives_[c], sentence);
    const bool up = entails_(sentence, representatives_[c]);
    if (down && up) return c;
    (up ? pos.above : down ? pos.below : pos.incomparable).push_back(c);
  }
  cs_ = extend_complete(cs_, pos).first;
  representatives_.push_back(sentence);
  return representatives_.size() - 1;
}

nlohmann::json embedding_json(const PosetEmbedder& emb, SigmaTree* tree, std::size_t max_formula_chars) {
  const CompleteSet& cs = emb.set();
  nlohmann::json elements = nlohmann::json::array();
  for (std::size_t i = 0; i < cs.size(); ++i) {
    nlohmann::json e = {{"name", emb.names()[i]}, {"disjuncts", cs.elements()[i]}};
    if (tree) e["formula"] = formula_json(disjunction_formula(*tree, cs.elements()[i]), max_formula_chars);
    elements.push_back(std::move(e));
  }
  nlohmann::json le = nlohmann::json::array();
  for (std::size_t a = 0; a < cs.size(); ++a)
    for (std::size_t b = 0; b < cs.size(); ++b)
      if (a != b && cs.leq(a, b)) le.push_back({emb.names()[a], emb.names()[b]});
  return {{"elements", std::move(elements)}, {"le", std::move(le)}, {"sigma_length", cs.sigma_length()}};
}

}  // namespace heyting
