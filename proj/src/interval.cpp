#include "heyting/interval.hpp"

#include <algorithm>
#include <functional>
#include <nlohmann/json.hpp>

#include "heyting/io.hpp"

namespace heyting {

namespace {

bool contains_sorted(const std::vector<NodeId>& v, NodeId x) { return std::binary_search(v.begin(), v.end(), x); }

}  // namespace

Interval::Interval(ModelSlice& k2, std::uint32_t m) : k2_(&k2), chars_(k2), eval_(k2) {
  if (m < 1 || m > 3)
    throw UnsupportedParameters("interval embedding supports 1 <= m <= 3 into two variables; larger m needs "
                                "anchors at level 2 and S at level 3, which cannot be enumerated");
  if (k2.n() != 2) throw std::invalid_argument("interval embedding targets K_2");
  if (k2.complete_level() < 1) throw SliceError("interval embedding needs K_2 complete to level 1", k2.complete_level());
  spec_.m = m;
  if (m == 1) {
    spec_.i = 0;
    spec_.phi = bottom();
    spec_.psi = var(2);
    spec_.psi0 = spec_.psi;
    spec_.psi1 = top();
    return;
  }
  build_anchors();
  build_gammas();
  build_maxS();

  std::vector<Formula> parts;
  for (NodeId a : spec_.A) parts.push_back(chars_.phi(a));
  spec_.phi = disj(parts);
  parts.clear();
  for (NodeId g : spec_.gamma) parts.push_back(chars_.phi(g));
  spec_.psi0 = mk_not(mk_not(disj(parts)));
  parts.clear();
  for (NodeId r : spec_.maxS) parts.push_back(chars_.phi_prime(r));
  spec_.psi1 = conj(parts);
  spec_.psi = mk_and(spec_.psi0, spec_.psi1);

  // Level-0 nodes (level i - 1) inside k(phi).
  for (NodeId u : k2.level_nodes(0))
    if (eval_(u, spec_.phi)) guard_nodes_.push_back(u);
}

void Interval::build_anchors() {
  const std::uint32_t m = spec_.m;
  const std::vector<std::vector<NodeId>> pairs =
      m == 2 ? std::vector<std::vector<NodeId>>{{0, 1}, {2, 3}} : std::vector<std::vector<NodeId>>{{0, 1}, {1, 2}, {1, 3}};
  for (const auto& T : pairs) spec_.A.push_back(k2_->intern(T, 0));
  // Each anchor needs an immediate successor above no other anchor.
  for (NodeId a : spec_.A) {
    bool has_private = false;
    for (NodeId s : k2_->successors(a)) {
      bool shared = false;
      for (NodeId b : spec_.A)
        if (b != a && k2_->leq(b, s)) shared = true;
      if (!shared) has_private = true;
    }
    if (!has_private) throw std::logic_error("anchor without a private successor");
  }
}

void Interval::build_gammas() {
  const std::uint32_t m = spec_.m;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    std::vector<NodeId> T;
    for (std::uint32_t k = 0; k < m; ++k) {
      if (mask >> k & 1) {
        T.push_back(spec_.A[k]);
      } else {
        auto s = k2_->successors(spec_.A[k]);
        T.insert(T.end(), s.begin(), s.end());
      }
    }
    const std::vector<NodeId> reduced = k2_->reduce_antichain(T);
    if (reduced.size() < 2) throw std::logic_error("gamma with fewer than two successors");
    const NodeId g = k2_->intern(reduced, 0);
    const std::uint32_t expected = mask == 0 ? spec_.i : spec_.i + 1;
    if (k2_->level(g) != expected) throw std::logic_error("gamma at an unexpected level");
    spec_.gamma.push_back(g);
  }
  std::vector<NodeId> sorted = spec_.gamma;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw std::logic_error("gammas not distinct");
  for (NodeId g : spec_.gamma) {
    auto up = k2_->up_set(g);
    up_gamma_.insert(up_gamma_.end(), up.begin(), up.end());
  }
  std::sort(up_gamma_.begin(), up_gamma_.end());
  up_gamma_.erase(std::unique(up_gamma_.begin(), up_gamma_.end()), up_gamma_.end());
}

void Interval::build_maxS() {
  // S is down-closed in K^{i+1} and its complement there is the up-closed
  // union of the gamma up-sets, so rho in S is maximal iff every immediate
  // successor of rho is above some gamma.
  std::vector<NodeId> result;
  for (NodeId u : k2_->level_nodes(0))
    if (!contains_sorted(up_gamma_, u)) result.push_back(u);

  std::vector<NodeId> pool;
  for (NodeId u : up_gamma_)
    if (k2_->level(u) <= spec_.i) pool.push_back(u);
  std::vector<std::pair<std::vector<NodeId>, VarSet>> candidates;
  for_each_node_over(*k2_, pool, [&](std::span<const NodeId> T, VarSet U) {
    candidates.emplace_back(std::vector<NodeId>(T.begin(), T.end()), U);
    return true;
  });
  for (auto& [T, U] : candidates) {
    const NodeId rho = k2_->intern(T, U);
    if (!contains_sorted(up_gamma_, rho)) result.push_back(rho);
  }
  // Images of level-1 nodes of K_m can sit at level i + 1 next to gamma_{},
  // where they are in S as defined above; they must stay inside k(psi1).
  // No other node of level <= i + 1 lies below them, so dropping them
  // leaves exactly the maximal elements of the corrected S.
  spec_.range_low = range_up_to_level(spec_.i + 1);
  std::erase_if(result, [&](NodeId u) { return contains_sorted(spec_.range_low, u); });
  k2_->sort_canonical(result);
  result.erase(std::unique(result.begin(), result.end()), result.end());
  spec_.maxS = std::move(result);
}

GMap Interval::g_map(const ModelSlice& km, std::uint32_t max_level) {
  if (spec_.m < 2) throw std::logic_error("g is defined for m >= 2");
  if (km.n() != spec_.m) throw std::invalid_argument("g expects a slice of K_m");
  if (km.complete_level() < max_level)
    throw SliceError("K_m slice is not complete to level " + std::to_string(max_level), km.complete_level());
  const VarSet all = (VarSet{1} << spec_.m) - 1;
  GMap g;
  g.image.assign(km.size(), 0);
  for (NodeId b : km.nodes_up_to(max_level)) {
    const BNode& node = km.node(b);
    const VarSet missing = all & ~node.U;
    if (node.level == 0) {
      g.image[b] = spec_.gamma[missing];
      continue;
    }
    std::vector<NodeId> T;
    for (NodeId d : node.T) T.push_back(g.image[d]);
    for (std::uint32_t k = 0; k < spec_.m; ++k)
      if (missing >> k & 1) T.push_back(spec_.A[k]);
    const std::vector<NodeId> reduced = k2_->reduce_antichain(T);
    if (reduced.size() < 2) throw std::logic_error("g image with fewer than two successors");
    g.image[b] = k2_->intern(reduced, 0);
  }
  return g;
}

std::vector<NodeId> Interval::range_up_to_level(std::uint32_t max_level) {
  if (spec_.m < 2) throw std::logic_error("g is defined for m >= 2");
  if (max_level < spec_.i) return {};
  const std::uint32_t source_level = max_level - spec_.i;
  if (!km_ || km_->complete_level() < source_level) km_.emplace(spec_.m, source_level);
  GMap g = g_map(*km_, source_level);
  std::vector<NodeId> out;
  for (NodeId d : g.image)
    if (k2_->level(d) <= max_level) out.push_back(d);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Formula Interval::f(Formula rho) {
  if (auto it = f_memo_.find(rho); it != f_memo_.end()) return it->second;
  Formula out;
  switch (rho.kind()) {
    case Kind::Bottom:
      out = spec_.phi;
      break;
    case Kind::Top:
      out = mk_and(mk_imp(spec_.phi, spec_.phi), spec_.psi);
      break;
    case Kind::Var:
      if (rho.var() > spec_.m)
        throw std::invalid_argument("x" + std::to_string(rho.var()) + " is outside the " + std::to_string(spec_.m) +
                                    " source variables");
      out = spec_.m == 1 ? mk_and(var(1), var(2))
                         : mk_and(mk_or(chars_.phi_prime(spec_.A[rho.var() - 1]), spec_.phi), spec_.psi);
      break;
    case Kind::And:
      out = mk_and(f(rho.left()), f(rho.right()));
      break;
    case Kind::Or:
      out = mk_or(f(rho.left()), f(rho.right()));
      break;
    case Kind::Imp:
      out = mk_and(mk_imp(f(rho.left()), f(rho.right())), spec_.psi);
      break;
  }
  f_memo_.emplace(rho, out);
  return out;
}

Formula Interval::h(Formula rho) {
  if (auto it = h_memo_.find(rho); it != h_memo_.end()) return it->second;
  Formula out;
  switch (rho.kind()) {
    case Kind::Bottom:
      out = bottom();
      break;
    case Kind::Top:
      out = top();
      break;
    case Kind::Var:
      if (rho.var() > spec_.n) throw std::invalid_argument("h expects a formula over x1, x2");
      out = spec_.m == 1 ? (rho.var() == 1 ? var(1) : top()) : bottom();
      break;
    case Kind::And:
      out = mk_and(h(rho.left()), h(rho.right()));
      break;
    case Kind::Or:
      out = mk_or(h(rho.left()), h(rho.right()));
      break;
    case Kind::Imp: {
      if (max_variable(rho) > spec_.n) throw std::invalid_argument("h expects a formula over x1, x2");
      const Formula inner = mk_imp(h(rho.left()), h(rho.right()));
      if (spec_.m == 1) {
        out = inner;
        break;
      }
      bool refuted = false;
      for (NodeId d : guard_nodes_)
        if (!eval_(d, rho)) refuted = true;
      if (refuted) {
        out = bottom();
        break;
      }
      std::vector<Formula> parts{inner};
      for (std::uint32_t k = 0; k < spec_.m; ++k)
        if (!eval_(spec_.A[k], rho)) parts.push_back(var(k + 1));
      out = conj(parts);
      break;
    }
  }
  h_memo_.emplace(rho, out);
  return out;
}

Formula Interval::f_lift(Formula rho) { return mk_imp(f(top()), f(rho)); }

Formula Interval::f_gate(Formula rho, const ProverLimits& limits) {
  return provable(rho, limits) ? top() : f(rho);
}

nlohmann::json Interval::to_json(std::size_t max_formula_chars) {
  auto nodes = [&](const std::vector<NodeId>& ids) {
    nlohmann::json out = nlohmann::json::array();
    for (NodeId id : ids) out.push_back(node_json(*k2_, id));
    return out;
  };
  nlohmann::json gamma = nlohmann::json::object();
  for (std::size_t mask = 0; mask < spec_.gamma.size(); ++mask) {
    std::string key;
    for (std::uint32_t k = 0; k < spec_.m; ++k)
      if (mask >> k & 1) key += (key.empty() ? "a" : ",a") + std::to_string(k + 1);
    gamma[key.empty() ? "{}" : "{" + key + "}"] = node_json(*k2_, spec_.gamma[mask]);
  }
  return {{"m", spec_.m},
          {"n", spec_.n},
          {"i", spec_.i},
          {"A", nodes(spec_.A)},
          {"gamma", std::move(gamma)},
          {"maxS", nodes(spec_.maxS)},
          {"phi", formula_json(spec_.phi, max_formula_chars)},
          {"psi", formula_json(spec_.psi, max_formula_chars)},
          {"psi0", formula_json(spec_.psi0, max_formula_chars)},
          {"psi1", formula_json(spec_.psi1, max_formula_chars)}};
}

std::vector<NodeId> maxS_by_sweep(const ModelSlice& full, const IntervalSpec& spec) {
  if (full.complete_level() < spec.i + 1)
    throw SliceError("sweep needs the slice complete to level " + std::to_string(spec.i + 1), full.complete_level());
  std::vector<bool> in_S(full.size(), false);
  const std::vector<NodeId> scope = full.nodes_up_to(spec.i + 1);
  for (NodeId u : scope) {
    bool above_gamma = false;
    for (NodeId g : spec.gamma)
      if (full.leq(g, u)) above_gamma = true;
    in_S[u] = !above_gamma && !std::binary_search(spec.range_low.begin(), spec.range_low.end(), u);
  }
  std::vector<NodeId> out;
  for (NodeId u : scope) {
    if (!in_S[u]) continue;
    bool maximal = true;
    for (NodeId v : full.up_set(u))
      if (v != u && in_S[v]) maximal = false;
    if (maximal) out.push_back(u);
  }
  return out;
}

std::optional<std::string> check_g_map(const ModelSlice& k2, const ModelSlice& km, const IntervalSpec& spec,
                                       const GMap& g) {
  const std::size_t size = std::min(km.size(), g.image.size());
  for (NodeId a = 0; a < size; ++a) {
    for (std::uint32_t k = 1; k <= spec.m; ++k)
      if (km.forces_var(a, k) != !k2.leq(g.image[a], spec.A[k - 1]))
        return "valuation mismatch at K_m node " + std::to_string(a) + " for x" + std::to_string(k);
    for (NodeId b = 0; b < size; ++b)
      if (km.leq(a, b) != k2.leq(g.image[a], g.image[b]))
        return "order mismatch between K_m nodes " + std::to_string(a) + " and " + std::to_string(b);
  }
  return std::nullopt;
}

}  // namespace heyting
