#include "heyting/omega.hpp"

#include <algorithm>
#include <functional>
#include <nlohmann/json.hpp>

#include "heyting/io.hpp"

namespace heyting {

namespace {

// The first four level-1 nodes, then the first later one with w nonempty.
std::array<NodeId, 5> pick_alphas(const ModelSlice& k2) {
  std::array<NodeId, 5> out{};
  auto level1 = k2.level_nodes(1);
  if (level1.size() < 5) throw std::logic_error("K_2 level 1 has fewer than five nodes");
  for (std::size_t k = 0; k < 4; ++k) out[k] = level1[k];
  for (std::size_t k = 4; k < level1.size(); ++k) {
    if (k2.w(level1[k]) != 0) {
      out[4] = level1[k];
      return out;
    }
  }
  throw std::logic_error("no level-1 node with a nonempty valuation");
}

}  // namespace

Omega::Omega(ModelSlice& k2, std::uint32_t var_bound, OmegaReading reading) : k2_(&k2), chars_(k2), eval_(k2) {
  if (k2.n() != 2) throw std::invalid_argument("omega embedding targets K_2");
  if (k2.complete_level() < 1) throw SliceError("omega embedding needs K_2 complete to level 1", k2.complete_level());
  spec_.reading = reading;
  spec_.alphas = pick_alphas(k2);

  for (NodeId u : k2.nodes_up_to(1)) {
    bool above4 = false;
    for (std::size_t k = 0; k < 4; ++k) above4 = above4 || k2.leq(spec_.alphas[k], u);
    if (above4) continue;
    spec_.S.push_back(u);
    if (!k2.leq(spec_.alphas[4], u)) spec_.T.push_back(u);
  }
  k2.sort_canonical(spec_.S);
  k2.sort_canonical(spec_.T);

  auto nn_or = [&](std::size_t count) {
    std::vector<Formula> parts;
    for (std::size_t k = 0; k < count; ++k) parts.push_back(chars_.phi(spec_.alphas[k]));
    return mk_not(mk_not(disj(parts)));
  };
  auto primes = [&](const std::vector<NodeId>& nodes) {
    std::vector<Formula> parts;
    for (NodeId b : nodes) parts.push_back(chars_.phi_prime(b));
    return conj(parts);
  };
  const Formula printed = mk_and(nn_or(4), primes(spec_.S));
  spec_.phi = reading == OmegaReading::Corrected ? mk_or(printed, chars_.phi(spec_.alphas[4])) : printed;
  spec_.psi = mk_and(nn_or(5), primes(spec_.T));

  spec_.beta.push_back({spec_.alphas[0], spec_.alphas[1], spec_.alphas[2], spec_.alphas[3]});
  extend(var_bound);
}

void Omega::extend(std::uint32_t var_bound) {
  while (spec_.beta.size() <= var_bound) {
    const auto& b = spec_.beta.back();
    std::array<NodeId, 4> next{
        k2_->intern({b[1], b[2]}, 0),
        k2_->intern({b[1], b[3]}, 0),
        k2_->intern({b[2], b[3]}, 0),
        k2_->intern({b[1], b[2], b[3]}, 0),
    };
    spec_.beta.push_back(next);
  }
  spec_.var_bound = std::max(spec_.var_bound, var_bound);
}

bool Omega::forces_phi(NodeId u) { return eval_(u, spec_.phi); }
bool Omega::forces_psi(NodeId u) { return eval_(u, spec_.psi); }

void Omega::check_vars(Formula f) const {
  const std::uint32_t top_var = max_variable(f);
  if (top_var > spec_.var_bound)
    throw VariableBeyondBound("x" + std::to_string(top_var) + " exceeds the materialized bound " +
                              std::to_string(spec_.var_bound) + "; extend the spec first");
}

bool Omega::virtual_force(NodeId node, Formula f) {
  check_vars(f);
  if (!forces_psi(node)) throw OutsideModel("node " + std::to_string(node) + " does not force psi");
  std::unordered_map<std::uint64_t, bool> memo;
  std::unordered_map<NodeId, bool> exploding;
  auto explodes = [&](NodeId v) {
    auto it = exploding.find(v);
    if (it != exploding.end()) return it->second;
    return exploding[v] = forces_phi(v);
  };
  std::function<bool(NodeId, Formula)> go = [&](NodeId v, Formula g) -> bool {
    if (explodes(v)) return true;
    const std::uint64_t key = (std::uint64_t{v} << 32) | g.id();
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    bool r = false;
    switch (g.kind()) {
      case Kind::Bottom:
        r = false;
        break;
      case Kind::Top:
        r = true;
        break;
      case Kind::Var:
        r = !k2_->leq(v, spec_.beta[g.var()][0]);
        break;
      case Kind::And:
        r = go(v, g.left()) && go(v, g.right());
        break;
      case Kind::Or:
        r = go(v, g.left()) || go(v, g.right());
        break;
      case Kind::Imp: {
        r = true;
        const std::vector<NodeId> up(k2_->up_set(v).begin(), k2_->up_set(v).end());
        for (NodeId w : up) {
          if (go(w, g.left()) && !go(w, g.right())) {
            r = false;
            break;
          }
        }
        break;
      }
    }
    memo.emplace(key, r);
    return r;
  };
  return go(node, f);
}

Formula Omega::f(Formula rho) {
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
      check_vars(rho);
      out = mk_and(mk_or(chars_.phi_prime(spec_.beta[rho.var()][0]), spec_.phi), spec_.psi);
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

std::vector<NodeId> Omega::inject_model(const FiniteModel& m, std::span<const std::uint32_t> considered_vars) {
  if (m.roots().size() != 1) throw ModelError("inject_model needs a rooted model");
  for (std::uint32_t i : considered_vars)
    if (i < 1 || i > spec_.var_bound)
      throw VariableBeyondBound("x" + std::to_string(i) + " is outside 1.." + std::to_string(spec_.var_bound));
  // Successors strictly shrink the up-set, so ascending up-set size is a
  // valid processing order.
  std::vector<std::uint32_t> order(m.size());
  for (std::uint32_t u = 0; u < m.size(); ++u) order[u] = u;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return m.up_set(a).size() < m.up_set(b).size(); });
  std::vector<NodeId> a(m.size(), 0);
  for (std::uint32_t g : order) {
    std::vector<NodeId> G{spec_.alphas[4]};
    for (std::uint32_t i : considered_vars)
      if (!m.forces_var(g, i)) G.push_back(spec_.beta[i][0]);
    for (std::uint32_t s : m.immediate_successors(g)) G.push_back(a[s]);
    std::sort(G.begin(), G.end());
    G.erase(std::unique(G.begin(), G.end()), G.end());
    const std::vector<NodeId> reduced = k2_->reduce_antichain(G);
    if (reduced.size() == 1 && k2_->w(reduced[0]) == 0) {
      a[g] = reduced[0];
      continue;
    }
    a[g] = k2_->intern(reduced, 0);
  }
  return a;
}

nlohmann::json Omega::to_json(std::size_t max_formula_chars) {
  auto nodes = [&](std::span<const NodeId> ids) {
    nlohmann::json out = nlohmann::json::array();
    for (NodeId u : ids) out.push_back(node_json(*k2_, u));
    return out;
  };
  nlohmann::json beta = nlohmann::json::array();
  for (const auto& row : spec_.beta) beta.push_back(nodes(row));
  return {{"alphas", nodes(spec_.alphas)},
          {"S", nodes(spec_.S)},
          {"T", nodes(spec_.T)},
          {"beta", std::move(beta)},
          {"var_bound", spec_.var_bound},
          {"reading", spec_.reading == OmegaReading::Corrected ? "corrected" : "as-printed"},
          {"phi", formula_json(spec_.phi, max_formula_chars)},
          {"psi", formula_json(spec_.psi, max_formula_chars)}};
}

}  // namespace heyting
