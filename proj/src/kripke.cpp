#include "heyting/kripke.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>

#include "heyting/forcing.hpp"

namespace heyting {

FiniteModel::FiniteModel(std::vector<std::vector<std::uint32_t>> succ, std::vector<std::vector<std::uint32_t>> val)
    : succ_(std::move(succ)), val_(std::move(val)) {
  const std::size_t n = succ_.size();
  if (val_.size() != n) throw ModelError("valuation list length differs from node count");
  for (std::size_t u = 0; u < n; ++u) {
    for (std::uint32_t s : succ_[u])
      if (s >= n) throw ModelError("successor " + std::to_string(s) + " of node " + std::to_string(u) + " out of range");
    for (std::uint32_t v : val_[u])
      if (v == 0) throw ModelError("variable index 0 at node " + std::to_string(u));
    std::sort(val_[u].begin(), val_[u].end());
    val_[u].erase(std::unique(val_[u].begin(), val_[u].end()), val_[u].end());
  }

  // Topological order by DFS; a grey node reached again is a cycle.
  std::vector<int> colour(n, 0);
  std::vector<std::uint32_t> post;
  post.reserve(n);
  for (std::uint32_t root = 0; root < n; ++root) {
    if (colour[root] != 0) continue;
    std::vector<std::pair<std::uint32_t, std::size_t>> stack{{root, 0}};
    colour[root] = 1;
    while (!stack.empty()) {
      auto& [u, next] = stack.back();
      if (next < succ_[u].size()) {
        const std::uint32_t s = succ_[u][next++];
        if (s == u) continue;  // reflexive edges are harmless
        if (colour[s] == 1) throw ModelError("successor relation has a cycle through node " + std::to_string(s));
        if (colour[s] == 0) {
          colour[s] = 1;
          stack.emplace_back(s, 0);
        }
      } else {
        colour[u] = 2;
        post.push_back(u);
        stack.pop_back();
      }
    }
  }

  up_.assign(n, {});
  for (std::uint32_t u : post) {  // successors finish first
    std::vector<std::uint32_t> up{u};
    for (std::uint32_t s : succ_[u]) up.insert(up.end(), up_[s].begin(), up_[s].end());
    std::sort(up.begin(), up.end());
    up.erase(std::unique(up.begin(), up.end()), up.end());
    up_[u] = std::move(up);
  }

  for (std::uint32_t u = 0; u < n; ++u)
    for (std::uint32_t s : succ_[u])
      if (!std::includes(val_[s].begin(), val_[s].end(), val_[u].begin(), val_[u].end()))
        throw ModelError("persistence violated between node " + std::to_string(u) + " and " + std::to_string(s));

  hasse_.assign(n, {});
  for (std::uint32_t u = 0; u < n; ++u) {
    for (std::uint32_t v : up_[u]) {
      if (v == u) continue;
      bool cover = true;
      for (std::uint32_t w : up_[u]) {
        if (w == u || w == v) continue;
        if (leq(w, v)) {
          cover = false;
          break;
        }
      }
      if (cover) hasse_[u].push_back(v);
    }
  }
}

bool FiniteModel::forces_var(std::uint32_t u, std::uint32_t index) const {
  const auto& v = val_[u];
  return std::binary_search(v.begin(), v.end(), index);
}

bool FiniteModel::leq(std::uint32_t u, std::uint32_t v) const {
  const auto& up = up_.at(u);
  return std::binary_search(up.begin(), up.end(), v);
}

std::vector<std::uint32_t> FiniteModel::roots() const {
  std::vector<bool> has_pred(size(), false);
  for (std::uint32_t u = 0; u < size(); ++u)
    for (std::uint32_t v : up_[u])
      if (v != u) has_pred[v] = true;
  std::vector<std::uint32_t> out;
  for (std::uint32_t u = 0; u < size(); ++u)
    if (!has_pred[u]) out.push_back(u);
  return out;
}

nlohmann::json FiniteModel::to_json() const {
  return nlohmann::json{{"nodes", size()}, {"succ", succ_}, {"val", val_}};
}

FiniteModel FiniteModel::from_json(const nlohmann::json& j) {
  try {
    const auto n = j.at("nodes").get<std::size_t>();
    auto succ = j.at("succ").get<std::vector<std::vector<std::uint32_t>>>();
    auto val = j.at("val").get<std::vector<std::vector<std::uint32_t>>>();
    if (succ.size() != n) throw ModelError("\"succ\" has " + std::to_string(succ.size()) + " entries, expected " + std::to_string(n));
    if (val.size() != n) throw ModelError("\"val\" has " + std::to_string(val.size()) + " entries, expected " + std::to_string(n));
    return FiniteModel(std::move(succ), std::move(val));
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(std::string("malformed model JSON: ") + e.what());
  }
}

bool force(const FiniteModel& m, std::uint32_t node, Formula f) {
  if (node >= m.size()) throw std::out_of_range("node " + std::to_string(node) + " out of range");
  Forcing<FiniteModel> eval(m);
  return eval(node, f);
}

// ---------------------------------------------------------------------------

namespace {

// Strict order on 0..k-1 with 0 below everything and i<j whenever i below j.
struct Poset {
  std::size_t k;
  std::vector<std::vector<bool>> below;  // below[i][j]: i < j
};

std::vector<Poset> rooted_posets(std::size_t k) {
  std::vector<std::pair<std::size_t, std::size_t>> free_pairs;
  for (std::size_t i = 1; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) free_pairs.emplace_back(i, j);
  std::vector<Poset> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << free_pairs.size()); ++mask) {
    Poset p{k, std::vector<std::vector<bool>>(k, std::vector<bool>(k, false))};
    for (std::size_t j = 1; j < k; ++j) p.below[0][j] = true;
    for (std::size_t b = 0; b < free_pairs.size(); ++b)
      if (mask >> b & 1) p.below[free_pairs[b].first][free_pairs[b].second] = true;
    bool transitive = true;
    for (std::size_t i = 0; i < k && transitive; ++i)
      for (std::size_t j = i + 1; j < k && transitive; ++j)
        if (p.below[i][j])
          for (std::size_t l = j + 1; l < k; ++l)
            if (p.below[j][l] && !p.below[i][l]) {
              transitive = false;
              break;
            }
    if (transitive) out.push_back(std::move(p));
  }
  return out;
}

// Valuation tables indexed [node][var slot], built from one up-set per variable.
class ValuationOdometer {
 public:
  ValuationOdometer(const Poset& p, std::size_t vars) : p_(p), digits_(vars, 0) {
    for (std::uint32_t s = 0; s < (1u << p.k); ++s) {
      bool closed = true;
      for (std::size_t i = 0; i < p.k && closed; ++i)
        if (s >> i & 1)
          for (std::size_t j = 0; j < p.k; ++j)
            if (p.below[i][j] && !(s >> j & 1)) {
              closed = false;
              break;
            }
      if (closed) upsets_.push_back(s);
    }
  }

  std::uint32_t upset(std::size_t var_slot) const { return upsets_[digits_[var_slot]]; }

  bool advance() {
    for (std::size_t d = 0; d < digits_.size(); ++d) {
      if (++digits_[d] < upsets_.size()) return true;
      digits_[d] = 0;
    }
    return false;
  }

 private:
  const Poset& p_;
  std::vector<std::size_t> digits_;
  std::vector<std::uint32_t> upsets_;
};

struct BitFrame {
  const std::vector<std::vector<std::uint32_t>>* succ;
  std::vector<std::uint32_t> masks;       // per variable slot
  const std::vector<std::uint32_t>* vars; // variable index per slot
  std::size_t k;

  std::size_t size() const { return k; }
  const std::vector<std::uint32_t>& successors(std::uint32_t u) const { return (*succ)[u]; }
  bool forces_var(std::uint32_t u, std::uint32_t index) const {
    auto it = std::lower_bound(vars->begin(), vars->end(), index);
    if (it == vars->end() || *it != index) return false;
    return masks[static_cast<std::size_t>(it - vars->begin())] >> u & 1;
  }
};

}  // namespace

ConsequenceSearch semantic_consequence_search(std::span<const Formula> premises, Formula goal, std::size_t max_nodes,
                                              std::size_t budget) {
  std::vector<std::uint32_t> vars = variables(goal);
  for (Formula p : premises) {
    auto pv = variables(p);
    vars.insert(vars.end(), pv.begin(), pv.end());
  }
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());

  ConsequenceSearch result;
  for (std::size_t k = 1; k <= max_nodes; ++k) {
    for (const Poset& p : rooted_posets(k)) {
      std::vector<std::vector<std::uint32_t>> succ(k);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
          if (p.below[i][j]) succ[i].push_back(static_cast<std::uint32_t>(j));
      ValuationOdometer odo(p, vars.size());
      do {
        if (++result.evaluations > budget) {
          result.status = ConsequenceSearch::Status::BoundExhausted;
          return result;
        }
        BitFrame frame{&succ, {}, &vars, k};
        for (std::size_t v = 0; v < vars.size(); ++v) frame.masks.push_back(odo.upset(v));
        Forcing<BitFrame> eval(frame);
        bool premises_hold = true;
        for (Formula prem : premises)
          if (!eval(0, prem)) {
            premises_hold = false;
            break;
          }
        if (!premises_hold || eval(0, goal)) continue;

        std::vector<std::vector<std::uint32_t>> val(k);
        for (std::size_t v = 0; v < vars.size(); ++v)
          for (std::size_t u = 0; u < k; ++u)
            if (frame.masks[v] >> u & 1) val[u].push_back(vars[v]);
        FiniteModel model(succ, std::move(val));
        // Re-check on the validated model before reporting.
        bool ok = !force(model, 0, goal);
        for (Formula prem : premises) ok = ok && force(model, 0, prem);
        if (!ok) throw std::logic_error("countermodel failed re-verification");
        result.status = ConsequenceSearch::Status::Countermodel;
        result.model = std::move(model);
        result.node = 0;
        return result;
      } while (odo.advance());
    }
    result.nodes_searched = k;
  }
  result.status = ConsequenceSearch::Status::NoneUpTo;
  return result;
}

TwoSuccessorCheck two_successor_lemma_check(const FiniteModel& m, std::uint32_t node, Formula f) {
  using Status = TwoSuccessorCheck::Status;
  if (node >= m.size()) throw std::out_of_range("node " + std::to_string(node) + " out of range");
  const auto covers = m.immediate_successors(node);
  if (covers.size() != 2)
    return {Status::PreconditionFailed, "node has " + std::to_string(covers.size()) + " immediate successors"};
  const std::uint32_t a1 = covers[0];
  const std::uint32_t a2 = covers[1];
  Forcing<FiniteModel> eval(m);
  const std::vector<Formula> subs = subformulas(f);
  for (Formula g : subs)
    if (eval(a1, g) != eval(a2, g))
      return {Status::PreconditionFailed, "successors disagree on " + print(g)};
  for (std::uint32_t v : variables(f))
    if (m.forces_var(a1, v) && m.forces_var(a2, v) && !m.forces_var(node, v))
      return {Status::PreconditionFailed, "x" + std::to_string(v) + " forced by both successors but not at node"};
  for (Formula g : subs)
    if (eval(node, g) != eval(a1, g)) return {Status::Violated, "node differs from its successors on " + print(g)};
  return {Status::Holds, {}};
}

FiniteModel random_model(Rng& rng, const RandomModelShape& shape) {
  const std::size_t n = std::max<std::size_t>(shape.nodes, 1);
  std::bernoulli_distribution edge(shape.edge_probability);
  std::bernoulli_distribution bit(shape.valuation_probability);
  std::vector<std::vector<std::uint32_t>> succ(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (edge(rng)) succ[i].push_back(static_cast<std::uint32_t>(j));
  if (shape.rooted)
    for (std::size_t j = 1; j < n; ++j)
      if (std::find(succ[0].begin(), succ[0].end(), j) == succ[0].end()) succ[0].push_back(static_cast<std::uint32_t>(j));
  std::vector<std::vector<bool>> forced(n, std::vector<bool>(shape.variables + 1, false));
  for (std::size_t u = 0; u < n; ++u)
    for (std::uint32_t v = 1; v <= shape.variables; ++v)
      if (bit(rng)) forced[u][v] = true;
  for (std::size_t u = 0; u < n; ++u)
    for (std::uint32_t s : succ[u])
      for (std::uint32_t v = 1; v <= shape.variables; ++v)
        if (forced[u][v]) forced[s][v] = true;
  std::vector<std::vector<std::uint32_t>> val(n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::uint32_t v = 1; v <= shape.variables; ++v)
      if (forced[u][v]) val[u].push_back(v);
  return FiniteModel(std::move(succ), std::move(val));
}

}  // namespace heyting
