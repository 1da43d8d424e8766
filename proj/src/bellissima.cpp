#include "heyting/bellissima.hpp"

#include <algorithm>
#include <bit>
#include <nlohmann/json.hpp>
#include <string>

#include "heyting/forcing.hpp"

namespace heyting {

std::vector<std::uint32_t> varset_indices(VarSet u) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < 32; ++i)
    if (u >> i & 1) out.push_back(i + 1);
  return out;
}

VarSet varset_of(std::span<const std::uint32_t> indices) {
  VarSet u = 0;
  for (std::uint32_t i : indices) {
    if (i < 1 || i > 32) throw std::invalid_argument("variable index out of range: " + std::to_string(i));
    u |= VarSet{1} << (i - 1);
  }
  return u;
}

std::size_t ModelSlice::KeyHash::operator()(const std::vector<NodeId>& k) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ull;
  for (NodeId x : k) h = (h ^ x) * 0x100000001b3ull + (h >> 29);
  return static_cast<std::size_t>(h);
}

namespace {

std::vector<NodeId> index_key(std::span<const NodeId> T, VarSet U) {
  std::vector<NodeId> key;
  key.reserve(T.size() + 1);
  key.push_back(U);
  key.insert(key.end(), T.begin(), T.end());
  std::sort(key.begin() + 1, key.end());
  return key;
}

}  // namespace

ModelSlice::ModelSlice(std::uint32_t n, std::uint32_t max_level, std::size_t node_cap) : n_(n) {
  if (n < 1 || n > kMaxSliceVariables)
    throw std::invalid_argument("slice variable count must be in 1.." + std::to_string(kMaxSliceVariables));
  const std::size_t base = std::size_t{1} << n;
  if (base > node_cap) throw SliceError("node cap exceeded at level 0", 0);
  levels_.emplace_back();
  for (VarSet u = 0; u < base; ++u) levels_[0].push_back(insert_unchecked({}, u, 0));
  while (complete_level_ < max_level) enumerate_next_level(node_cap);
}

ModelSlice build_slice(std::uint32_t n, std::uint32_t max_level, std::size_t node_cap) {
  return ModelSlice(n, max_level, node_cap);
}

void ModelSlice::enumerate_next_level(std::size_t node_cap) {
  std::vector<std::pair<std::vector<NodeId>, VarSet>> fresh;
  const std::size_t room = node_cap > nodes_.size() ? node_cap - nodes_.size() : 0;
  bool capped = false;
  stream_next_level(*this, complete_level_, [&](std::span<const NodeId> T, VarSet U) {
    if (fresh.size() == room) {
      capped = true;
      return false;
    }
    fresh.emplace_back(std::vector<NodeId>(T.begin(), T.end()), U);
    return true;
  });
  if (capped)
    throw SliceError("node cap " + std::to_string(node_cap) + " exceeded while enumerating level " +
                         std::to_string(complete_level_ + 1),
                     complete_level_);
  const std::uint32_t level = complete_level_ + 1;
  levels_.emplace_back();
  levels_.back().reserve(fresh.size());
  for (auto& [T, U] : fresh) levels_.back().push_back(insert_unchecked(std::move(T), U, level));
  complete_level_ = level;
}

NodeId ModelSlice::insert_unchecked(std::vector<NodeId> T, VarSet U, std::uint32_t level) {
  const NodeId id = static_cast<NodeId>(nodes_.size());
  index_.emplace(index_key(T, U), id);
  std::vector<NodeId> up;
  for (NodeId t : T) {
    std::vector<NodeId> merged;
    merged.reserve(up.size() + up_[t].size());
    std::set_union(up.begin(), up.end(), up_[t].begin(), up_[t].end(), std::back_inserter(merged));
    up = std::move(merged);
  }
  up.push_back(id);
  up_.push_back(std::move(up));
  nodes_.push_back(BNode{id, level, std::move(T), U});
  return id;
}

const BNode& ModelSlice::node(NodeId id) const {
  if (id >= nodes_.size()) throw std::out_of_range("unknown node id " + std::to_string(id));
  return nodes_[id];
}

std::span<const NodeId> ModelSlice::level_nodes(std::uint32_t level) const {
  if (level > complete_level_)
    throw SliceError("level " + std::to_string(level) + " is beyond the complete levels of this slice",
                     complete_level_);
  return levels_[level];
}

std::vector<NodeId> ModelSlice::nodes_up_to(std::uint32_t level) const {
  std::vector<NodeId> out;
  for (std::uint32_t l = 0; l <= level; ++l) {
    auto ids = level_nodes(l);
    out.insert(out.end(), ids.begin(), ids.end());
  }
  return out;
}

NodeId ModelSlice::level0(VarSet u) const {
  if (u >= (VarSet{1} << n_)) throw std::invalid_argument("variable set outside V_n");
  return levels_[0][u];
}

std::optional<NodeId> ModelSlice::find(std::span<const NodeId> T, VarSet U) const {
  auto it = index_.find(index_key(T, U));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool ModelSlice::leq(NodeId a, NodeId b) const {
  const auto& up = up_.at(a);
  return std::binary_search(up.begin(), up.end(), b);
}

std::span<const NodeId> ModelSlice::up_set(NodeId a) const { return up_.at(a); }

std::vector<NodeId> ModelSlice::down_set(NodeId a) const {
  std::vector<NodeId> out;
  for (NodeId u = a; u < nodes_.size(); ++u)
    if (leq(u, a)) out.push_back(u);
  return out;
}

int ModelSlice::compare(NodeId a, NodeId b) const {
  if (a == b) return 0;
  const BNode& x = node(a);
  const BNode& y = node(b);
  if (x.level != y.level) return x.level < y.level ? -1 : 1;
  if (x.level <= complete_level_) return a < b ? -1 : 1;
  const std::size_t common = std::min(x.T.size(), y.T.size());
  for (std::size_t i = 0; i < common; ++i)
    if (int c = compare(x.T[i], y.T[i]); c != 0) return c;
  if (x.T.size() != y.T.size()) return x.T.size() < y.T.size() ? -1 : 1;
  return x.U < y.U ? -1 : (x.U > y.U ? 1 : 0);
}

bool ModelSlice::canonical_less(NodeId a, NodeId b) const { return compare(a, b) < 0; }

void ModelSlice::sort_canonical(std::vector<NodeId>& ids) const {
  std::sort(ids.begin(), ids.end(), [this](NodeId a, NodeId b) { return compare(a, b) < 0; });
}

std::vector<NodeId> ModelSlice::reduce_antichain(std::span<const NodeId> T) const {
  std::vector<NodeId> set(T.begin(), T.end());
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
  for (NodeId t : set) node(t);
  std::vector<NodeId> out;
  for (NodeId a : set) {
    bool minimal = true;
    for (NodeId b : set)
      if (b != a && leq(b, a)) {
        minimal = false;
        break;
      }
    if (minimal) out.push_back(a);
  }
  sort_canonical(out);
  return out;
}

bool ModelSlice::is_antichain(std::span<const NodeId> T) const {
  for (std::size_t i = 0; i < T.size(); ++i)
    for (std::size_t j = i + 1; j < T.size(); ++j)
      if (comparable(T[i], T[j])) return false;
  return true;
}

std::optional<std::string> ModelSlice::check(std::span<const NodeId> T, VarSet U) const {
  if (T.empty()) return "T must be nonempty";
  for (NodeId t : T)
    if (t >= nodes_.size()) return "unknown node id " + std::to_string(t) + " in T";
  std::vector<NodeId> sorted(T.begin(), T.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return "T has repeated members";
  if (!is_antichain(sorted)) return "T is not an antichain";
  if (U >= (VarSet{1} << n_)) return "U mentions variables beyond n";
  VarSet common = (VarSet{1} << n_) - 1;
  for (NodeId t : T) common &= nodes_[t].U;
  if ((U & ~common) != 0) return "U is not contained in the variables forced by every member of T";
  if (T.size() == 1 && U == common) return "singleton T requires U to be a proper subset of w of its member";
  return std::nullopt;
}

NodeId ModelSlice::intern(std::vector<NodeId> T, VarSet U) {
  if (auto problem = check(T, U)) throw InvalidNode(*problem);
  if (auto found = find(T, U)) return *found;
  std::uint32_t level = 0;
  for (NodeId t : T) level = std::max(level, nodes_[t].level + 1);
  if (level <= complete_level_) throw std::logic_error("valid node missing from a complete level");
  sort_canonical(T);
  return insert_unchecked(std::move(T), U, level);
}

std::optional<std::string> ModelSlice::validate() const {
  for (const BNode& b : nodes_) {
    const std::string where = "node " + std::to_string(b.id) + ": ";
    if (b.level == 0) {
      if (!b.T.empty()) return where + "level 0 with nonempty T";
      continue;
    }
    if (auto problem = check(b.T, b.U)) return where + *problem;
    std::uint32_t level = 0;
    for (NodeId t : b.T) {
      if (t >= b.id) return where + "successor with a larger id";
      level = std::max(level, nodes_[t].level + 1);
    }
    if (level != b.level) return where + "level does not match T";
    for (std::size_t i = 1; i < b.T.size(); ++i)
      if (!canonical_less(b.T[i - 1], b.T[i])) return where + "T not in canonical order";
    if (find(b.T, b.U) != b.id) return where + "index mismatch";
  }
  return std::nullopt;
}

nlohmann::json ModelSlice::to_json() const {
  nlohmann::json nodes = nlohmann::json::array();
  for (const BNode& b : nodes_)
    nodes.push_back({{"id", b.id}, {"level", b.level}, {"T", b.T}, {"U", varset_indices(b.U)}});
  return {{"n", n_}, {"nodes", std::move(nodes)}};
}

namespace {

void check_variables(const ModelSlice& slice, Formula f) {
  if (max_variable(f) > slice.n())
    throw std::invalid_argument("formula mentions x" + std::to_string(max_variable(f)) + " but the slice has n = " +
                                std::to_string(slice.n()));
}

}  // namespace

bool force_at(const ModelSlice& slice, NodeId node, Formula f) {
  check_variables(slice, f);
  slice.node(node);
  Forcing<ModelSlice> eval(slice);
  return eval(node, f);
}

struct SliceEvaluator::Impl {
  const ModelSlice* slice;
  Forcing<ModelSlice> eval;
  explicit Impl(const ModelSlice& s) : slice(&s), eval(s) {}
};

SliceEvaluator::SliceEvaluator(const ModelSlice& slice) : impl_(std::make_unique<Impl>(slice)) {}
SliceEvaluator::~SliceEvaluator() = default;

bool SliceEvaluator::operator()(NodeId node, Formula f) {
  check_variables(*impl_->slice, f);
  impl_->slice->node(node);
  return impl_->eval(node, f);
}

std::vector<bool> truth_set(const ModelSlice& slice, Formula f) {
  check_variables(slice, f);
  const std::size_t size = slice.size();
  const std::vector<Formula> order = subformulas(f);
  std::unordered_map<std::uint32_t, std::size_t> slot;
  slot.reserve(order.size());
  std::vector<std::vector<bool>> value(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Formula g = order[i];
    slot.emplace(g.id(), i);
    std::vector<bool>& v = value[i];
    switch (g.kind()) {
      case Kind::Bottom:
        v.assign(size, false);
        break;
      case Kind::Top:
        v.assign(size, true);
        break;
      case Kind::Var:
        v.resize(size);
        for (NodeId u = 0; u < size; ++u) v[u] = slice.forces_var(u, g.var());
        break;
      case Kind::And:
      case Kind::Or: {
        const auto& a = value[slot.at(g.left().id())];
        const auto& b = value[slot.at(g.right().id())];
        v.resize(size);
        for (NodeId u = 0; u < size; ++u) v[u] = g.is(Kind::And) ? (a[u] && b[u]) : (a[u] || b[u]);
        break;
      }
      case Kind::Imp: {
        const auto& a = value[slot.at(g.left().id())];
        const auto& b = value[slot.at(g.right().id())];
        v.resize(size);
        for (NodeId u = 0; u < size; ++u) {
          bool ok = !a[u] || b[u];
          for (NodeId s : slice.successors(u)) {
            if (!ok) break;
            ok = v[s];
          }
          v[u] = ok;
        }
        break;
      }
    }
  }
  return std::move(value.back());
}

void for_each_node_over(const ModelSlice& slice, std::span<const NodeId> pool,
                        const std::function<bool(std::span<const NodeId>, VarSet)>& visit) {
  const VarSet all = (VarSet{1} << slice.n()) - 1;
  std::vector<NodeId> chosen;
  std::function<bool(std::size_t, VarSet)> dfs = [&](std::size_t next, VarSet common) {
    if (!chosen.empty()) {
      for (VarSet u = 0;; u = (u - common) & common) {
        if (!(chosen.size() == 1 && u == common) && !visit(chosen, u)) return false;
        if (u == common) break;
      }
    }
    for (std::size_t j = next; j < pool.size(); ++j) {
      bool free = true;
      for (NodeId x : chosen)
        if (slice.comparable(x, pool[j])) free = false;
      if (!free) continue;
      chosen.push_back(pool[j]);
      const bool go_on = dfs(j + 1, common & slice.w(pool[j]));
      chosen.pop_back();
      if (!go_on) return false;
    }
    return true;
  };
  dfs(0, all);
}

std::uint64_t stream_next_level(const ModelSlice& slice, std::uint32_t level,
                                const std::function<bool(std::span<const NodeId>, VarSet)>& visit) {
  const std::vector<NodeId> candidates = slice.nodes_up_to(level);
  const VarSet all = (VarSet{1} << slice.n()) - 1;
  std::vector<NodeId> chosen;
  std::uint64_t visited = 0;
  bool stop = false;

  // Depth-first over antichains in lexicographic order of their sorted ids;
  // `tops` counts chosen members of the top level, `common` is the
  // intersection of their valuations.
  std::function<void(std::size_t, std::size_t, VarSet)> dfs = [&](std::size_t next, std::size_t tops, VarSet common) {
    if (tops > 0) {
      const bool singleton = chosen.size() == 1;
      for (VarSet u = 0;; u = (u - common) & common) {
        if (!(singleton && u == common)) {
          ++visited;
          if (!visit(chosen, u)) {
            stop = true;
            return;
          }
        }
        if (u == common) break;
      }
    }
    for (std::size_t j = next; j < candidates.size() && !stop; ++j) {
      const NodeId c = candidates[j];
      bool free = true;
      for (NodeId x : chosen)
        if (slice.comparable(x, c)) {
          free = false;
          break;
        }
      if (!free) continue;
      chosen.push_back(c);
      dfs(j + 1, tops + (slice.level(c) == level ? 1 : 0), common & slice.w(c));
      chosen.pop_back();
    }
  };
  dfs(0, 0, all);
  return visited;
}

std::uint64_t level_count_exact(std::uint32_t n, std::uint32_t i, std::size_t node_cap) {
  if (i == 0) return std::uint64_t{1} << n;
  ModelSlice slice(n, i - 1, node_cap);
  return stream_next_level(slice, i - 1, [](std::span<const NodeId>, VarSet) { return true; });
}

bool level_count_exceeds(std::uint32_t n, std::uint32_t i, std::uint64_t k, std::size_t node_cap) {
  if (i == 0) return (std::uint64_t{1} << n) > k;
  ModelSlice slice(n, i - 1, node_cap);
  std::uint64_t seen = 0;
  stream_next_level(slice, i - 1, [&](std::span<const NodeId>, VarSet) { return ++seen <= k; });
  return seen > k;
}

}  // namespace heyting
