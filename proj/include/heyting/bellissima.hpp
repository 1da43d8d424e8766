// Bounded slices of the universal model K_n.
//
// Level 0 is node(U) for every U subset of {x1..xn}. A node of level k+1 is
// <T, U> where T is a nonempty antichain of nodes of level <= k containing a
// node of level exactly k, U is a subset of the variables forced by every
// member of T, and U is a proper subset of w(b) when T = {b}. The members of
// T are the immediate successors of <T, U>, and w(<T, U>) = U.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "heyting/formula.hpp"

namespace heyting {

using NodeId = std::uint32_t;
// Bit i-1 stands for x_i.
using VarSet = std::uint32_t;

inline constexpr std::uint32_t kMaxSliceVariables = 16;

std::vector<std::uint32_t> varset_indices(VarSet u);
VarSet varset_of(std::span<const std::uint32_t> indices);

struct BNode {
  NodeId id = 0;
  std::uint32_t level = 0;
  std::vector<NodeId> T;  // canonical order; empty iff level 0
  VarSet U = 0;
};

class SliceError : public std::runtime_error {
 public:
  SliceError(const std::string& what, std::uint32_t level_reached)
      : std::runtime_error(what), level_reached_(level_reached) {}
  // Highest level that was completed before the failure.
  std::uint32_t level_reached() const { return level_reached_; }

 private:
  std::uint32_t level_reached_;
};

class InvalidNode : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Levels 0..complete_level() are enumerated in full, in canonical order, so
// node ids agree with the canonical order there. Nodes of higher levels can
// be added one by one with intern(); ids then follow insertion, and
// canonical_less() gives the structural order. Every node's successors have
// smaller ids, so id order is a topological order of the reversed frame.
class ModelSlice {
 public:
  // Enumerates levels 0..max_level. Throws SliceError when the total node
  // count would exceed node_cap.
  ModelSlice(std::uint32_t n, std::uint32_t max_level, std::size_t node_cap = 2'000'000);

  std::uint32_t n() const { return n_; }
  std::uint32_t complete_level() const { return complete_level_; }
  std::size_t size() const { return nodes_.size(); }

  const BNode& node(NodeId id) const;
  std::uint32_t level(NodeId id) const { return node(id).level; }
  VarSet w(NodeId id) const { return node(id).U; }

  // Nodes of a complete level, in canonical order.
  std::span<const NodeId> level_nodes(std::uint32_t level) const;
  // All nodes of complete levels <= level.
  std::vector<NodeId> nodes_up_to(std::uint32_t level) const;
  // node(U) of level 0.
  NodeId level0(VarSet u) const;

  std::optional<NodeId> find(std::span<const NodeId> T, VarSet U) const;
  // Adds <T, U> (T in any order); validates every node invariant. Returns
  // the existing id when the node is already present.
  NodeId intern(std::vector<NodeId> T, VarSet U);
  // <r(T), U>.
  NodeId intern_reduced(std::vector<NodeId> T, VarSet U) { return intern(reduce_antichain(T), U); }

  // a <= b in the model order (b is above a).
  bool leq(NodeId a, NodeId b) const;
  bool comparable(NodeId a, NodeId b) const { return leq(a, b) || leq(b, a); }
  // Sorted by id; includes the node.
  std::span<const NodeId> up_set(NodeId a) const;
  // All present nodes b <= a.
  std::vector<NodeId> down_set(NodeId a) const;
  bool canonical_less(NodeId a, NodeId b) const;
  void sort_canonical(std::vector<NodeId>& ids) const;

  // Minimal elements; result in canonical order.
  std::vector<NodeId> reduce_antichain(std::span<const NodeId> T) const;
  bool is_antichain(std::span<const NodeId> T) const;

  // Frame interface.
  std::span<const NodeId> successors(NodeId u) const { return node(u).T; }
  bool forces_var(NodeId u, std::uint32_t index) const {
    return index >= 1 && index <= n_ && (node(u).U >> (index - 1) & 1);
  }

  // Re-validates every stored node; returns a description of the first
  // violation.
  std::optional<std::string> validate() const;

  nlohmann::json to_json() const;

 private:
  struct KeyHash {
    std::size_t operator()(const std::vector<NodeId>& k) const noexcept;
  };

  NodeId insert_unchecked(std::vector<NodeId> T, VarSet U, std::uint32_t level);
  std::optional<std::string> check(std::span<const NodeId> T, VarSet U) const;
  int compare(NodeId a, NodeId b) const;
  void enumerate_next_level(std::size_t node_cap);

  std::uint32_t n_;
  std::uint32_t complete_level_ = 0;
  std::vector<BNode> nodes_;
  std::vector<std::vector<NodeId>> up_;
  std::vector<std::vector<NodeId>> levels_;
  std::unordered_map<std::vector<NodeId>, NodeId, KeyHash> index_;  // key: U then sorted T
};

ModelSlice build_slice(std::uint32_t n, std::uint32_t max_level, std::size_t node_cap = 2'000'000);

// Exact forcing in K_n: a node's up-set is finite and lies in the slice.
// Throws std::invalid_argument when f mentions a variable above n.
bool force_at(const ModelSlice& slice, NodeId node, Formula f);

// Forcing with a memo that survives across queries on one slice. Interning
// new nodes keeps earlier answers valid.
class SliceEvaluator {
 public:
  explicit SliceEvaluator(const ModelSlice& slice);
  ~SliceEvaluator();
  bool operator()(NodeId node, Formula f);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// k(f) restricted to the slice: entry u is true iff u forces f. Computed
// bottom-up over id order, one pass per subformula.
std::vector<bool> truth_set(const ModelSlice& slice, Formula f);

// Calls visit(T, U) for every node of level `level` + 1 in canonical order,
// where `slice` is complete up to `level`. Stops early when visit returns
// false. Returns the number of nodes visited.
std::uint64_t stream_next_level(const ModelSlice& slice, std::uint32_t level,
                                const std::function<bool(std::span<const NodeId>, VarSet)>& visit);

// Calls visit(T, U) for every candidate node <T, U> with T a nonempty
// antichain of `pool` members (chosen in pool order) and U a subset of the
// variables forced by all of T, skipping the invalid <{b}, w(b)>. Candidates
// need not be present in the slice. Stops early when visit returns false.
void for_each_node_over(const ModelSlice& slice, std::span<const NodeId> pool,
                        const std::function<bool(std::span<const NodeId>, VarSet)>& visit);

// |Lev^n_i|. Throws SliceError when counting would need more than node_cap
// materialized nodes.
std::uint64_t level_count_exact(std::uint32_t n, std::uint32_t i, std::size_t node_cap = 2'000'000);
// Whether |Lev^n_i| > k, stopping as soon as k + 1 nodes are found.
bool level_count_exceeds(std::uint32_t n, std::uint32_t i, std::uint64_t k, std::size_t node_cap = 2'000'000);

}  // namespace heyting
