// Finite Kripke models with persistent valuations.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "heyting/formula.hpp"
#include "heyting/random.hpp"

namespace heyting {

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Nodes 0..size()-1. `succ` lists generate the order by reflexive-transitive
// closure; they need not be immediate. Construction rejects cycles and
// persistence violations.
class FiniteModel {
 public:
  FiniteModel(std::vector<std::vector<std::uint32_t>> succ, std::vector<std::vector<std::uint32_t>> val);

  std::size_t size() const { return succ_.size(); }
  std::span<const std::uint32_t> successors(std::uint32_t u) const { return succ_.at(u); }
  // Covers of u in the closure order.
  std::span<const std::uint32_t> immediate_successors(std::uint32_t u) const { return hasse_.at(u); }
  // Sorted variable indices forced at u.
  std::span<const std::uint32_t> valuation(std::uint32_t u) const { return val_.at(u); }
  bool forces_var(std::uint32_t u, std::uint32_t index) const;
  // u <= v: v is reachable from u.
  bool leq(std::uint32_t u, std::uint32_t v) const;
  std::span<const std::uint32_t> up_set(std::uint32_t u) const { return up_.at(u); }
  // Nodes with no predecessor.
  std::vector<std::uint32_t> roots() const;

  nlohmann::json to_json() const;
  static FiniteModel from_json(const nlohmann::json& j);

 private:
  std::vector<std::vector<std::uint32_t>> succ_;
  std::vector<std::vector<std::uint32_t>> val_;
  std::vector<std::vector<std::uint32_t>> up_;     // sorted, includes u
  std::vector<std::vector<std::uint32_t>> hasse_;  // sorted
};

// Throws std::out_of_range for a bad node index.
bool force(const FiniteModel& m, std::uint32_t node, Formula f);

struct ConsequenceSearch {
  enum class Status { Countermodel, NoneUpTo, BoundExhausted };
  Status status = Status::NoneUpTo;
  std::optional<FiniteModel> model;  // set for Countermodel
  std::uint32_t node = 0;            // the refuting node
  std::size_t nodes_searched = 0;    // largest model size fully examined
  std::size_t evaluations = 0;
};

// Exhaustive search over rooted posets with up to max_nodes nodes and all
// persistent valuations of the variables that occur. A Countermodel result
// is verified with `force` before it is returned. `budget` caps the number of
// (model, valuation) pairs examined.
ConsequenceSearch semantic_consequence_search(std::span<const Formula> premises, Formula goal,
                                              std::size_t max_nodes, std::size_t budget = 20'000'000);

struct TwoSuccessorCheck {
  enum class Status { Holds, Violated, PreconditionFailed };
  Status status = Status::Holds;
  std::string detail;
};

// Checks the two-immediate-successor agreement property at `node`: when the
// two covers agree on every subformula of f, and every variable of f they
// both force is forced at `node`, then `node` agrees with them on every
// subformula of f.
TwoSuccessorCheck two_successor_lemma_check(const FiniteModel& m, std::uint32_t node, Formula f);

struct RandomModelShape {
  std::size_t nodes = 4;
  std::uint32_t variables = 2;
  double edge_probability = 0.4;
  double valuation_probability = 0.3;
  bool rooted = true;  // node 0 below everything
};

// Edges only go from lower to higher index, so the result is acyclic;
// valuations are pushed upward along edges, so it is persistent.
FiniteModel random_model(Rng& rng, const RandomModelShape& shape);

}  // namespace heyting
