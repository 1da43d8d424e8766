// Intuitionistic consequence by SAT with implication refinement. Every
// subformula is named by one solver variable, so shared subformulas are
// encoded once. Definitions give flat clauses plus, for each p = a -> b, the
// implication clause (a -> b) -> p. A classical countermodel M of the goal is
// accepted only when every implication clause false in M has a successor
// world; otherwise the refuted successor query yields a learned flat clause.
// Learned clauses follow from the definitions, so the solver is shared by all
// queries of a session. Refuted sequents stay refuted as clauses are learned,
// and a refutation is a countermodel for the named formulas themselves, so
// they are remembered across queries.

#pragma once

#include <chrono>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "heyting/formula.hpp"
#include "heyting/sat.hpp"

namespace heyting::detail {

class IpcSat {
 public:
  IpcSat();

  // Throws ProverTimeout once `step_budget` solver calls (zero: unlimited)
  // or the deadline are exceeded.
  bool prove(std::span<const Formula> premises, Formula goal, std::uint64_t step_budget,
             std::chrono::steady_clock::time_point deadline, bool timed);

  std::uint64_t solver_calls() const { return total_calls_; }
  std::size_t named() const { return names_.size(); }

 private:
  struct Imp {
    int a, b, p;  // solver variables
  };
  struct Query {
    std::vector<Imp> imps;
    std::vector<char> in_cone;  // per solver variable
    std::uint64_t step_budget;
    std::chrono::steady_clock::time_point deadline;
    bool timed;
    std::uint64_t calls = 0;
  };

  int name(Formula f);
  void tick(Query& q);
  // On success `core` receives the assumptions used (a subset of `assume`).
  bool search(std::vector<sat::Lit> assume, int goal, Query& q, std::vector<sat::Lit>& core);

  struct KeyHash {
    std::size_t operator()(const std::vector<sat::Lit>& key) const noexcept;
  };

  sat::Solver solver_;
  // Sorted positive assumptions followed by the negated goal.
  std::unordered_set<std::vector<sat::Lit>, KeyHash> refuted_;
  std::unordered_map<std::uint32_t, int> names_;  // formula id -> variable
  std::vector<Imp> imp_of_var_;                   // indexed by variable; p = -1 unless an implication
  std::uint64_t total_calls_ = 0;
};

}  // namespace heyting::detail
