// Decision procedures for intuitionistic and classical consequence.

#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "heyting/formula.hpp"

namespace heyting {

class ProverTimeout : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class VariableLimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Canonical sequent: antecedent sorted by formula id, without duplicates.
struct Sequent {
  std::vector<Formula> antecedent;
  Formula succedent;

  Sequent(std::vector<Formula> ante, Formula succ);
  bool operator==(const Sequent&) const = default;
};

struct ProverStats {
  std::uint64_t calls = 0;        // sequent search nodes visited
  std::uint64_t sat_calls = 0;    // solver calls of the refinement engine
  std::size_t sat_variables = 0;  // subformulas named by the refinement engine
  std::uint64_t memo_hits = 0;
  std::uint64_t classical_cuts = 0;  // sequents refuted by a classical valuation
  std::size_t memo_entries = 0;
};

enum class Engine {
  Auto,  // sequent search for small sequents, refinement otherwise
  G4ip,
  Sat,
};

struct ProverLimits {
  // Zero means unlimited. Steps count search nodes or solver calls.
  std::chrono::milliseconds time_budget{0};
  std::uint64_t step_budget = 0;
  Engine engine = Engine::Auto;
};

// Auto picks the sequent search when the sequent has at most this many
// distinct subformulas.
inline constexpr std::size_t kAutoSequentDag = 40;

// Two complete engines. G4ip is contraction-free sequent search: invertible
// rules are applied eagerly, the remaining choice points are right
// disjunction and the nested-implication left rule, and saturated sequents
// are memoized. Sat names every subformula for an incremental SAT solver
// and refines classical countermodels along implications; learned clauses
// are kept. Both caches live as long as the object.
class Prover {
 public:
  Prover();
  ~Prover();
  Prover(const Prover&) = delete;
  Prover& operator=(const Prover&) = delete;

  // Throws ProverTimeout when `limits` are exceeded; never guesses.
  bool prove(std::span<const Formula> premises, Formula goal, const ProverLimits& limits = {});
  bool prove(const Sequent& s, const ProverLimits& limits = {});

  ProverStats stats() const;
  void clear();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Process-wide session used by the free functions below.
Prover& default_prover();

bool prove_ipc(std::span<const Formula> premises, Formula goal, const ProverLimits& limits = {});
inline bool prove_ipc(std::initializer_list<Formula> premises, Formula goal, const ProverLimits& limits = {}) {
  return prove_ipc(std::span<const Formula>(premises.begin(), premises.size()), goal, limits);
}
inline bool provable(Formula goal, const ProverLimits& limits = {}) { return prove_ipc({}, goal, limits); }

bool equiv_ipc(Formula a, Formula b, const ProverLimits& limits = {});

inline constexpr std::size_t kClassicalVariableLimit = 24;

// Truth-table consequence; throws VariableLimitExceeded beyond 24 variables.
bool prove_classical(std::span<const Formula> premises, Formula goal);
inline bool prove_classical(std::initializer_list<Formula> premises, Formula goal) {
  return prove_classical(std::span<const Formula>(premises.begin(), premises.size()), goal);
}

enum class DisjunctionSplit { Left, Right, NotApplicable };

// For a provable disjunction, names a provable disjunct (left preferred).
// Throws std::invalid_argument when f is not a disjunction.
DisjunctionSplit disjunction_split(Formula f, const ProverLimits& limits = {});

}  // namespace heyting
