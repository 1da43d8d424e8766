// The one-variable ladder: phi_1 = ~x1, psi_1 = x1,
// phi_{i+1} = phi_i -> psi_i, psi_{i+1} = phi_i | psi_i.
// Every one-variable formula is equivalent to exactly one of F, T, phi_i,
// psi_i.

#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "heyting/formula.hpp"
#include "heyting/prover.hpp"

namespace heyting {

struct LadderPoint {
  enum class Tag { Bottom, Phi, Psi, Top };
  Tag tag = Tag::Bottom;
  std::uint32_t index = 0;  // >= 1 for Phi and Psi, 0 otherwise

  bool operator==(const LadderPoint&) const = default;
  std::string str() const;
};

// Throws std::invalid_argument for i < 1.
std::pair<Formula, Formula> ladder(std::uint32_t i);
Formula ladder_formula(const LadderPoint& p);

class ClassifyCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Ascends the ladder until an equivalent point is found. `cap` bounds the
// index; 0 selects 2 * tree_size(f) + 4. Throws std::invalid_argument when f
// mentions a variable other than x1.
LadderPoint classify(Formula f, std::uint32_t cap = 0, const ProverLimits& limits = {});

// Order between ladder points, decided by the prover.
bool ladder_leq(const LadderPoint& a, const LadderPoint& b, const ProverLimits& limits = {});

}  // namespace heyting
