// Seeded generators for formula corpora.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "heyting/formula.hpp"

namespace heyting {

using Rng = std::mt19937_64;

struct FormulaShape {
  std::uint32_t variables = 2;  // draws from x1..x<variables>
  std::size_t connectives = 3;  // exact number of binary connectives and negations
  bool constants = true;        // allow F and T leaves
  bool negation = true;         // allow ~ as a connective
};

// Uniform over connective choices; leaves uniform over variables (and
// constants when enabled, at a lower weight).
Formula random_formula(Rng& rng, const FormulaShape& shape);

// Connective count drawn uniformly from [0, max_connectives].
Formula random_formula_upto(Rng& rng, std::uint32_t variables, std::size_t max_connectives);

// Every formula over x1..x<variables>, F and T with at most
// `max_connectives` connectives (~ counts as one), deduplicated, in order of
// connective count and then construction.
std::vector<Formula> all_formulas(std::uint32_t variables, std::size_t max_connectives);

}  // namespace heyting
