// Characteristic formulas of universal-model nodes: k(phi_a) is the up-set
// of a and k(phi'_a) is everything not below a.

#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "heyting/bellissima.hpp"
#include "heyting/formula.hpp"

namespace heyting {

// For a node a with immediate successors s(a):
//   s(a) empty:  phi_a = AND w(a) & AND ~(not w(a))
//   otherwise:   phi_a = AND w(a) & ((OR not w(a) | OR phi'_s) -> OR phi_s)
//   phi'_a = phi_a -> OR phi_s
// The table follows the slice as it grows; entries are built on first use.
class CharTable {
 public:
  explicit CharTable(const ModelSlice& slice) : slice_(&slice) {}

  Formula phi(NodeId a) { return pair(a).first; }
  Formula phi_prime(NodeId a) { return pair(a).second; }
  std::pair<Formula, Formula> pair(NodeId a);

  // Replaces an entry; later entries are built from the replacement.
  void override_entry(NodeId a, Formula phi, Formula phi_prime) { memo_[a] = {phi, phi_prime}; }

  const ModelSlice& slice() const { return *slice_; }

 private:
  const ModelSlice* slice_;
  std::unordered_map<NodeId, std::pair<Formula, Formula>> memo_;
};

inline std::pair<Formula, Formula> char_pair(CharTable& table, NodeId a) { return table.pair(a); }

struct CharViolation {
  NodeId alpha = 0;
  NodeId beta = 0;
  bool primed = false;  // the phi' half failed
  bool forced = false;  // what beta actually forces
};

struct CharReport {
  std::size_t alphas = 0;
  std::size_t betas = 0;  // per alpha
  std::vector<CharViolation> violations;
  bool ok() const { return violations.empty(); }
};

// Checks every node a of level <= level_bound against every slice node b
// (or `sample_cap` seeded draws of b when the slice is larger): b forces
// phi_a iff a <= b, and b forces phi'_a iff not b <= a.
CharReport verify_char_slice(CharTable& table, std::uint32_t level_bound, std::size_t sample_cap = 1'000'000,
                             std::uint64_t seed = 1);

}  // namespace heyting
