// A lattice embedding of the omega-variable Lindenbaum algebra into the
// two-variable one.
//
// Five level-1 anchors a1..a5 of K_2 with w(a5) nonempty. S (resp. T) are the
// nodes of level <= 1 above none of a1..a4 (resp. a1..a5), and
//   phi = (~~(OR phi_a1..a4) & AND_{b in S} phi'_b) | phi_a5
//   psi =  ~~(OR phi_a1..a5) & AND_{b in T} phi'_b
// b^j_0 = a_j, and for i >= 0
//   b^1_{i+1} = <{b^2_i, b^3_i}, {}>        b^2_{i+1} = <{b^2_i, b^4_i}, {}>
//   b^3_{i+1} = <{b^3_i, b^4_i}, {}>        b^4_{i+1} = <{b^2_i, b^3_i, b^4_i}, {}>
// The model K has nodes k(psi) - k(phi), and a node forces x_i iff it is not
// below b^1_i. Without the phi_a5 disjunct a5 belongs to K, forces every
// variable and sits above every node of K, so K validates ~~x_i.

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "heyting/bellissima.hpp"
#include "heyting/charform.hpp"
#include "heyting/formula.hpp"
#include "heyting/kripke.hpp"

namespace heyting {

class VariableBeyondBound : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class OutsideModel : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class OmegaReading {
  Corrected,  // phi as above
  AsPrinted,  // phi without the phi_a5 disjunct
};

struct OmegaSpec {
  std::array<NodeId, 5> alphas{};
  std::vector<std::array<NodeId, 4>> beta;  // beta[i][j - 1] = b^j_i
  std::vector<NodeId> S, T;                 // canonical order
  Formula phi, psi;
  std::uint32_t var_bound = 0;
  OmegaReading reading = OmegaReading::Corrected;
};

class Omega {
 public:
  // `k2` is a slice of K_2 complete to at least level 1; beta nodes are
  // interned into it.
  explicit Omega(ModelSlice& k2, std::uint32_t var_bound = 3, OmegaReading reading = OmegaReading::Corrected);

  const OmegaSpec& spec() const { return spec_; }
  ModelSlice& slice() { return *k2_; }
  CharTable& chars() { return chars_; }

  // Materializes b^1_i for i <= var_bound.
  void extend(std::uint32_t var_bound);

  bool forces_phi(NodeId u);
  bool forces_psi(NodeId u);
  bool in_model(NodeId u) { return forces_psi(u) && !forces_phi(u); }

  // Forcing in K for nodes of K; nodes of k(phi) force everything, matching
  // f(F) = phi. Throws OutsideModel outside k(psi) and VariableBeyondBound
  // for variables above var_bound.
  bool virtual_force(NodeId node, Formula f);

  // f(F) = phi, f(x_i) = (phi'_{b^1_i} | phi) & psi, f(T) = (phi -> phi) & psi,
  // f commutes with & and |, f(a -> b) = (f(a) -> f(b)) & psi.
  Formula f(Formula rho);

  // a(g) = <r(G), {}> with G = {b^1_i | i considered, g does not force x_i}
  // + {a(g') | g' an immediate successor} + {a5}. When r(G) is a single node
  // with empty valuation, the cover g' forces the same considered variables
  // as g and a(g) = a(g'). Throws ModelError unless m is rooted.
  std::vector<NodeId> inject_model(const FiniteModel& m, std::span<const std::uint32_t> considered_vars);

  nlohmann::json to_json(std::size_t max_formula_chars = 4096);

 private:
  void check_vars(Formula f) const;

  ModelSlice* k2_;
  CharTable chars_;
  SliceEvaluator eval_;
  OmegaSpec spec_;
  std::unordered_map<Formula, Formula> f_memo_;
};

}  // namespace heyting
