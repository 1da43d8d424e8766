// An interval [phi, psi] of the two-variable Lindenbaum algebra that is a
// lattice copy of the m-variable one, with the translation f into it and the
// inverse h out of it.
//
// For m >= 2 the anchors A = {a_1..a_m} are level-1 nodes of K_2, each with a
// private immediate successor:
//   m = 2:  <{n0, n1}, {}>, <{n2, n3}, {}>
//   m = 3:  <{n0, n1}, {}>, <{n1, n2}, {}>, <{n1, n3}, {}>
// where n0..n3 are node({}), node({x1}), node({x2}), node({x1, x2}).
// gamma(A') = <r(A' + union of s(a) for a outside A'), {}>, S is the set of
// nodes of level <= 2 that are neither above a gamma nor in ran(g), and
//   phi  = OR phi_a
//   psi0 = ~~ OR phi_gamma,   psi1 = AND over max(S) of phi'_rho,
//   psi  = psi0 & psi1.
// For m = 1, phi = F and psi = x2.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "heyting/bellissima.hpp"
#include "heyting/charform.hpp"
#include "heyting/formula.hpp"
#include "heyting/prover.hpp"

namespace heyting {

class UnsupportedParameters : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct IntervalSpec {
  std::uint32_t m = 0;
  std::uint32_t n = 2;
  std::uint32_t i = 1;              // level of A
  std::vector<NodeId> A;            // a_1..a_m
  std::vector<NodeId> gamma;        // indexed by subset mask of A (bit k-1: a_k)
  std::vector<NodeId> maxS;         // canonical order
  std::vector<NodeId> range_low;    // ran(g) within levels <= i + 1, sorted by id
  Formula phi, psi, psi0, psi1;     // for m = 1, psi0 = psi and psi1 = T
};

// Images in K_2 of the nodes of a K_m slice, indexed by K_m node id.
struct GMap {
  std::vector<NodeId> image;
};

class Interval {
 public:
  // `k2` is a slice of K_2 complete to at least level 1; the gamma nodes and
  // the maximal elements of S are interned into it. Throws
  // UnsupportedParameters unless 1 <= m <= 3.
  Interval(ModelSlice& k2, std::uint32_t m);

  const IntervalSpec& spec() const { return spec_; }
  ModelSlice& slice() { return *k2_; }
  CharTable& chars() { return chars_; }

  // Rules: g(node(U)) = gamma({a_k | x_k not in U}) and
  // g(<T, U>) = <r(g[T] + {a_k | x_k not in U}), {}>, over levels
  // 0..max_level of km. Throws SliceError when km is not complete that far.
  // Requires m >= 2 and km.n() == m.
  GMap g_map(const ModelSlice& km, std::uint32_t max_level = 2);

  // f(F) = phi, f(x_k) = (phi'_{a_k} | phi) & psi, f(T) = (phi -> phi) & psi,
  // f commutes with & and |, f(a -> b) = (f(a) -> f(b)) & psi.
  // For m = 1, f(x1) = x1 & x2 and the same structural rules apply with
  // phi = F and psi = x2. Throws std::invalid_argument for variables above m.
  Formula f(Formula rho);

  // For m >= 2: h(F) = h(x_i) = F, h(T) = T, h commutes with & and |, and
  // h(a -> b) = F when some level-0 node forcing phi refutes a -> b, and
  // otherwise (h(a) -> h(b)) & AND{x_k | a_k does not force a -> b}.
  // For m = 1: h(x1) = x1, h(x2) = T, and h commutes with every connective.
  Formula h(Formula rho);

  // f(T) -> f(rho).
  Formula f_lift(Formula rho);
  // T when rho is provable, otherwise f(rho). Preserves & and | up to
  // equivalence; the | case rests on the disjunction property.
  Formula f_gate(Formula rho, const ProverLimits& limits = {});

  // Restriction of ran(g) to levels <= max_level of K_2, from g over the
  // levels of K_m that can reach them.
  std::vector<NodeId> range_up_to_level(std::uint32_t max_level);

  nlohmann::json to_json(std::size_t max_formula_chars = 4096);

 private:
  void build_anchors();
  void build_gammas();
  void build_maxS();

  ModelSlice* k2_;
  CharTable chars_;
  SliceEvaluator eval_;
  IntervalSpec spec_;
  std::vector<NodeId> up_gamma_;     // union of the up-sets of the gammas, sorted
  std::vector<NodeId> guard_nodes_;  // level-0 nodes forcing phi
  std::unordered_map<Formula, Formula> f_memo_;
  std::unordered_map<Formula, Formula> h_memo_;
  std::optional<ModelSlice> km_;     // K_m slice used by range_up_to_level
};

// Every node of level <= 2 of `full` (complete to level 2) neither above a
// gamma nor in spec.range_low, reduced to its maximal elements, by a sweep
// over all nodes.
std::vector<NodeId> maxS_by_sweep(const ModelSlice& full, const IntervalSpec& spec);

// Injection checks of g over the nodes of km: order and non-order are
// preserved, and b forces x_k iff g(b) is not below a_k. Returns the first
// failure.
std::optional<std::string> check_g_map(const ModelSlice& k2, const ModelSlice& km, const IntervalSpec& spec,
                                       const GMap& g);

}  // namespace heyting
