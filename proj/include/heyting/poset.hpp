// Order-embedding of finite (streamed) posets into the two-variable
// Lindenbaum algebra.
//
// For generators a_1..a_m of one level L of K_2,
//   psi(a_1..a_m) = ~~(OR phi_a_i) & AND_{d in S} phi'_d
// with S the nodes of level <= L above no generator. A node u forces it iff
// every node of level <= L above u is above a generator, so k(psi) is the
// union of the generator up-sets plus higher nodes built over them.
//
// psi_e = T. The children of psi_s take the first six cone nodes of the next
// level with at least six, three each, in canonical order; their cones meet
// only below that level. Hence psi_s |- psi_t iff t is a prefix of s, and
// psi_s |- OR_i psi_{t_i} iff some t_i is a prefix of s.
//
// A complete set holds elements OR_i psi_{s_i} and, for every partition of
// them into an up-closed S1 and a down-closed S2, a string sigma(S1, S2) of
// one common length, longer than every disjunct, whose psi implies all of S1
// and nothing in S2.

#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "heyting/bellissima.hpp"
#include "heyting/charform.hpp"
#include "heyting/formula.hpp"

namespace heyting {

class PosetError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PermissiveFormula {
  std::vector<NodeId> generators;  // canonical order
  std::uint32_t level = 0;
  std::vector<NodeId> maxS;  // maximal elements of S, canonical order
  Formula formula;
};

struct SigmaNode {
  std::string sigma;
  std::optional<PermissiveFormula> pf;  // empty for the root, psi_e = T
  Formula formula;
};

class SigmaTree {
 public:
  // `k2` is a slice of K_2; cone and S nodes are interned into it.
  explicit SigmaTree(ModelSlice& k2, std::size_t depth_cap = 24, std::size_t cone_cap = 500'000);

  // Throws PosetError for fewer than three generators, mixed levels or
  // nodes outside the slice. The conjunction runs over max(S), which has the
  // same cone as S.
  PermissiveFormula permissive(std::vector<NodeId> generators);
  // Throws CapExceeded when the cone enumeration passes cone_cap candidates.
  std::pair<PermissiveFormula, PermissiveFormula> split_permissive(const PermissiveFormula& pf);

  // Memoized; throws CapExceeded beyond depth_cap or on any character other
  // than 0 and 1.
  const SigmaNode& node(std::string_view sigma);
  Formula psi(std::string_view sigma) { return node(sigma).formula; }

  // Cone nodes of level `level` of psi(generators), canonical order.
  std::vector<NodeId> cone_level(std::span<const NodeId> generators, std::uint32_t level);

  ModelSlice& slice() { return *k2_; }
  CharTable& chars() { return chars_; }
  std::size_t depth_cap() const { return depth_cap_; }

 private:
  std::pair<std::vector<NodeId>, std::vector<NodeId>> split_generators(std::span<const NodeId> generators);
  std::vector<NodeId> up_of(std::span<const NodeId> nodes) const;

  ModelSlice* k2_;
  CharTable chars_;
  std::size_t depth_cap_;
  std::size_t cone_cap_;
  std::unordered_map<std::string, SigmaNode> nodes_;
};

// Disjunct strings of one element, sorted and distinct.
using Disjuncts = std::vector<std::string>;

bool is_prefix(std::string_view prefix, std::string_view s);
// OR psi_a |- OR psi_b, decided on the strings alone.
bool prefix_implies(const Disjuncts& a, const Disjuncts& b);
Formula disjunction_formula(SigmaTree& tree, const Disjuncts& d);

// Indices into the elements of a complete set.
struct Position {
  std::vector<std::size_t> below;         // T1, down-closed
  std::vector<std::size_t> above;         // T2, up-closed
  std::vector<std::size_t> incomparable;  // T3
};

class CompleteSet {
 public:
  static constexpr std::size_t kMaxElements = 8;

  // The empty set with sigma(empty, empty) = e.
  CompleteSet();

  std::size_t size() const { return elements_.size(); }
  const std::vector<Disjuncts>& elements() const { return elements_; }
  // Keyed by the S1 bitmask; S2 is the complement.
  const std::map<std::uint32_t, std::string>& table() const { return table_; }
  std::size_t sigma_length() const { return length_; }
  std::size_t max_disjunct_length() const;
  // The intended order: i <= j.
  bool leq(std::size_t i, std::size_t j) const { return up_[i] >> j & 1; }
  bool is_up_closed(std::uint32_t mask) const;

 private:
  friend std::pair<CompleteSet, Disjuncts> extend_complete(const CompleteSet& cs, const Position& position);

  std::vector<Disjuncts> elements_;
  std::vector<std::uint32_t> up_;  // up_[i] has bit j iff i <= j
  std::map<std::uint32_t, std::string> table_;
  std::size_t length_ = 0;
};

// The new element is OR T1 | OR {psi_{sigma(S1, S2)0} : T2 subset of S1}.
// Throws PosetError unless the position partitions the elements with T1
// down-closed, T2 up-closed and T1 below T2; throws CapExceeded past
// kMaxElements.
std::pair<CompleteSet, Disjuncts> extend_complete(const CompleteSet& cs, const Position& position);

struct CompletenessViolation {
  std::uint32_t mask = 0;
  std::size_t element = 0;
  bool expected = false;
};

// String-level audit of every table entry, plus length discipline (reported
// with element = size()).
std::vector<CompletenessViolation> audit_complete(const CompleteSet& cs);
// The same audit with prove_ipc on materialized formulas.
std::vector<CompletenessViolation> audit_complete_prover(const CompleteSet& cs, SigmaTree& tree);

struct PosetSpec {
  std::vector<std::string> elements;
  std::vector<std::pair<std::string, std::string>> le;  // a <= b
};

// Reflexive-transitive closure of spec.le over indices; throws PosetError
// on unknown or repeated names and on cycles.
std::vector<std::vector<bool>> poset_closure(const PosetSpec& spec);
PosetSpec parse_poset_json(const nlohmann::json& j);

// Online embedding in arrival order.
class PosetEmbedder {
 public:
  // Adds an element below every name in `upper` and above every name in
  // `lower` (earlier names), closing both lists. Throws PosetError on
  // unknown or repeated names, when the closed lists meet, and when some
  // lower element is not already below some upper one.
  const Disjuncts& add(const std::string& name, const std::vector<std::string>& upper,
                       const std::vector<std::string>& lower);
  // One "name [below a b ...] [above c d ...]" line: name lies below a and b
  // and above c and d. Blank lines and lines starting with '#' are ignored;
  // returns false for them.
  bool add_line(std::string_view line);

  const CompleteSet& set() const { return cs_; }
  const std::vector<std::string>& names() const { return names_; }
  std::size_t index_of(const std::string& name) const;

 private:
  CompleteSet cs_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
};

PosetEmbedder embed_poset(const PosetSpec& spec);
PosetEmbedder embed_poset_stream(std::istream& in);

enum class Verify { Fast, Prover };

struct RelationMismatch {
  std::size_t a = 0, b = 0;
  bool expected = false;  // a <= b in the poset
};

// Compares a <= b with the implication between the images for every
// ordered pair.
std::vector<RelationMismatch> verify_embedding(const PosetEmbedder& emb, Verify mode, SigmaTree* tree = nullptr);

// One representative per isomorphism class of partial orders on n labelled
// elements, n <= 5; element names are "0".."n-1".
std::vector<PosetSpec> poset_classes(std::size_t n);

// Embeds a stream of sentences by the Lindenbaum preorder of an entailment
// oracle; equivalent sentences share an element.
class LogicEmbedder {
 public:
  using Entails = std::function<bool(Formula premise, Formula conclusion)>;
  explicit LogicEmbedder(Entails entails) : entails_(std::move(entails)) {}

  // Index of the class of `sentence`.
  std::size_t add(Formula sentence);
  const CompleteSet& set() const { return cs_; }
  const Disjuncts& image(std::size_t cls) const { return cs_.elements()[cls]; }

 private:
  Entails entails_;
  CompleteSet cs_;
  std::vector<Formula> representatives_;
};

nlohmann::json embedding_json(const PosetEmbedder& emb, SigmaTree* tree = nullptr,
                              std::size_t max_formula_chars = 4096);

}  // namespace heyting
