// Hash-consed propositional formulas over indexed variables x1, x2, ...

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace heyting {

enum class Kind : std::uint8_t { Bottom, Top, Var, And, Or, Imp };

// A handle into the process-wide formula store. Two handles are equal iff
// the formulas are structurally identical.
class Formula {
 public:
  constexpr Formula() = default;
  constexpr explicit Formula(std::uint32_t id) : id_(id) {}

  constexpr std::uint32_t id() const { return id_; }

  Kind kind() const;
  // Children of And/Or/Imp. Undefined for other kinds.
  Formula left() const;
  Formula right() const;
  // Variable index (>= 1) for Var nodes.
  std::uint32_t var() const;

  bool is(Kind k) const { return kind() == k; }
  // ~a is stored as a -> F.
  bool is_negation() const;

  friend constexpr bool operator==(Formula, Formula) = default;
  friend constexpr auto operator<=>(Formula a, Formula b) { return a.id_ <=> b.id_; }

 private:
  std::uint32_t id_ = 0;
};

// Constructors. All of them deduplicate.
Formula bottom();
Formula top();
Formula var(std::uint32_t index);
Formula mk_and(Formula a, Formula b);
Formula mk_or(Formula a, Formula b);
Formula mk_imp(Formula a, Formula b);
Formula mk_not(Formula a);

// Left-folded n-ary forms; the empty conjunction is T, the empty disjunction F.
Formula conj(std::span<const Formula> parts);
Formula disj(std::span<const Formula> parts);
inline Formula conj(std::initializer_list<Formula> parts) {
  return conj(std::span<const Formula>(parts.begin(), parts.size()));
}
inline Formula disj(std::initializer_list<Formula> parts) {
  return disj(std::span<const Formula>(parts.begin(), parts.size()));
}

// Number of formulas created so far.
std::size_t store_size();

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Grammar:
//   formula := imp ; imp := or [ "->" imp ] ; or := and { "|" and } ;
//   and := neg { "&" neg } ; neg := "~" neg | atom ;
//   atom := "F" | "T" | var | "(" formula ")" ; var := "x" [1-9][0-9]*
Formula parse(std::string_view text);

// Minimal-parenthesis rendering; parse(print(f)) == f.
std::string print(Formula f);
// Like print, but gives up once the output would exceed max_chars.
std::optional<std::string> print_limited(Formula f, std::size_t max_chars);

std::size_t dag_size(Formula f);
// Saturates at UINT64_MAX.
std::uint64_t tree_size(Formula f);
// Implication nesting depth (negations count as implications).
std::size_t implication_depth(Formula f);

// Distinct subformulas, children before parents.
std::vector<Formula> subformulas(Formula f);
// Sorted distinct variable indices.
std::vector<std::uint32_t> variables(Formula f);
std::uint32_t max_variable(Formula f);

// Rebuilds f bottom-up, replacing each variable by image(index).
Formula substitute(Formula f, const std::function<Formula(std::uint32_t)>& image);

}  // namespace heyting

template <>
struct std::hash<heyting::Formula> {
  std::size_t operator()(heyting::Formula f) const noexcept { return f.id(); }
};
