#include "heyting/random.hpp"

#include <unordered_set>

namespace heyting {

namespace {

Formula leaf(Rng& rng, const FormulaShape& shape) {
  const std::uint32_t slots = shape.variables * 4 + (shape.constants ? 2 : 0);
  const std::uint32_t pick = std::uniform_int_distribution<std::uint32_t>(0, slots - 1)(rng);
  if (pick < shape.variables * 4) return var(pick / 4 + 1);
  return pick == shape.variables * 4 ? bottom() : top();
}

Formula build(Rng& rng, const FormulaShape& shape, std::size_t connectives) {
  if (connectives == 0) return leaf(rng, shape);
  const int choices = shape.negation ? 4 : 3;
  const int op = std::uniform_int_distribution<int>(0, choices - 1)(rng);
  if (op == 3) return mk_not(build(rng, shape, connectives - 1));
  const std::size_t left = std::uniform_int_distribution<std::size_t>(0, connectives - 1)(rng);
  Formula a = build(rng, shape, left);
  Formula b = build(rng, shape, connectives - 1 - left);
  switch (op) {
    case 0:
      return mk_and(a, b);
    case 1:
      return mk_or(a, b);
    default:
      return mk_imp(a, b);
  }
}

}  // namespace

Formula random_formula(Rng& rng, const FormulaShape& shape) { return build(rng, shape, shape.connectives); }

Formula random_formula_upto(Rng& rng, std::uint32_t variables, std::size_t max_connectives) {
  FormulaShape shape;
  shape.variables = variables;
  shape.connectives = std::uniform_int_distribution<std::size_t>(0, max_connectives)(rng);
  return random_formula(rng, shape);
}

std::vector<Formula> all_formulas(std::uint32_t variables, std::size_t max_connectives) {
  std::vector<std::vector<Formula>> by_size(max_connectives + 1);
  std::unordered_set<Formula> seen;
  auto add = [&](std::size_t size, Formula f) {
    if (seen.insert(f).second) by_size[size].push_back(f);
  };
  add(0, bottom());
  add(0, top());
  for (std::uint32_t i = 1; i <= variables; ++i) add(0, var(i));
  for (std::size_t k = 1; k <= max_connectives; ++k) {
    for (Formula a : std::vector<Formula>(by_size[k - 1])) add(k, mk_not(a));
    for (std::size_t left = 0; left < k; ++left) {
      const auto lhs = by_size[left];
      const auto rhs = by_size[k - 1 - left];
      for (Formula a : lhs)
        for (Formula b : rhs) {
          add(k, mk_and(a, b));
          add(k, mk_or(a, b));
          add(k, mk_imp(a, b));
        }
    }
  }
  std::vector<Formula> out;
  for (const auto& layer : by_size) out.insert(out.end(), layer.begin(), layer.end());
  return out;
}

}  // namespace heyting
