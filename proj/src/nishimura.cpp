#include "heyting/nishimura.hpp"

#include <mutex>
#include <stdexcept>
#include <vector>

namespace heyting {

std::string LadderPoint::str() const {
  switch (tag) {
    case Tag::Bottom:
      return "F";
    case Tag::Top:
      return "T";
    case Tag::Phi:
      return "phi" + std::to_string(index);
    case Tag::Psi:
      return "psi" + std::to_string(index);
  }
  return "?";
}

std::pair<Formula, Formula> ladder(std::uint32_t i) {
  if (i < 1) throw std::invalid_argument("ladder index must be at least 1");
  static std::mutex mutex;
  static std::vector<std::pair<Formula, Formula>> memo;
  std::lock_guard lock(mutex);
  if (memo.empty()) memo.emplace_back(mk_not(var(1)), var(1));
  while (memo.size() < i) {
    auto [phi, psi] = memo.back();
    memo.emplace_back(mk_imp(phi, psi), mk_or(phi, psi));
  }
  return memo[i - 1];
}

Formula ladder_formula(const LadderPoint& p) {
  switch (p.tag) {
    case LadderPoint::Tag::Bottom:
      return bottom();
    case LadderPoint::Tag::Top:
      return top();
    case LadderPoint::Tag::Phi:
      return ladder(p.index).first;
    case LadderPoint::Tag::Psi:
      return ladder(p.index).second;
  }
  return bottom();
}

LadderPoint classify(Formula f, std::uint32_t cap, const ProverLimits& limits) {
  if (max_variable(f) > 1) throw std::invalid_argument("classify expects a formula over x1 only: " + print(f));
  if (cap == 0) {
    const std::uint64_t t = tree_size(f);
    cap = t > 1'000'000 ? 2'000'004 : static_cast<std::uint32_t>(2 * t + 4);
  }
  using Tag = LadderPoint::Tag;
  if (equiv_ipc(f, bottom(), limits)) return {Tag::Bottom, 0};
  if (equiv_ipc(f, top(), limits)) return {Tag::Top, 0};
  for (std::uint32_t i = 1; i <= cap; ++i) {
    auto [phi, psi] = ladder(i);
    if (equiv_ipc(f, phi, limits)) return {Tag::Phi, i};
    if (equiv_ipc(f, psi, limits)) return {Tag::Psi, i};
  }
  throw ClassifyCapExceeded("no ladder point up to index " + std::to_string(cap) + " is equivalent to " + print(f));
}

bool ladder_leq(const LadderPoint& a, const LadderPoint& b, const ProverLimits& limits) {
  return prove_ipc({ladder_formula(a)}, ladder_formula(b), limits);
}

}  // namespace heyting
