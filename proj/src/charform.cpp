#include "heyting/charform.hpp"

#include <algorithm>
#include <numeric>

#include "heyting/random.hpp"

namespace heyting {

std::pair<Formula, Formula> CharTable::pair(NodeId a) {
  if (auto it = memo_.find(a); it != memo_.end()) return it->second;
  const BNode& node = slice_->node(a);
  std::vector<Formula> prop;
  std::vector<Formula> notprop;
  for (std::uint32_t i = 1; i <= slice_->n(); ++i) (node.U >> (i - 1) & 1 ? prop : notprop).push_back(var(i));

  Formula phi;
  Formula phi_prime;
  if (node.T.empty()) {
    std::vector<Formula> literals = prop;
    for (Formula p : notprop) literals.push_back(mk_not(p));
    phi = conj(literals);
    phi_prime = mk_not(phi);
  } else {
    std::vector<Formula> succ_phi;
    std::vector<Formula> succ_prime;
    for (NodeId s : node.T) {
      auto [p, q] = pair(s);
      succ_phi.push_back(p);
      succ_prime.push_back(q);
    }
    const Formula up = disj(succ_phi);
    std::vector<Formula> guard = notprop;
    guard.insert(guard.end(), succ_prime.begin(), succ_prime.end());
    std::vector<Formula> parts = prop;
    parts.push_back(mk_imp(disj(guard), up));
    phi = conj(parts);
    phi_prime = mk_imp(phi, up);
  }
  memo_.emplace(a, std::make_pair(phi, phi_prime));
  return {phi, phi_prime};
}

CharReport verify_char_slice(CharTable& table, std::uint32_t level_bound, std::size_t sample_cap, std::uint64_t seed) {
  const ModelSlice& slice = table.slice();
  CharReport report;
  std::vector<NodeId> betas(slice.size());
  std::iota(betas.begin(), betas.end(), NodeId{0});
  if (betas.size() > sample_cap) {
    Rng rng(seed);
    std::shuffle(betas.begin(), betas.end(), rng);
    betas.resize(sample_cap);
    std::sort(betas.begin(), betas.end());
  }
  report.betas = betas.size();
  for (NodeId a : slice.nodes_up_to(level_bound)) {
    ++report.alphas;
    auto [phi, phi_prime] = table.pair(a);
    const std::vector<bool> k_phi = truth_set(slice, phi);
    const std::vector<bool> k_prime = truth_set(slice, phi_prime);
    for (NodeId b : betas) {
      if (k_phi[b] != slice.leq(a, b)) report.violations.push_back({a, b, false, k_phi[b]});
      if (k_prime[b] != !slice.leq(b, a)) report.violations.push_back({a, b, true, k_prime[b]});
    }
  }
  return report;
}

}  // namespace heyting
