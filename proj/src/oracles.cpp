#include "heyting/oracles.hpp"

#include <bit>
#include <stdexcept>

namespace heyting::oracle {

namespace {

struct Node {
  std::uint32_t level;
  std::uint64_t up;  // bit j: node j is above or equal
  std::uint32_t w;
};

}  // namespace

std::vector<std::uint64_t> level_counts(std::uint32_t n, std::uint32_t max_level) {
  if (n < 1 || n > 5) throw std::invalid_argument("oracle supports 1 <= n <= 5");
  std::vector<Node> nodes;
  for (std::uint32_t u = 0; u < (1u << n); ++u) nodes.push_back({0, std::uint64_t{1} << nodes.size(), u});
  std::vector<std::uint64_t> counts{nodes.size()};
  for (std::uint32_t level = 1; level <= max_level; ++level) {
    const std::size_t m = nodes.size();
    if (m > 24) throw std::length_error("oracle limited to 24 nodes below the counted level");
    std::vector<std::uint64_t> comparable(m);
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b)
        if (a != b && ((nodes[a].up >> b & 1) || (nodes[b].up >> a & 1))) comparable[a] |= std::uint64_t{1} << b;
    const bool keep = level < max_level;
    std::vector<Node> fresh;
    std::uint64_t count = 0;
    for (std::uint64_t T = 1; T < (std::uint64_t{1} << m); ++T) {
      bool antichain = true;
      bool has_top = false;
      std::uint32_t common = (1u << n) - 1;
      std::uint64_t up = 0;
      for (std::size_t a = 0; a < m; ++a) {
        if (!(T >> a & 1)) continue;
        if (comparable[a] & T) antichain = false;
        if (nodes[a].level == level - 1) has_top = true;
        common &= nodes[a].w;
        up |= nodes[a].up;
      }
      if (!antichain || !has_top) continue;
      const bool singleton = std::popcount(T) == 1;
      for (std::uint32_t u = 0; u < (1u << n); ++u) {
        if ((u & ~common) != 0) continue;
        if (singleton && u == common) continue;
        ++count;
        if (keep) fresh.push_back({level, up, u});
      }
    }
    counts.push_back(count);
    for (Node& f : fresh) {
      if (nodes.size() >= 64) throw std::length_error("oracle limited to 64 stored nodes");
      f.up |= std::uint64_t{1} << nodes.size();
      nodes.push_back(f);
    }
  }
  return counts;
}

}  // namespace heyting::oracle
