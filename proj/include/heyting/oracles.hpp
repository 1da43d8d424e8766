// Independent reference computations used to cross-check the main modules.
// They share no code with the modules they check.

#pragma once

#include <cstdint>
#include <vector>

namespace heyting::oracle {

// |Lev^n_0| .. |Lev^n_max_level| by brute force over all subsets of the
// lower levels, read straight from the level definition. Throws
// std::length_error when the nodes below the last level exceed 24.
std::vector<std::uint64_t> level_counts(std::uint32_t n, std::uint32_t max_level);

}  // namespace heyting::oracle
