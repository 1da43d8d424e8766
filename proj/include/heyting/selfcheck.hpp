// Acceptance suites: one per criterion row, each with its own wall-clock
// budget. A row passes only when every check holds and the budget is met.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace heyting {

// Suite k (1-based) draws from kDefaultSeed + k unless a base seed is given.
inline constexpr std::uint64_t kDefaultSeed = 1000;

struct SuiteResult {
  std::uint32_t row = 0;
  std::string name;
  bool passed = false;
  double seconds = 0;
  double budget_seconds = 0;
  std::string detail;  // counts on success, the first failure otherwise
};

// Row order.
const std::vector<std::string>& suite_names();

// Throws std::invalid_argument for an unknown name.
SuiteResult run_suite(std::string_view name, std::uint64_t base_seed = kDefaultSeed);
std::vector<SuiteResult> run_selfcheck(const std::vector<std::string>& names, std::uint64_t base_seed = kDefaultSeed);

// "PASS  3 charform  12.3s / 60s  detail".
std::string format_row(const SuiteResult& r);
nlohmann::json result_json(const SuiteResult& r);

}  // namespace heyting
