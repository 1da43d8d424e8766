// Runs every acceptance row with its budget; exits nonzero if any fails.

#include <cstdlib>
#include <iostream>

#include "heyting/selfcheck.hpp"

int main(int argc, char** argv) {
  const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : heyting::kDefaultSeed;
  int failed = 0;
  for (const std::string& name : heyting::suite_names()) {
    const heyting::SuiteResult r = heyting::run_suite(name, seed);
    std::cout << heyting::format_row(r) << std::endl;
    failed += !r.passed;
  }
  std::cout << (failed ? "FAILED " : "ALL PASSED ") << heyting::suite_names().size() - failed << "/"
            << heyting::suite_names().size() << std::endl;
  return failed ? 1 : 0;
}
