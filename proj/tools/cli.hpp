// Command-line front end. Exit codes: 0 affirmative or success, 1 negative
// (unprovable, no countermodel, failed check), 2 usage or internal error.

#pragma once

#include <ostream>

namespace heyting::cli {

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace heyting::cli
