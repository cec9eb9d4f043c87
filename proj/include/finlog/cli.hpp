#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace finlog {

/// Front-end entry point. Exit codes: 0 definite positive verdict, 1 definite
/// negative verdict (counterexample / REJECT / FAILS-IN-RANGE / false), 2
/// usage or parse errors, 3 budget exhaustion.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace finlog
