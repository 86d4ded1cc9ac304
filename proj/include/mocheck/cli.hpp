#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mocheck {

/// Runs one CLI command (arguments without the program name). Exit status: 0 yes/sat/pass,
/// 1 no/unsat/fail, 2 usage or input error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mocheck
