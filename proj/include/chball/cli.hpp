#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chball {

// Runs the command line (without the program name). Returns 0 on success, 1
// on a verification or validation failure, 2 on a usage or parse error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chball
