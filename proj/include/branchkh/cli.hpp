#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace branchkh {

// Entry point of the command-line tool; args exclude the program name.
// Exit codes: 0 success, 1 computation failure or failed claim, 2 usage.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err);

}  // namespace branchkh
