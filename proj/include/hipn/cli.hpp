#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hipn {

// Runs one command line (without the program name).
// Exit status: 0 definitive answer, 1 budget ran out, 2 usage, parse or validation error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hipn
