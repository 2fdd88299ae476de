#pragma once

#include <string>
#include <vector>

namespace precis {

/// Exit codes: 0 success, 1 data or runtime error, 2 usage error.
int cli_main(int argc, const char* const* argv);
int cli_main(const std::vector<std::string>& args);  // args[0] is the program name

}  // namespace precis
