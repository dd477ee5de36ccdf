#pragma once

#include <string>
#include <vector>

namespace polsig::cli {

// Entry point for the `polsig` binary. Returns the process exit status:
// 0 ok, 2 schema, 3 estimation, 4 config, 5 internal.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);  // args[0] is the program name

}  // namespace polsig::cli
