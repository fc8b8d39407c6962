#pragma once

#include <string>
#include <vector>

namespace qlab::cli {

/// Parse and execute one command line. `args` excludes the program name.
/// Exit codes: 0 = all asserted bounds pass, 1 = bound violation (failing
/// cells listed on stdout), 2 = usage or validation error.
int run(const std::vector<std::string>& args);

/// main()-shaped entry point (argv[0] included).
int run_main(int argc, const char* const* argv);

}  // namespace qlab::cli
