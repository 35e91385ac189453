#pragma once

#include <string>
#include <vector>

namespace dusty {

/// Command-line front end. Subcommands: run, oracle dustywave, oracle
/// dustyshock, bench-drag. Exit codes: 0 success, 1 usage error, 2
/// simulation failure, 3 oracle failure.
int cli_main(int argc, const char* const* argv);

/// Same entry point for tests: argv without the program name.
int run_command(const std::vector<std::string>& args);

} // namespace dusty
