#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace codafin::app {

/// Process exit codes.
enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 1,
    exit_data = 2,       ///< schema, config, design or other input problem
    exit_numerical = 3,  ///< fit failure
};

/**
 * Entry point shared by the executable and the tests. `args` excludes the
 * program name. Every flag can also be set through an environment variable
 * CODAFIN_<FLAG>, e.g. CODAFIN_OUT_DIR; a flag on the command line wins.
 *
 * Subcommands: describe, fit, compare, simulate, toy.
 */
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace codafin::app
