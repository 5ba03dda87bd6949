#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace freechoice {

/// Runs one freechoice command. args excludes the program name. Returns the
/// process exit code: 0 ok, 1 user or data error, 2 internal proof violation.
/// Errors are reported on err as a single line "error: <code>: <message>".
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace freechoice
