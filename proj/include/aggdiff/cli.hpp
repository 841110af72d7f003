#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace aggdiff {

/// Command-line entry point. `args` excludes the program name. Returns the
/// process exit status: 0 on success (including BlowUp and Timeout runs),
/// 2 on invalid arguments or parameters, 3 on file errors.
int parse_and_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace aggdiff
