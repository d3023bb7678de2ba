#pragma once

#include <string>
#include <vector>

namespace mrigark {

/// Runs the command line front end; args excludes the program name.
/// Exit codes: 0 success, 1 failed checks/integration, 2 usage or lookup
/// errors.
int cli_run(const std::vector<std::string>& args);

} // namespace mrigark
