#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ragsmith::service {

/// Entry point of the `ragsmith` tool. Returns the process exit code: 0 on
/// success, 1 when a command fails, 2 on a usage error.
int run_cli(int argc, char** argv);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ragsmith::service
