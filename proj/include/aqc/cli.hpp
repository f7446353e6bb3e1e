#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace aqc {

// Runs one CLI invocation (args excludes the program name). Exit codes:
// 0 success / all requested properties hold, 1 a checked property fails,
// 2 usage or parse error, 3 an enumeration cap was exceeded.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace aqc
