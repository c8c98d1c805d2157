#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace caslgp::cli {

/// Runs one command line (without the program name). Results go to `out`;
/// diagnostics and the one-line error record go to `err`. Returns the exit code:
/// 0 success, 2 usage or parse error, 3 io error, 1 any other failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace caslgp::cli
