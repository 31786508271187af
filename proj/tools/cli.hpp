#pragma once

// Batch front end. `run` takes the arguments after the program name and
// returns the process exit code:
//   0 ok, 1 verification failure, 2 bad parameters, 3 input validation,
//   4 solver failure.

#include <iosfwd>
#include <string>
#include <vector>

namespace matsch::cli {

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace matsch::cli
