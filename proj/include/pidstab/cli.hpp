#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pidstab::cli {

/// Runs one tool invocation. args is the command line without the program
/// name, in natural order. Reports go to out, errors to err.
/// Returns 0 on success, 2 when the command ran but its verdict is negative
/// (gains outside the region, a failed certificate, a non-converged run, a
/// failed class check), 1 on any error.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace pidstab::cli
