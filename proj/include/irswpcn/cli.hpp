#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace irswpcn {

// Exit statuses of the command-line front end.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitNumeric = 2, kExitValidation = 3 };

// args excludes the program name. Tables go to out unless --out is given;
// diagnostics go to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Locale-independent rendering with 12 significant digits.
std::string format_number(double v);

}  // namespace irswpcn
