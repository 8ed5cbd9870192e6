#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hyperdon::cli {

enum ExitCode { kOk = 0, kCertificationFailure = 1, kNumericalFailure = 2, kConfigError = 3 };

// args excludes the program name. Diagnostics go to err, tables to out.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "a,b,c" or "start:stop:n" (n points, inclusive).
std::vector<double> parse_grid(const std::string& spec);

}  // namespace hyperdon::cli
