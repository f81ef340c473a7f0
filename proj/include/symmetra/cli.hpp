#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace symmetra {

/// Exit codes of the command-line front end.
inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_failure = 2;

/// Runs one command line (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Shortest form that parses back to the same double (17 significant digits).
std::string format_number(double x);

/// "4/3", "1.5" or "2".
double parse_fraction(const std::string& text);

}  // namespace symmetra
