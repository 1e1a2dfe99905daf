#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fdrlab {

// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;   // bad flags, unreadable or malformed input
inline constexpr int kExitDomain = 2;  // numerical domain errors, degenerate scale

// One real per line, or a single-column CSV with an optional non-numeric
// header on the first line. Blank lines and lines starting with '#' are
// skipped. Errors name the file and the offending line.
std::vector<double> read_data_file(const std::string& path);

// Runs the fdrlab command line. argv[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fdrlab
