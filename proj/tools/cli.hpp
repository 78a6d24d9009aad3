#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ccmssc::cli {

// Process exit codes. Each failure class has its own code and message prefix.
enum ExitCode : int {
  kOk = 0,
  kTimeLimit = 1,
  kUsage = 2,
  kFileNotFound = 3,
  kMalformedData = 4,
  kCardinalityMismatch = 5,
  kInvalidConfig = 6,
  kInternal = 7,
};

/// Solver front end. args excludes the program name. The report goes to
/// --out or to `out`; diagnostics and the one-line summary go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Root bounds for every manifest entry, compared against its expectations.
/// Returns 0 when every check passes.
int run_bench(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses "15,20,17,23" or whitespace separated integers; throws
/// std::invalid_argument on anything else.
std::vector<int> parse_cards(const std::string& text);

}  // namespace ccmssc::cli
