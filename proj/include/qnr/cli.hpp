#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "qnr/arith.hpp"
#include "qnr/schur.hpp"

namespace qnr::cli {

enum ExitCode : int { kOk = 0, kClaimFailed = 1, kUsage = 2 };

/// Runs one command line (without the program name). Data goes to `out`,
/// diagnostics and progress to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Argument parsers; each throws UsageError naming the flag.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Decimal integer, optionally written B^E or BeE (e.g. 10^7, 1e6).
u64 parse_count(const std::string& text, const std::string& flag);
/// "all" or "R/M" with 0 <= R < M.
schur::ClassFilter parse_class(const std::string& text, const std::string& flag);
/// "N/D" with D a power of two.
arith::Rational parse_dyadic(const std::string& text, const std::string& flag);

}  // namespace qnr::cli
