#pragma once

#include <iosfwd>
#include <string>

#include "incentives/io.hpp"

namespace incentives::cli {

enum ExitCode : int { kOk = 0, kInternal = 1, kInputError = 2, kNegative = 3 };

/// Full machine-readable report of a named worked example ("example1" or
/// "appendixE"). Throws InputError for unknown names.
io::Json demo_report(const std::string& name);

/// Entry point shared by the executable and the tests. Reads "-" inputs from
/// `in`, writes reports to `out` (or --output), diagnostics to `err`.
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace incentives::cli
