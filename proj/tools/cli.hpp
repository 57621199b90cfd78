#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spectra::cli {

/// Exit codes shared by all commands.
enum ExitCode : int {
    kOk = 0,
    kError = 1,         // parse / validation / unsupported input
    kInconclusive = 2,  // some slice could not be decided (output still written)
    kTrendFailed = 3    // verify: asymptotic trend check failed
};

/// Parses "a..b" or "n1,n2,..." into mode indices (all >= 1), ascending and
/// without duplicates.
std::vector<int> parse_modes(const std::string& spec);

/// Entry point of the `spectra` tool. Results go to `out` unless --output is
/// given; failures print a single-line JSON error record to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spectra::cli
