#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace codec::cli {

enum ExitCode : int { kOk = 0, kInputError = 2, kDegenerate = 3, kInternal = 4 };

/// Runs one subcommand (codec, foci, sim, bench). The JSON report goes to
/// `out`; diagnostics go to `err`.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace codec::cli
