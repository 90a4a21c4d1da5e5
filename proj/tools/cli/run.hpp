#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace l1ssl::cli {

enum ExitCode : int { kSuccess = 0, kUsageError = 1, kNumericalError = 2 };

/// Parses `args` (without the program name), runs the selected command,
/// writes its files into --output when given, and prints the metrics
/// document to `out`. Diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace l1ssl::cli
