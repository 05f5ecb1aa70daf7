#pragma once

#include <string>
#include <vector>

namespace gdnm::cli {

/// Runs the command-line tool on the given arguments (without argv[0]).
/// Exit codes: 0 success/converged, 1 input or validation error,
/// 2 solver failure.
int run(const std::vector<std::string>& args);

} // namespace gdnm::cli
