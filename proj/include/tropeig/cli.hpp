#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tropeig::cli {

/// Runs the `tropeig` command line; args exclude the program name.
/// Returns 0 on success, 1 when --require is set and a verdict fails,
/// 2 on usage, input, or capacity errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tropeig::cli
