#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace thalparc::cli {

/// Runs one command line (args[0] is the program name). Failures print a
/// single "error: code=<code> msg=<text>" line to `err`; the return value
/// is the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace thalparc::cli
