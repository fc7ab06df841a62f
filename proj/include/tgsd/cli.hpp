#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tgsd::cli {

/// Runs one `tgsd` invocation. `args[0]` is the program name. Returns the
/// process exit code: 0 ok, 2 config error, 3 data error, 4 numeric failure,
/// 1 for anything unexpected. Failures print one line to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args);

}  // namespace tgsd::cli
