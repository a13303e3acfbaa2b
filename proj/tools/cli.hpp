#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace disclab::cli {

/// Runs one `disclab` invocation; `args` excludes the program name.
/// Returns 0 on success, 1 when verification fails, 2 on usage or solver
/// errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace disclab::cli
