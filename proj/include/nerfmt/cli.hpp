#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nerfmt {

/// Runs the command-line tool in-process. `args` excludes the program
/// name. Returns 0 on success, 1 on usage errors, 2 on data errors.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nerfmt
