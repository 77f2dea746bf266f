#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace latloc {

// Exit codes: 0 success, 1 unexpected failure, 2 invalid input or flags.
// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in);

}  // namespace latloc
