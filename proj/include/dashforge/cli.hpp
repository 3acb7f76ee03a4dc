#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dashforge {

// Exit codes: 0 ok, 1 pipeline error, 2 usage or I/O error. Reports go to
// `out` as JSON; human-readable summaries go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dashforge
