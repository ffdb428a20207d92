#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rcthermo::cli {

// Exit codes: 0 success, 1 numeric-domain or numerical failure (one JSON line
// on `err`), 2 usage error (usage text on `err`).
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace rcthermo::cli
