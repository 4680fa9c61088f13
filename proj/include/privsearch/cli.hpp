#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace privsearch {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDomain = 3;
inline constexpr int kExitIO = 4;

// args excludes the program name. Reports go to --out (written via a
// temporary file and rename) or to out; error objects go to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace privsearch
