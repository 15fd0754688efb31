#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nilcohom::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

/// Runs one `nilcohom` invocation. `args` excludes the program name. The
/// JSON report goes to `out` unless --out names a file; diagnostics go to
/// `err`. Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace nilcohom::app
