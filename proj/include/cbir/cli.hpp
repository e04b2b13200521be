#ifndef CBIR_CLI_HPP
#define CBIR_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace cbir {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Runs one `cbir` invocation. args excludes the program name. Results go to
// `out`, diagnostics to `err`; the return value is the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cbir

#endif  // CBIR_CLI_HPP
