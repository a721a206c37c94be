#ifndef FOLEVAL_TOOLS_CLI_H_
#define FOLEVAL_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace foleval {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

// Runs the foleval command line. args excludes the program name. Messages go
// to out and err.
int RunCli(const std::vector<std::string> &args, std::ostream &out,
           std::ostream &err);

}  // namespace foleval

#endif  // FOLEVAL_TOOLS_CLI_H_
