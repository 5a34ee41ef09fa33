#ifndef CONSPEC_TOOLS_CLI_H_
#define CONSPEC_TOOLS_CLI_H_

#include <iosfwd>

namespace conspec {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // check/lint findings, engine errors
inline constexpr int kExitUsage = 2;
inline constexpr int kExitModelLoad = 3;

// Entry point of the `conspec` tool, with injectable streams for tests.
int RunCli(int argc, const char *const *argv, std::istream &in,
           std::ostream &out, std::ostream &err);

}  // namespace conspec

#endif  // CONSPEC_TOOLS_CLI_H_
