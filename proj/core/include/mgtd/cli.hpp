#ifndef MGTD_CLI_HPP
#define MGTD_CLI_HPP

#include <string>
#include <vector>

namespace mgtd::cli {

// Exit codes: 0 success, 1 usage error, 2 data/model error.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

// Runs one mgtdetect invocation; args excludes the program name.
int run(const std::vector<std::string>& args);

int run(int argc, const char* const* argv);

}  // namespace mgtd::cli

#endif  // MGTD_CLI_HPP
