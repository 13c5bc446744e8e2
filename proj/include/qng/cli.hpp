#ifndef QNG_CLI_HPP
#define QNG_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace qng {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitInvalidInput = 2,
    kExitNonphysical = 3,
};

/// Environment variable read for the default seed.
inline constexpr const char* kSeedEnv = "QNG_SEED";
inline constexpr unsigned long long kDefaultSeed = 1;

/// Runs one command. args excludes the program name. Results go to out
/// unless -o is given; diagnostics go to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace qng

#endif // QNG_CLI_HPP
