#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace riskrl {

enum class Subcommand { run, solve, validate, compare };

struct CliInvocation {
    Subcommand subcommand = Subcommand::run;
    std::filesystem::path config_path;
    std::filesystem::path out_dir = "out";
    std::vector<std::string> overrides;  // dot.path=value
    int threads = 0;                     // 0: available parallelism
};

// Each command throws ConfigError / NumericError; dispatch maps them to
// exit codes 1 / 2 with a one-line diagnostic on err.
int cmd_run(const CliInvocation& inv, std::ostream& out, std::ostream& err);
int cmd_solve(const CliInvocation& inv, std::ostream& out, std::ostream& err);
int cmd_validate(const CliInvocation& inv, std::ostream& out, std::ostream& err);
int cmd_compare(const CliInvocation& inv, std::ostream& out, std::ostream& err);

int dispatch(const CliInvocation& inv, std::ostream& out, std::ostream& err);

// Full command line, argv[0] included.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace riskrl
