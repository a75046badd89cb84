#pragma once

#include <iosfwd>
#include <optional>
#include <string>

namespace jetvar::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFailure = 2; ///< verification failure or a mathematical error

struct Command
{
    std::string subcommand; ///< el, momentum, noether, helmholtz, jacobi, bianchi, superpotential, check, second-variation
    std::string input;      ///< path, or "-" for stdin
    std::string format = "text";
    std::optional<std::string> lagrangian;
    std::optional<std::string> field;
    std::optional<std::string> vfield;
    std::optional<std::string> gauge;
    std::optional<std::string> source;
    bool verify = false;
    /// Highest Lagrangian order accepted; JETVAR_MAX_ORDER overrides the default.
    int max_order = 3;
};

/// Runs one command. Results go to `out`, diagnostics to `err`.
int run(Command const& cmd, std::istream& in, std::ostream& out, std::ostream& err);

/// Argument parsing plus run(); what the jetvar executable calls.
int main(int argc, char const* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

} // namespace jetvar::cli
