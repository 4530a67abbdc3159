#pragma once

// Command dispatch behind the simcmd executable.

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>

#include "lceit/config.hpp"

namespace lceit::cli {

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitConfig = 2, kExitNonConvergence = 3, kExitIo = 4 };

struct Invocation {
    std::string command;                  // evolve | sweep | analytic | device | preset
    std::string config_path;
    std::optional<std::string> out;       // --out
    std::optional<std::size_t> threads;   // --threads
    bool stretch = false;                 // --stretch
    bool quiet = false;                   // suppress progress on err
};

/// Loads the config, applies overrides (flags over LCEIT_OUTPUT_DIR / LCEIT_THREADS
/// over the file), runs the mode and writes its files. Returns an ExitCode.
int run_command(const Invocation& inv, std::ostream& out, std::ostream& err);

/// Runs an already-parsed configuration (overrides applied).
int run_config(const RunConfig& cfg, std::ostream& out, std::ostream& err, bool quiet = false);

/// Output directory override applied to a relative path.
std::string resolve_output(const std::string& path);

}  // namespace lceit::cli
