#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pmdq/scan.hpp"

namespace pmdq {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitNumeric = 3, kExitProtocol = 4 };

struct CommandOptions {
    std::string config_path;
    std::optional<std::string> out;
    std::optional<Engine> engine;
    unsigned threads = 1;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> scans;  // recover: overrides recover.scans
};

/// Runs `scan`, `predict` or `recover`. Diagnostics go to `err`; data goes
/// to the output file, or to `out` when no path is configured.
int run_command(const std::string& command, const CommandOptions& options, std::ostream& out, std::ostream& err);

}  // namespace pmdq
