#pragma once

#include "sweeplink/config.hpp"

#include <iosfwd>
#include <string>

// CLI command implementations. Each command resolves the run configuration,
// writes its CSV artifacts plus a resolved.cfg snapshot into the output
// directory, and logs a short human-readable summary.

namespace sweeplink {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;  // configuration or runtime failure
inline constexpr int kExitNoPlan = 2; // no sweep frequency clears every reflection

struct CommandContext {
    RunConfig cfg;
    std::string out_dir;
    std::ostream* log = nullptr; // optional
};

int cmd_plan(const CommandContext& ctx);
int cmd_map(const CommandContext& ctx);
int cmd_sfr(const CommandContext& ctx);
int cmd_simulate(const CommandContext& ctx);
int cmd_osrr_scan(const CommandContext& ctx);
int cmd_budget_scan(const CommandContext& ctx);
int cmd_pilot(const CommandContext& ctx);

// Creates the output directory, snapshots the resolved configuration, and
// dispatches on the command name; throws std::invalid_argument for an
// unknown name.
int run_command(const std::string& name, const CommandContext& ctx);

} // namespace sweeplink
