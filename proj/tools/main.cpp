#include "sweeplink/commands.hpp"

#include "CLI11.hpp"

#include <cstdint>
#include <iostream>
#include <string>

int main(int argc, char** argv)
{
    CLI::App app{"sweeplink: sweep planning and link simulation for reflection-limited "
                 "coherent access links"};
    app.fallthrough();

    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    app.add_option("--config", config_path, "run configuration file (dotted keys)")
        ->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory for CSV artifacts");
    CLI::Option* seed_opt = app.add_option("--seed", seed, "payload seed override");

    app.require_subcommand(1);
    app.add_subcommand("plan", "common sweep frequency across all reflections");
    app.add_subcommand("map", "overlap probability vs sweep frequency and band share");
    app.add_subcommand("sfr", "per-reflection usable sweep-frequency intervals");
    app.add_subcommand("simulate", "four-case link run at the configured operating point");
    app.add_subcommand("osrr-scan", "link run swept over reflection ratios");
    app.add_subcommand("budget-scan", "link run swept over loss budgets");
    app.add_subcommand("pilot", "pilot-tone sweep verification spectra");

    CLI11_PARSE(app, argc, argv);

    try {
        sweeplink::CommandContext ctx;
        if (!config_path.empty()) ctx.cfg = sweeplink::load_config_file(config_path);
        if (seed_opt->count() > 0) ctx.cfg.link_payload_seed = seed;
        ctx.out_dir = out_dir;
        ctx.log = &std::cout;
        return sweeplink::run_command(app.get_subcommands().front()->get_name(), ctx);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return sweeplink::kExitError;
    }
}
