// simcmd {evolve|sweep|analytic|device|preset} --config <path> [--out <path>] [--threads N] [--stretch]

#include <iostream>

#include "CLI11.hpp"
#include "lceit/app.hpp"
#include "lceit/config.hpp"

int main(int argc, char** argv) {
    using namespace lceit::cli;
    CLI::App app{"Longitudinal-coupling EIT simulator"};
    app.footer("\n" + config_reference() +
               "\nExit codes: 0 success, 2 configuration error, 3 numerical non-convergence, 4 I/O error.");
    app.require_subcommand(1);

    Invocation inv;
    std::size_t threads = 0;
    for (const char* name : {"evolve", "sweep", "analytic", "device", "preset"}) {
        CLI::App* sub = app.add_subcommand(name, std::string("run mode ") + name);
        sub->add_option("--config", inv.config_path, "configuration file (YAML)")->required();
        sub->add_option("--out", inv.out, "output file stem, or directory for presets");
        sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
        sub->add_flag("--stretch", inv.stretch, "enable cost-guarded preset members");
        sub->add_flag("--quiet", inv.quiet, "no progress output");
        sub->callback([&inv, name] { inv.command = name; });
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }
    if (threads > 0) inv.threads = threads;
    return run_command(inv, std::cout, std::cerr);
}
