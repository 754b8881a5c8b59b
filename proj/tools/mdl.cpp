#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "mdl/errors.hpp"
#include "mdl/experiment.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo toolkit for the diversity of linear MMSE/ZF MIMO receivers"};
    app.require_subcommand(1);

    const struct {
        const char* name;
        const char* desc;
    } commands[] = {
        {"formula", "print the closed-form diversity values for a config"},
        {"sweep", "Monte Carlo outage sweep over an SNR grid"},
        {"ser", "uncoded QPSK symbol-error sweep (flat scheme)"},
        {"slope", "fit a diversity slope to a sweep CSV and emit a verdict"},
        {"verify", "run every structural invariant suite"},
        {"figure", "reproduce a named multi-rate figure bundle (fig1..fig5)"},
    };

    std::string spec_path;
    std::string out_dir = ".";
    int threads = 0;
    std::optional<std::uint64_t> seed_override;
    std::uint64_t seed_value = 0;

    for (const auto& cmd : commands) {
        CLI::App* sub = app.add_subcommand(cmd.name, cmd.desc);
        sub->add_option("--spec", spec_path, "experiment spec (JSON)")->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--threads", threads, "worker count (default: MDL_THREADS or all cores)");
        sub->add_option("--seed", seed_value, "override the spec's master_seed");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    CLI::App* active = app.get_subcommands().front();
    if (active->count("--seed") > 0) seed_override = seed_value;
    const std::string command = active->get_name();
    try {
        return mdl::run_command(command, spec_path, out_dir, threads, seed_override);
    } catch (const mdl::config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
