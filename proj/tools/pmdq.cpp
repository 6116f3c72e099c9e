#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pmdq/cli.hpp"
#include "pmdq/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Simulate PMD interferometers and recover dispersion parameters"};
    app.require_subcommand(1);
    pmdq::CommandOptions options;
    std::string engine;
    std::uint64_t seed = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("config", options.config_path, "experiment config (JSON)")->required();
        sub->add_option("--out", options.out, "output path (overrides output.path)");
        sub->add_option("--engine", engine, "analytic, numeric or auto")
            ->check(CLI::IsMember({"analytic", "numeric", "auto"}));
        sub->add_option("--threads", options.threads, "worker threads for scans")->check(CLI::Range(1u, 1024u));
        sub->add_option("--seed", seed, "noise seed (overrides noise.seed)");
    };
    CLI::App* scan = app.add_subcommand("scan", "simulate a delay scan");
    CLI::App* predict = app.add_subcommand("predict", "tabulate predicted Type B feature positions");
    CLI::App* recover = app.add_subcommand("recover", "recover dispersion parameters from scan files");
    for (CLI::App* sub : {scan, predict, recover}) add_common(sub);
    recover->add_option("scans", options.scans, "scan files (override recover.scans)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : pmdq::kExitConfig;
    }
    if (!engine.empty()) options.engine = pmdq::parse_engine(engine);
    for (CLI::App* sub : {scan, predict, recover})
        if (sub->parsed() && sub->count("--seed")) options.seed = seed;
    const std::string command = scan->parsed() ? "scan" : predict->parsed() ? "predict" : "recover";
    return pmdq::run_command(command, options, std::cout, std::cerr);
}
