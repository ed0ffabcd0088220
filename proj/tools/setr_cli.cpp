#include <iostream>
#include <map>
#include <string>
#include <thread>

#include "CLI11.hpp"

#include "setr/app/commands.hpp"

using namespace setr::app;

int main(int argc, char** argv) {
    CLI::App cli{"Single event transition risk of a carbon-exposed share"};
    cli.set_version_flag("--version", std::string(kToolVersion));
    cli.require_subcommand(1);

    CommandOptions options;
    std::string out_dir;
    std::size_t paths = 0;
    std::uint64_t seed = 0;
    std::string format = "json";

    const std::map<std::string, OutputFormat> formats{{"json", OutputFormat::Json},
                                                      {"csv", OutputFormat::Csv}};
    const std::map<std::string, Command> commands{
        {"compute", Command::Compute},
        {"curve", Command::Curve},
        {"simulate", Command::Simulate},
        {"verify", Command::Verify},
    };
    const std::map<std::string, std::string> help{
        {"compute", "Compute the configured SETR value"},
        {"curve", "Strong no-arbitrage SETR curve over the configured grid"},
        {"simulate", "Simulate paired price paths and write them as CSV"},
        {"verify", "Check the no-arbitrage identity by Monte Carlo"},
    };

    std::map<std::string, CLI::App*> subs;
    std::map<std::string, CLI::Option*> path_opts;
    for (const auto& [name, cmd] : commands) {
        CLI::App* sub = cli.add_subcommand(name, help.at(name));
        sub->add_option("--config", options.config, "Scenario file (JSON)")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "Output directory");
        sub->add_option("--seed", seed, "Master seed, overrides the scenario seed");
        sub->add_option("--format", format, "Format printed to stdout (json or csv)")
            ->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--threads", options.threads, "Worker threads for path simulation")
            ->check(CLI::Range(1u, 1024u));
        if (cmd == Command::Simulate || cmd == Command::Verify)
            path_opts[name] = sub->add_option("--paths", paths, "Number of paths");
        subs[name] = sub;
    }

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = cli.exit(e);
        return code == 0 ? 0 : exit_code::invalid;
    }

    for (const auto& [name, sub] : subs) {
        if (!sub->parsed()) continue;
        options.format = formats.at(format);
        if (!out_dir.empty()) options.out = out_dir;
        if (sub->count("--seed")) options.seed = seed;
        if (auto it = path_opts.find(name); it != path_opts.end() && it->second->count())
            options.paths = paths;
        return run_command(commands.at(name), options, std::cout, std::cerr);
    }
    return exit_code::invalid;
}
