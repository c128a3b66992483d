#include "susy/config.hpp"
#include "susy/runner.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

int execute(susy::Command command, const std::string& config_path, const std::string& output_dir) {
    susy::RunConfig cfg;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "cannot read config file: " << config_path << "\n";
            return 1;
        }
        try {
            cfg = susy::parse_config(in);
        } catch (const susy::ConfigError& e) {
            for (const auto& msg : e.errors()) std::cerr << "config error: " << msg << "\n";
            return 1;
        }
    } else {
        cfg = susy::default_config();
    }
    cfg.command = command;
    if (!output_dir.empty()) cfg.output_dir = output_dir;

    const int code = susy::run(cfg);
    std::cout << "report: " << cfg.output_dir << "/report (exit " << code << ")\n";
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"shape-invariant potential toolkit: factorization, weighted partner operators, "
                 "next-generation extensions and isospectral-deformation cross-checks"};
    app.require_subcommand(1);

    struct Sub {
        susy::Command cmd;
        std::string name;
        std::string help;
    };
    const std::vector<Sub> subs = {
        {susy::Command::catalog, "catalog", "dump the superpotential family catalog"},
        {susy::Command::factorize, "factorize", "partner potentials, weights and the base shape-invariance residual"},
        {susy::Command::spectrum, "spectrum", "partner spectra and their isospectral matching"},
        {susy::Command::extend, "extend", "build the stage-n extension tree"},
        {susy::Command::deform, "deform", "isospectral-deformation route and its coincidence check"},
        {susy::Command::verify, "verify", "run the identity battery for one configuration"},
        {susy::Command::scan, "scan", "singularity scan of the configured extension"},
    };

    std::string config_path, output_dir;
    std::vector<std::pair<CLI::App*, susy::Command>> handlers;
    for (const auto& s : subs) {
        CLI::App* sc = app.add_subcommand(s.name, s.help);
        sc->add_option("--config", config_path, "run configuration file");
        sc->add_option("--output", output_dir, "output directory (overrides config)");
        handlers.emplace_back(sc, s.cmd);
    }
    CLI::App* defaults = app.add_subcommand("defaults", "print the built-in default configuration");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 1 : 0;
    }

    if (defaults->parsed()) {
        std::cout << susy::serialize_config(susy::default_config());
        return 0;
    }
    for (const auto& [sc, cmd] : handlers) {
        if (sc->parsed()) return execute(cmd, config_path, output_dir);
    }
    return 1;
}
