#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "vacrad/cli.hpp"
#include "vacrad/config.hpp"
#include "vacrad/error.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Vacuum radiation from a time-dependent permittivity"};
    app.set_version_flag("--version", std::string(vacrad::tool_version));
    app.require_subcommand(0, 1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir;
    int workers = 1;
    bool print_config = false;
    app.add_option("-c,--config", config_path, "flat [section] key = value config file");
    app.add_option("-s,--set", overrides, "override one key, e.g. --set solver.rel_tol=1e-9")
        ->type_name("SECTION.KEY=VALUE");
    app.add_option("-o,--out", out_dir, "output directory (overrides output.directory)");
    app.add_option("-j,--workers", workers, "worker threads for the mode sweep and sampling")
        ->check(CLI::PositiveNumber);
    app.add_flag("--print-config", print_config, "print the canonical config and exit");

    const std::map<std::string_view, std::string> help{
        {"profile", "tabulate eps(t) into profile.csv"},
        {"modes", "integrate one mode (solver.k) into trajectory.csv"},
        {"bogolubov", "alpha, beta over the k grid into bogolubov.csv"},
        {"spectrum", "photon spectrum and radiated energy"},
        {"squeeze", "squeezed in-vacuum photon and pair statistics"},
        {"constraints", "Gupta-Bleuler residuals for vacuum, calibrated and uncalibrated states"},
        {"radiate", "odd-photon emission distribution, term decomposition and sampled correlations"},
    };
    for (auto name : vacrad::subcommands())
        app.add_subcommand(std::string(name), help.at(name))->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? vacrad::exit_ok : vacrad::exit_usage;
    }

    vacrad::RunConfig config;
    try {
        if (!config_path.empty()) config = vacrad::load_config(config_path);
        for (const auto& o : overrides) vacrad::apply_override(config, o);
        if (!out_dir.empty()) config.output.directory = out_dir;
    } catch (const vacrad::Error& e) {
        std::cerr << "vacrad: config error: " << e.what() << '\n';
        return vacrad::exit_usage;
    }

    if (print_config) {
        std::cout << vacrad::emit_config(config);
        return vacrad::exit_ok;
    }
    const auto chosen = app.get_subcommands();
    if (chosen.empty()) {
        std::cerr << app.help();
        return vacrad::exit_usage;
    }
    return vacrad::run(chosen.front()->get_name(), config, workers, std::cerr);
}
