#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "debtgame/cli.hpp"

using namespace debtgame;

int main(int argc, char** argv) {
    CLI::App app{"Debt-ceiling game: thresholds, sweeps and Monte Carlo checks"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_path;
    Overrides over;
    app.add_option("--config", config_path, "JSON config")->required();
    app.add_option("--out", out_path, "output file (sweep)");
    app.add_option("--seed", over.seed, "Monte Carlo seed");
    app.add_option("--paths", over.paths, "Monte Carlo path count");
    app.add_option("--dt", over.dt, "Euler step");
    app.add_option("--vary", over.vary, "parameter to sweep");
    app.add_option("--lo", over.lo, "sweep lower end");
    app.add_option("--hi", over.hi, "sweep upper end");
    app.add_option("--n", over.n, "sweep points");
    app.add_option("--spacing", over.spacing, "linear, log or geometric-to-boundary");

    auto* check = app.add_subcommand("check", "validate parameters and report the regime");
    auto* roots = app.add_subcommand("roots", "characteristic roots and closed-form thresholds");
    auto* nash = app.add_subcommand("nash", "solve the equilibrium, one CSV row");
    auto* sweep = app.add_subcommand("sweep", "comparative statics over one parameter");
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo against the closed forms");
    auto* deviation = app.add_subcommand("deviation", "unilateral-deviation certificate");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    AppConfig config;
    try {
        config = load_config(config_path);
        apply_overrides(config, over);
    } catch (const Error& e) {
        std::cerr << "config: " << to_string(e.kind()) << ": " << e.what() << "\n";
        return exit_code(e.kind());
    }

    try {
        if (check->parsed()) return cmd_check(config, std::cout, std::cerr);
        if (roots->parsed()) return cmd_roots(config, std::cout, std::cerr);
        if (nash->parsed()) return cmd_nash(config, std::cout, std::cerr);
        if (sweep->parsed()) return cmd_sweep(config, out_path, std::cout, std::cerr);
        if (simulate->parsed()) return cmd_simulate(config, std::cout, std::cerr);
        if (deviation->parsed()) return cmd_deviation(config, std::cout, std::cerr);
    } catch (const Error& e) {
        std::cerr << to_string(e.kind()) << ": " << e.what() << "\n";
        return exit_code(e.kind());
    }
    return 1;
}
