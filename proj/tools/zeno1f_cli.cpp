#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "zeno1f/runner.hpp"

// exit codes: 0 success, 1 runtime failure, 2 bad config / usage
int main(int argc, char** argv) {
    CLI::App app{"open-system measurement-protocol simulator"};
    app.set_version_flag("--version", std::string(zeno1f::kVersionString));
    app.require_subcommand(1);

    std::string config_path;
    std::string figure_id;
    std::string figure_out;

    CLI::App* run = app.add_subcommand("run", "execute a sweep from a JSON config");
    run->add_option("config", config_path, "config file")->required()->check(CLI::ExistingFile);

    CLI::App* figure = app.add_subcommand("figure", "run a predefined parameter grid");
    figure->add_option("id", figure_id, "grid id: fig2, fig3, fig4, fig5")->required();
    figure->add_option("-o,--output", figure_out, "output directory");

    CLI::App* validate = app.add_subcommand("validate", "parse and validate a config, print its hash");
    validate->add_option("config", config_path, "config file")->required()->check(CLI::ExistingFile);

    CLI::App* oracle = app.add_subcommand("oracle", "run a reference backend (dense or niba)");
    oracle->add_option("config", config_path, "config file")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (validate->parsed()) {
            zeno1f::RunConfig cfg = zeno1f::parse_config_file(config_path);
            std::printf("ok %s\n", zeno1f::config_hash(cfg).c_str());
            return 0;
        }
        if (run->parsed()) {
            zeno1f::RunConfig cfg = zeno1f::parse_config_file(config_path);
            return zeno1f::run_sweep(cfg);
        }
        if (oracle->parsed()) {
            zeno1f::RunConfig cfg = zeno1f::parse_config_file(config_path);
            return zeno1f::run_oracle(cfg);
        }
        if (figure->parsed()) return zeno1f::figure_harness(figure_id, figure_out);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
