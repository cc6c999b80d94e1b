#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <stdexcept>

#include "subweibull/cli/config.hpp"
#include "subweibull/cli/experiments.hpp"
#include "subweibull/errors.hpp"

namespace sw = subweibull;
namespace cli = subweibull::cli;

int main(int argc, char** argv) {
    CLI::App app{"Sub-Weibull concentration experiment runner"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    unsigned workers = 0;
    std::uint64_t seed = 0;
    auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
    run->add_option("config", config_path, "key=value config file")->required();
    auto* out_opt = run->add_option("--out", out_dir, "Output directory (default: out, or the config's out key)");
    auto* workers_opt = run->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
    auto* seed_opt = run->add_option("--seed", seed, "Override the config seed");
    app.add_subcommand("list", "Print the registered experiments");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (app.got_subcommand("list")) {
        for (const auto& name : cli::registered_experiments()) std::cout << name << '\n';
        return 0;
    }

    try {
        const auto cfg = cli::load_config(config_path);
        cli::RunOptions opts;
        if (*out_opt) opts.out_dir = out_dir;
        else if (cfg.has("out")) opts.out_dir = cfg.text("out", "out");
        if (*workers_opt) opts.workers = workers;
        if (*seed_opt) opts.seed = seed;
        const auto manifest = cli::run(cfg, opts);
        std::cout << manifest.experiment << ": wrote " << manifest.files.size() << " files and manifest.json\n";
        return 0;
    } catch (const sw::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const sw::InvariantViolation& e) {
        std::cerr << "invariant violated: " << e.what() << '\n';
        return 3;
    } catch (const sw::IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
