#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fplap/config.hpp"
#include "fplap/run.hpp"

// Command line front end. Every subcommand takes the same four flags; the
// config file carries the experiment, the flags only say what to run and
// where to put it. --threads must never change the produced bytes.

int main(int argc, char** argv) {
    CLI::App app{"fplap: nonlocal p-Dirichlet energies, tails, and estimate checks"};
    app.require_subcommand(1);

    const std::vector<std::pair<std::string, std::string>> subs = {
        {"solve", "minimize the energy and write the solution and convergence record"},
        {"tail", "evaluate the nonlocal tail from the [tail] section"},
        {"verify-caccioppoli", "energy of truncation times cutoff vs local + tail terms"},
        {"verify-log", "logarithm increment energy vs the constant-free bracket"},
        {"verify-poincare-log", "mean oscillation of the truncated log vs the bracket"},
        {"verify-sup", "local sup bound with delta interpolation"},
        {"degiorgi", "shrinking-ball truncation mass sequence A_j"},
        {"holder", "oscillation decay over dyadic balls and exponent fit"},
        {"check-lemma32", "randomized sweep of the elementary inequality"},
        {"all", "solve, then every verifier listed in [verify]"},
    };

    std::string config_path, out_dir;
    std::uint64_t seed = 0;
    int threads = 1;
    for (const auto& [name, help] : subs) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "experiment config file (ini or json)")
            ->required();
        sub->add_option("--out", out_dir, "report directory (overrides [output] directory)");
        sub->add_option("--seed", seed, "override the kernel (and lemma32) seed");
        sub->add_option("--threads", threads, "worker threads; results do not depend on it")
            ->check(CLI::PositiveNumber);
    }

    CLI11_PARSE(app, argc, argv);
    CLI::App* chosen = app.get_subcommands().front();

    try {
        fplap::RunConfig cfg = fplap::parse_config_file(config_path);
        if (chosen->count("--seed") > 0) fplap::apply_seed_override(cfg, seed);
        fplap::RunOutcome res =
            fplap::run_subcommand(cfg, chosen->get_name(), out_dir, threads);
        std::cout << res.out_dir << "\n";
        return res.status;
    } catch (const fplap::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
