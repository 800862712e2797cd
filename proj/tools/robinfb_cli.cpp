// robinfb: solve / certify / oracle / cutcheck / sweep.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "robinfb/run.hpp"

using namespace robinfb;

namespace {

RunConfig load(const std::string& path) { return parse_config(read_text(path)); }

int with_config(const std::string& path, const std::function<int(const RunConfig&)>& body) {
    RunConfig cfg;
    try {
        cfg = load(path);
    } catch (const ConfigError& e) {
        std::cerr << path << ": " << e.what() << '\n';
        return exit_config;
    }
    return body(cfg);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-phase Robin free-boundary solver"};
    app.require_subcommand(1);
    // --h is the grid spacing, so help is long-form only.
    app.set_help_flag("--help", "print this help and exit");

    std::string config;
    auto* solve = app.add_subcommand("solve", "minimize and certify");
    solve->add_option("config", config, "config file")->required();

    std::string u_path;
    std::string omega_path;
    auto* certify = app.add_subcommand("certify", "certificates on given fields");
    certify->add_option("config", config, "config file")->required();
    certify->add_option("--u", u_path, "node field CSV")->required();
    certify->add_option("--omega", omega_path, "cell set CSV")->required();

    double beta = 1.0;
    double a = 0.5;
    double h = 1.0 / 128;
    auto* oracle = app.add_subcommand("oracle", "closed-form slab solution");
    oracle->add_option("--beta", beta)->check(CLI::NonNegativeNumber);
    oracle->add_option("--a", a)->check(CLI::PositiveNumber);
    oracle->add_option("--h", h)->check(CLI::PositiveNumber);

    int trials = 100;
    std::uint64_t seed = 0;
    auto* cut = app.add_subcommand("cutcheck", "min-cut against exhaustive search");
    cut->add_option("--trials", trials)->check(CLI::PositiveNumber);
    cut->add_option("--seed", seed);

    std::vector<double> betas;
    std::vector<double> hs;
    auto* sw = app.add_subcommand("sweep", "final energies over beta x h");
    sw->add_option("config", config, "config file")->required();
    sw->add_option("--beta-list", betas)->delimiter(',')->required();
    sw->add_option("--h-list", hs)->delimiter(',')->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : exit_config;
    }

    if (*solve) return with_config(config, [](const RunConfig& c) { return run_solve(c).code; });
    if (*certify)
        return with_config(config, [&](const RunConfig& c) { return run_certify(c, u_path, omega_path).code; });
    if (*oracle) {
        try {
            std::cout << oracle_text(beta, a, h);
        } catch (const InvalidProblem& e) {
            std::cerr << "error: " << e.what() << '\n';
            return exit_config;
        }
        return exit_ok;
    }
    if (*cut) {
        const auto r = cutcheck(trials, seed);
        std::cout << "trials " << r.trials << " mismatches " << r.mismatches << " max_diff "
                  << format_double(r.max_diff) << '\n';
        return r.mismatches == 0 ? exit_ok : exit_solver;
    }
    if (*sw) {
        return with_config(config, [&](const RunConfig& c) {
            const auto rows = sweep(c, betas, hs);
            const std::string csv = sweep_csv(rows);
            std::cout << csv;
            const std::string dir = output_dir(c);
            std::filesystem::create_directories(dir);
            std::ofstream(dir + "/sweep.csv") << csv;
            int code = exit_ok;
            for (const auto& r : rows)
                if (r.code != exit_ok) {
                    std::cerr << "beta " << r.beta << " h " << r.h << ": " << r.error << '\n';
                    code = std::max(code, r.code);
                }
            return code;
        });
    }
    return exit_config;
}
