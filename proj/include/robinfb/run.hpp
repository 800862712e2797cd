#pragma once

// Orchestration for the command-line tool. Exit codes: 0 ok, 1 solver
// failure, 2 certificate failure, 3 configuration error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "robinfb/config.hpp"
#include "robinfb/report.hpp"

namespace robinfb {

enum ExitCode : int { exit_ok = 0, exit_solver = 1, exit_certificate = 2, exit_config = 3 };

inline std::string read_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read " + path, 0);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

/// OUTPUT_DIR in the environment takes precedence over the config.
inline std::string output_dir(const RunConfig& c) {
    if (const char* env = std::getenv("OUTPUT_DIR"); env && *env) return env;
    return c.output_dir;
}

inline void write_report(const std::string& dir, const Json& report) {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir + "/report.txt");
    if (!out) throw Error("cannot write " + dir + "/report.txt");
    out << report.dump(2) << '\n';
}

struct RunOutcome {
    int code = exit_ok;
    Json report;
    std::string message;
};

/// minimize, then the selected certificates; writes report.txt, u.csv, omega.csv.
inline RunOutcome run_solve(const RunConfig& cfg, std::ostream& log = std::cerr) {
    RunOutcome out;
    try {
        const Domain dom = make_domain(cfg);
        const SolveReport rep = minimize(make_solve_config(cfg, dom), dom);
        const auto suite =
            run_certificates(rep.u, rep.omega, cfg.beta, cfg.v, dom, make_certificate_options(cfg));
        out.report = to_json(rep);
        out.report["certificates"] = to_json(suite);
        out.report["certificates_pass"] = suite.pass();
        const std::string dir = output_dir(cfg);
        write_report(dir, out.report);
        write_file(dir + "/u.csv", rep.u, dom.grid(), write_nodes);
        write_file(dir + "/omega.csv", rep.omega, dom.grid(), write_cells);
        log << "final energy " << format_double(rep.final_energy.total) << ", " << rep.termination << '\n';
        for (const auto& r : suite.reports)
            log << "  " << r.check << ": " << (r.pass() ? "pass" : "FAIL") << " (" << to_string(r.status) << ")\n";
        out.code = suite.pass() ? exit_ok : exit_certificate;
    } catch (const ConfigError& e) {
        out.code = exit_config;
        out.message = e.what();
    } catch (const InvalidProblem& e) {
        out.code = exit_config;
        out.message = e.what();
    } catch (const std::exception& e) {
        out.code = exit_solver;
        out.message = e.what();
    }
    if (!out.message.empty()) log << "error: " << out.message << '\n';
    return out;
}

/// Certificates on externally supplied fields.
inline RunOutcome run_certify(const RunConfig& cfg, const std::string& u_path, const std::string& omega_path,
                              std::ostream& log = std::cerr) {
    RunOutcome out;
    try {
        const Domain dom = make_domain(cfg);
        auto u_in = open_input(u_path);
        auto o_in = open_input(omega_path);
        const ScalarField u = read_nodes(u_in, dom.grid());
        const CellSet omega = read_cells(o_in, dom.grid());
        if (!dom.is_admissible(omega)) throw InvalidField("omega does not agree with E outside D");
        const auto suite = run_certificates(u, omega, cfg.beta, cfg.v, dom, make_certificate_options(cfg));
        out.report = Json{{"certificates", to_json(suite)}, {"certificates_pass", suite.pass()}};
        write_report(output_dir(cfg), out.report);
        for (const auto& r : suite.reports)
            log << "  " << r.check << ": " << (r.pass() ? "pass" : "FAIL") << " (" << to_string(r.status) << ")\n";
        out.code = suite.pass() ? exit_ok : exit_certificate;
    } catch (const ConfigError& e) {
        out.code = exit_config;
        out.message = e.what();
    } catch (const InvalidProblem& e) {
        out.code = exit_config;
        out.message = e.what();
    } catch (const std::exception& e) {
        out.code = exit_solver;
        out.message = e.what();
    }
    if (!out.message.empty()) log << "error: " << out.message << '\n';
    return out;
}

/// Closed-form slab table at node heights -a, -a+h, ..., a.
inline std::string oracle_text(double beta, double a, double h) {
    const auto s = slab_solution(beta, a);
    const int rows = cells_spanning(2.0 * a, h, "slab thickness 2a");
    std::ostringstream os;
    os << "c " << format_double(s.c) << "\nslope " << format_double(s.slope) << "\ndirichlet "
       << format_double(s.dirichlet) << "\nsurface " << format_double(s.surface) << "\ntotal "
       << format_double(s.total) << "\nx2,g\n";
    for (int k = 0; k <= rows; ++k) {
        const double x2 = -a + k * h;
        os << format_double(x2) << ',' << format_double(s(x2)) << '\n';
    }
    return os.str();
}

/// Random cut instance with at most `max_free` free cells: a block of D
/// cells between a frozen row in E (top) and one outside E (bottom).
struct CutInstance {
    Domain dom;
    ScalarField u;
    double beta;
};

inline CutInstance random_cut_instance(std::mt19937_64& rng, int max_free = 12) {
    std::uniform_int_distribution<int> side(2, 4);
    int n1;
    int rows;
    do {
        n1 = side(rng);
        rows = side(rng);
    } while (n1 * rows > max_free);
    const bool periodic = std::bernoulli_distribution(0.5)(rng);
    Grid g(n1, rows + 2, 1.0 / n1, {}, periodic ? LateralBc::periodic : LateralBc::dirichlet);
    DomainMask m;
    m.in_D.assign(g.cell_count(), 0);
    m.in_E.assign(g.cell_count(), 0);
    for (int j = 0; j < g.n2(); ++j)
        for (int i = 0; i < n1; ++i) {
            m.in_D[g.cell(i, j)] = j >= 1 && j <= rows;
            m.in_E[g.cell(i, j)] = j == rows + 1;
        }
    Domain dom(g, std::move(m));
    ScalarField u(g);
    std::uniform_real_distribution<double> val(0.0, 2.0);
    for (auto& x : u.values()) x = val(rng);
    sync_periodic(g, u);
    const double beta = std::uniform_real_distribution<double>(0.1, 3.0)(rng);
    return {std::move(dom), std::move(u), beta};
}

struct CutCheck {
    int trials = 0;
    int mismatches = 0;
    double max_diff = 0.0;
};

inline CutCheck cutcheck(int trials, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    CutCheck out;
    for (int t = 0; t < trials; ++t) {
        const auto inst = random_cut_instance(rng);
        const double a = solve_set(inst.u, inst.beta, inst.dom).cut_value;
        const double b = brute_force_set(inst.u, inst.beta, inst.dom).cut_value;
        const double d = std::abs(a - b);
        out.max_diff = std::max(out.max_diff, d);
        if (d > 1e-12) ++out.mismatches;
        ++out.trials;
    }
    return out;
}

struct SweepRow {
    double beta = 0.0;
    double h = 0.0;
    int code = exit_ok;
    EnergyBreakdown energy;
    std::string termination;
    std::string error;
};

/// Every (beta, h) pair solved concurrently; rows come back in input order.
inline std::vector<SweepRow> sweep(const RunConfig& base, const std::vector<double>& betas,
                                   const std::vector<double>& hs) {
    std::vector<std::future<SweepRow>> jobs;
    for (double b : betas)
        for (double h : hs)
            jobs.push_back(std::async(std::launch::async, [base, b, h] {
                SweepRow row;
                row.beta = b;
                row.h = h;
                try {
                    RunConfig c = base;
                    c.beta = b;
                    c.h = h;
                    validate(c);
                    const Domain dom = make_domain(c);
                    const auto rep = minimize(make_solve_config(c, dom), dom);
                    row.energy = rep.final_energy;
                    row.termination = rep.termination;
                } catch (const ConfigError& e) {
                    row.code = exit_config;
                    row.error = e.what();
                } catch (const InvalidProblem& e) {
                    row.code = exit_config;
                    row.error = e.what();
                } catch (const std::exception& e) {
                    row.code = exit_solver;
                    row.error = e.what();
                }
                return row;
            }));
    std::vector<SweepRow> rows;
    for (auto& j : jobs) rows.push_back(j.get());
    return rows;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "beta,h,dirichlet,surface,total,termination\n";
    for (const auto& r : rows) {
        os << format_double(r.beta) << ',' << format_double(r.h) << ',';
        if (r.code == exit_ok)
            os << format_double(r.energy.dirichlet) << ',' << format_double(r.energy.surface) << ','
               << format_double(r.energy.total) << ',' << r.termination << '\n';
        else
            os << ",,,error\n";
    }
    return os.str();
}

} // namespace robinfb
