#pragma once

// Alternating minimization with eps-continuation. Each sweep is an exact
// u-step (projected CG) followed by an exact Omega-step (min-cut), so the
// energy is monotone and the limit is a partial optimum: neither block can be
// improved alone. No claim of global optimality for the joint problem.

#include <chrono>
#include <cmath>
#include <optional>
#include <tuple>
#include <string>
#include <vector>

#include "robinfb/set_solver.hpp"
#include "robinfb/state_solver.hpp"

namespace robinfb {

struct SolveConfig {
    double beta = 1.0;
    ScalarField boundary;          ///< v on every node (only the Dirichlet layer matters)
    double eps0 = 0.5;
    double eps_min = 1e-3;
    double rho = 0.5;
    double tol_outer = 1e-9;       ///< relative energy decrease per sweep
    int max_outer = 50;            ///< sweeps per eps level
    double tol_cg = 1e-10;
    int max_iter = 0;              ///< CG iterations per u-step, 0 = default
    std::optional<ScalarField> initial_u;
    std::optional<CellSet> initial_omega;
    bool cold_start = false;       ///< testing only: restart every level from scratch
};

enum class StepKind { initial, state, set };

inline const char* to_string(StepKind k) {
    switch (k) {
    case StepKind::initial: return "initial";
    case StepKind::state: return "state";
    case StepKind::set: return "set";
    }
    return "?";
}

struct TraceEntry {
    int level = 0;
    StepKind kind = StepKind::initial;
    EnergyBreakdown energy;
};

struct SolveReport {
    std::vector<TraceEntry> energy_trace;
    std::vector<double> eps_levels;
    std::vector<int> iters;                     ///< sweeps per level
    std::vector<std::string> level_termination; ///< "converged" | "max_outer"
    std::vector<double> level_final_energy;
    EnergyBreakdown final_energy;
    ScalarField u;
    CellSet omega;
    int state_iterations = 0;                   ///< total CG iterations
    bool degenerate_set_step = false;
    double wall_time_s = 0.0;
    std::string termination;
};

/// Geometric schedule eps0, rho*eps0, ... with the last level clamped to eps_min.
inline std::vector<double> continuation_schedule(double eps0, double eps_min, double rho) {
    if (!(rho > 0.0 && rho < 1.0)) throw InvalidProblem("continuation factor must lie in (0,1)");
    if (!(eps_min > 0.0 && eps_min <= eps0)) throw InvalidProblem("need 0 < eps_min <= eps0");
    std::vector<double> levels{eps0};
    double e = eps0;
    while (e > eps_min) {
        e *= rho;
        if (e < eps_min) e = eps_min;
        levels.push_back(e);
    }
    return levels;
}

inline void validate(const SolveConfig& cfg, const Domain& dom) {
    require_match(dom.grid(), cfg.boundary, "SolveConfig");
    if (!(cfg.beta >= 0.0) || !std::isfinite(cfg.beta)) throw InvalidProblem("beta must be non-negative");
    const double m = boundary_minimum(cfg.boundary, dom);
    if (!(m > 0.0)) throw InvalidProblem("boundary data must be bounded below by m > 0");
    if (!(cfg.eps0 < m)) throw InvalidProblem("eps0 must be below m");
    if (!(cfg.tol_outer > 0.0)) throw InvalidProblem("tol_outer must be positive");
    if (cfg.max_outer < 1) throw InvalidProblem("max_outer must be at least 1");
    if (cfg.initial_omega && !dom.is_admissible(*cfg.initial_omega))
        throw InvalidProblem("initial Omega is not admissible");
    continuation_schedule(cfg.eps0, cfg.eps_min, cfg.rho);
}

inline SolveReport minimize(const SolveConfig& cfg, const Domain& dom) {
    const auto start = std::chrono::steady_clock::now();
    validate(cfg, dom);
    SolveReport rep;
    rep.eps_levels = continuation_schedule(cfg.eps0, cfg.eps_min, cfg.rho);

    auto initial_state = [&]() {
        ScalarField u = cfg.initial_u ? *cfg.initial_u : harmonic_majorant(dom, cfg.boundary, cfg.tol_cg, cfg.max_iter);
        CellSet omega = cfg.initial_omega ? *cfg.initial_omega : dom.e_extension();
        return std::pair{std::move(u), std::move(omega)};
    };
    auto [u, omega] = initial_state();
    // Feasibility for the first level.
    for (int n = 0; n < dom.grid().node_count(); ++n)
        if (dom.is_free_node(n)) u[n] = std::max(u[n], rep.eps_levels.front());
        else if (!dom.grid().is_alias_node(n)) u[n] = cfg.boundary[n];
    sync_periodic(dom.grid(), u);

    EnergyBreakdown current = total_energy(u, omega, cfg.beta, dom, rep.eps_levels.front());
    rep.energy_trace.push_back({0, StepKind::initial, current});

    auto record = [&](int level, StepKind kind, const EnergyBreakdown& e) {
        const double slack = 1e-12 * std::max(std::abs(current.total), std::abs(e.total));
        if (e.total > current.total + slack)
            throw InvariantViolation(std::string("energy increased in ") + to_string(kind) +
                                     " step at level " + std::to_string(level));
        rep.energy_trace.push_back({level, kind, e});
        current = e;
    };

    bool all_converged = true;
    for (std::size_t level = 0; level < rep.eps_levels.size(); ++level) {
        const double eps = rep.eps_levels[level];
        if (cfg.cold_start && level > 0) {
            std::tie(u, omega) = initial_state();
            current = total_energy(u, omega, cfg.beta, dom, eps);
            rep.energy_trace.push_back({static_cast<int>(level), StepKind::initial, current});
        }
        int sweeps = 0;
        std::string reason = "max_outer";
        while (sweeps < cfg.max_outer) {
            ++sweeps;
            const double sweep_start = current.total;

            StateProblem sp{omega, cfg.boundary, cfg.beta, eps, cfg.tol_cg, cfg.max_iter};
            StateResult sr;
            try {
                sr = solve_state(sp, dom, u);
            } catch (const SolverFailure& e) {
                throw SolverFailure("level " + std::to_string(level) + ", sweep " + std::to_string(sweeps) +
                                        ": " + e.what(),
                                    e.residual());
            }
            u = std::move(sr.u);
            rep.state_iterations += sr.iterations;
            record(static_cast<int>(level), StepKind::state, total_energy(u, omega, cfg.beta, dom, eps));

            SetResult set = solve_set(u, cfg.beta, dom);
            rep.degenerate_set_step = rep.degenerate_set_step || set.degenerate;
            omega = std::move(set.set);
            record(static_cast<int>(level), StepKind::set, total_energy(u, omega, cfg.beta, dom, eps));

            const double decrease = sweep_start - current.total;
            if (decrease <= cfg.tol_outer * std::abs(sweep_start)) {
                reason = "converged";
                break;
            }
        }
        all_converged = all_converged && reason == "converged";
        rep.iters.push_back(sweeps);
        rep.level_termination.push_back(reason);
        rep.level_final_energy.push_back(current.total);
    }
    if (!cfg.cold_start) {
        for (std::size_t k = 1; k < rep.level_final_energy.size(); ++k) {
            const double prev = rep.level_final_energy[k - 1];
            if (rep.level_final_energy[k] > prev + 1e-12 * std::abs(prev))
                throw InvariantViolation("level-final energy increased across eps levels");
        }
    }

    rep.final_energy = current;
    rep.u = std::move(u);
    rep.omega = std::move(omega);
    rep.termination = all_converged ? "converged" : "max_outer";
    rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

} // namespace robinfb
