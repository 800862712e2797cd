#include <gtest/gtest.h>

#include "support.hpp"

using namespace robinfb;
using namespace testsupport;

TEST(Majorant, ConstantAndLinearData) {
    const Domain dom = unit_square(16);
    const Grid& g = dom.grid();
    const ScalarField one(g, 1.0);
    EXPECT_LT(max_abs_diff(harmonic_majorant(dom, one), one), 1e-9);
    const ScalarField x1 = sample_nodes(g, [](Vec2 x) { return x.x; });
    EXPECT_LT(max_abs_diff(harmonic_majorant(dom, x1), x1), 1e-9);
    const Domain slab = slab_domain(0.5, 1.0 / 16);
    const ScalarField v(slab.grid(), 1.0);
    EXPECT_LT(max_abs_diff(harmonic_majorant(slab, v), v), 1e-9);
}

TEST(Majorant, IterationCapRaisesSolverFailure) {
    const Domain dom = unit_square(32);
    const ScalarField v = sample_nodes(dom.grid(), [](Vec2 x) { return 1.0 + x.x * x.y; });
    EXPECT_THROW(harmonic_majorant(dom, v, 1e-12, 2), SolverFailure);
}

TEST(SolveState, EmptyInterfaceGivesConstant) {
    const Domain dom = unit_square(8);
    const ScalarField v(dom.grid(), 1.0);
    StateProblem p{CellSet(dom.grid()), v, 1.0, 0.0};
    std::mt19937_64 rng(1);
    const auto r = solve_state(p, dom, random_feasible(dom, v, rng, 0.2, 2.0));
    EXPECT_LT(max_abs_diff(r.u, v), 1e-9);
}

TEST(SolveState, BetaZeroIsMajorant) {
    const Domain dom = framed_box(10, 10, 0.1);
    const ScalarField v = sample_nodes(dom.grid(), [](Vec2 x) { return 1.0 + 0.5 * x.x; });
    std::mt19937_64 rng(2);
    StateProblem p{random_admissible(dom, rng), v, 0.0, 0.0};
    const auto r = solve_state(p, dom, harmonic_majorant(dom, ScalarField(dom.grid(), 1.0)));
    EXPECT_LT(max_abs_diff(r.u, harmonic_majorant(dom, v)), 1e-8);
}

TEST(SolveState, SlabMatchesClosedForm) {
    const double h = 1.0 / 32;
    const Domain dom = slab_domain(0.5, h);
    const ScalarField v(dom.grid(), 1.0);
    StateProblem p{select_cells(dom.grid(), [](Vec2 x) { return x.y > 0; }), v, 1.0, 0.0};
    const auto r = solve_state(p, dom, v);
    const auto s = slab_solution(1.0, 0.5);
    const ScalarField g = sample_nodes(dom.grid(), [&](Vec2 x) { return s(std::clamp(x.y, -0.5, 0.5)); });
    double err = 0.0;
    for (int n = 0; n < dom.grid().node_count(); ++n)
        if (dom.touches_D(n)) err = std::max(err, std::abs(r.u[n] - g[n]));
    EXPECT_LT(err, 5e-3);
    EXPECT_NEAR(r.u[dom.grid().node(3, 17)], 0.8, 1e-8);
}

TEST(SolveState, InfeasibleEpsilonAndBadBeta) {
    const Domain dom = unit_square(4);
    const ScalarField v(dom.grid(), 1.0);
    EXPECT_THROW(solve_state(StateProblem{CellSet(dom.grid()), v, 1.0, 1.0}, dom, v), InvalidProblem);
    EXPECT_THROW(solve_state(StateProblem{CellSet(dom.grid()), v, -1.0, 0.0}, dom, v), InvalidProblem);
}

TEST(SolveState, MatchesDenseOracle) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const Domain dom = framed_box(5, 6, 0.2, 0.0, trial % 2 ? LateralBc::periodic : LateralBc::dirichlet);
        const ScalarField v = random_field(dom.grid(), rng, 1.0, 2.0);
        const CellSet omega = random_admissible(dom, rng);
        const double beta = std::uniform_real_distribution<double>(0.1, 4.0)(rng);
        const auto r = solve_state(StateProblem{omega, v, beta, 0.0, 1e-13}, dom, v);
        const ScalarField oracle = dense_state_oracle(dom, omega, beta, v);
        double err = 0.0;
        for (int n = 0; n < dom.grid().node_count(); ++n)
            if (dom.is_free_node(n)) err = std::max(err, std::abs(r.u[n] - oracle[n]));
        EXPECT_LT(err, 1e-9) << "trial " << trial;
    }
}

TEST(StateProperty, MaximumPrincipleAndMajorant) {
    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 20; ++trial) {
        const Domain dom = framed_box(12, 12, 1.0 / 12);
        const ScalarField v = random_field(dom.grid(), rng, 0.5, 1.5);
        const double m = boundary_minimum(v, dom);
        const double eps = std::uniform_real_distribution<double>(0.0, 0.9 * m)(rng);
        const auto r = solve_state(StateProblem{random_admissible(dom, rng), v, 3.0, eps}, dom, v);
        const ScalarField maj = harmonic_majorant(dom, v);
        const double vmax = boundary_maximum(v, dom);
        for (int n = 0; n < dom.grid().node_count(); ++n) {
            if (!dom.is_free_node(n)) continue;
            EXPECT_GE(r.u[n], eps);
            EXPECT_LE(r.u[n], vmax + 1e-9);
            EXPECT_LE(r.u[n], maj[n] + 1e-8);
        }
    }
}

TEST(StateProperty, BeatsRandomCompetitors) {
    std::mt19937_64 rng(33);
    const Domain dom = framed_box(8, 8, 0.125);
    const ScalarField v(dom.grid(), 1.0);
    const CellSet omega = random_admissible(dom, rng);
    const double eps = 0.3;
    const auto r = solve_state(StateProblem{omega, v, 2.0, eps}, dom, v);
    const double best = total_energy(r.u, omega, 2.0, dom).total;
    for (int k = 0; k < 100; ++k) {
        const ScalarField w = random_feasible(dom, v, rng, eps, 1.5);
        EXPECT_LE(best, total_energy(w, omega, 2.0, dom).total);
        // Small perturbations of the optimum as well.
        ScalarField p = r.u;
        for (int n = 0; n < dom.grid().node_count(); ++n)
            if (dom.is_free_node(n)) p[n] = std::max(eps, p[n] + std::normal_distribution<double>(0, 1e-3)(rng));
        sync_periodic(dom.grid(), p);
        EXPECT_LE(best, total_energy(p, omega, 2.0, dom).total + 1e-12);
    }
}

TEST(StateProperty, HarmonicAwayFromInterfaceAndBound) {
    std::mt19937_64 rng(34);
    const Domain dom = framed_box(16, 16, 1.0 / 16);
    const Grid& g = dom.grid();
    const ScalarField v = random_field(g, rng, 0.8, 1.2);
    const CellSet omega = select_cells(g, [](Vec2 x) { return x.y > 0.1 * x.x; });
    const double eps = 0.05;
    const auto r = solve_state(StateProblem{omega, v, 1.0, eps, 1e-12}, dom, v);
    const auto mesh = extract_interface(omega, dom);
    std::vector<std::uint8_t> on_cut(g.node_count(), 0);
    for (const auto& f : mesh.faces) on_cut[f.node_a] = on_cut[f.node_b] = 1;
    for (int n = 0; n < g.node_count(); ++n) {
        if (!dom.is_free_node(n) || on_cut[n] || r.u[n] <= eps) continue;
        const int i = g.node_i(n), j = g.node_j(n);
        const double lap = r.u[g.node(i + 1, j)] + r.u[g.node(i - 1, j)] + r.u[g.node(i, j + 1)] +
                           r.u[g.node(i, j - 1)] - 4 * r.u[n];
        EXPECT_LT(std::abs(lap), 1e-9);
    }
}

TEST(StateProperty, ActiveBoundWhenFloorIsHigh) {
    // A strong Robin term pulls u down to the floor near the interface.
    const Domain dom = framed_box(8, 8, 0.125);
    const ScalarField v(dom.grid(), 1.0);
    const CellSet omega = select_cells(dom.grid(), [](Vec2 x) { return x.y > 0; });
    const auto r = solve_state(StateProblem{omega, v, 200.0, 0.6}, dom, v);
    EXPECT_GT(r.active_nodes, 0);
    for (int n = 0; n < dom.grid().node_count(); ++n)
        if (dom.is_free_node(n)) { EXPECT_GE(r.u[n], 0.6); }
}
