#include <gtest/gtest.h>

#include "support.hpp"

using namespace robinfb;
using namespace testsupport;

TEST(Schedule, Examples) {
    const auto s = continuation_schedule(0.5, 0.001, 0.5);
    ASSERT_EQ(s.size(), 10u);
    EXPECT_EQ(s.front(), 0.5);
    EXPECT_EQ(s[1], 0.25);
    EXPECT_EQ(s.back(), 0.001);
    EXPECT_NEAR(s[8], 0.5 / 256, 1e-18);
    EXPECT_EQ(continuation_schedule(0.1, 0.1, 0.5), std::vector<double>{0.1});
    EXPECT_THROW(continuation_schedule(0.5, 0.001, 1.0), InvalidProblem);
    EXPECT_THROW(continuation_schedule(0.5, 0.6, 0.5), InvalidProblem);
}

TEST(Minimize, RejectsEpsAboveFloor) {
    const Domain dom = unit_square(4);
    SolveConfig cfg = slab_config(dom);
    cfg.eps0 = 1.0;
    EXPECT_THROW(minimize(cfg, dom), InvalidProblem);
}

TEST(Minimize, SlabCoarse) {
    const Domain dom = slab_domain(0.5, 1.0 / 32);
    const auto rep = minimize(slab_config(dom), dom);
    EXPECT_EQ(rep.termination, "converged");
    EXPECT_NEAR(rep.final_energy.total, 0.8, 8e-3);
    EXPECT_EQ(rep.omega, upper_half(dom));
    const auto again = total_energy(rep.u, rep.omega, 1.0, dom, rep.final_energy.epsilon);
    EXPECT_EQ(again.total, rep.final_energy.total);
}

TEST(Minimize, BetaZeroIsDegenerate) {
    const Domain dom = square_symmetric_domain(1.0, 1.0 / 16);
    const auto rep = minimize(slab_config(dom, 0.0), dom);
    EXPECT_TRUE(rep.degenerate_set_step);
    EXPECT_LT(max_abs_diff(rep.u, ScalarField(dom.grid(), 1.0)), 1e-9);
    EXPECT_NEAR(rep.final_energy.total, 0.0, 1e-15);
}

TEST(Minimize, SymmetricSquareIsEven) {
    const double h = 1.0 / 32;
    const Domain dom = square_symmetric_domain(1.0, h);
    const Grid& g = dom.grid();
    const auto rep = minimize(slab_config(dom), dom);
    double umax = 0.0;
    for (double x : rep.u.values()) umax = std::max(umax, x);
    for (int n = 0; n < g.node_count(); ++n) {
        const int mirror = g.node(g.node_i(n), g.n2() - g.node_j(n));
        EXPECT_NEAR(rep.u[n], rep.u[mirror], 1e-6 * umax);
    }
    for (int c = 0; c < g.cell_count(); ++c) {
        const int mirror = g.cell(g.cell_i(c), g.n2() - 1 - g.cell_j(c));
        EXPECT_NE(rep.omega[c], rep.omega[mirror]);
    }
    EXPECT_EQ(rep.omega, upper_half(dom));
}

TEST(Minimize, DeterministicApartFromWallTime) {
    const Domain dom = square_symmetric_domain(1.0, 1.0 / 16);
    SolveConfig cfg = slab_config(dom, 2.0);
    const auto a = minimize(cfg, dom);
    const auto b = minimize(cfg, dom);
    EXPECT_EQ(a.u, b.u);
    EXPECT_EQ(a.omega, b.omega);
    EXPECT_EQ(a.final_energy.total, b.final_energy.total);
    EXPECT_EQ(a.iters, b.iters);
}

TEST(Minimize, WarmRestartIsFixedPoint) {
    const Domain dom = slab_domain(0.5, 1.0 / 16);
    SolveConfig cfg = slab_config(dom);
    const auto first = minimize(cfg, dom);
    cfg.initial_u = first.u;
    cfg.initial_omega = first.omega;
    cfg.eps0 = cfg.eps_min;
    const auto second = minimize(cfg, dom);
    EXPECT_EQ(second.omega, first.omega);
    EXPECT_NEAR(second.final_energy.total, first.final_energy.total, 1e-9 * first.final_energy.total);
}

TEST(Minimize, ColdStartLevelsAgree) {
    const Domain dom = slab_domain(0.5, 1.0 / 16);
    SolveConfig cfg = slab_config(dom);
    cfg.cold_start = true;
    const auto rep = minimize(cfg, dom);
    // eps never binds on the slab, so every level reaches the same minimum.
    for (double e : rep.level_final_energy) EXPECT_NEAR(e, rep.final_energy.total, 1e-8);
}

TEST(MinimizeProperty, DescentOnRandomConfigs) {
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 8; ++trial) {
        const Domain dom = square_symmetric_domain(1.0, 1.0 / 16);
        SolveConfig cfg;
        cfg.beta = std::uniform_real_distribution<double>(0.2, 5.0)(rng);
        const double v = std::uniform_real_distribution<double>(0.5, 2.0)(rng);
        cfg.boundary = ScalarField(dom.grid(), v);
        cfg.eps0 = std::uniform_real_distribution<double>(0.1, 0.9)(rng) * v;
        cfg.eps_min = 1e-3;
        cfg.initial_omega = random_admissible(dom, rng);
        const auto rep = minimize(cfg, dom);
        for (std::size_t k = 1; k < rep.energy_trace.size(); ++k) {
            const auto& prev = rep.energy_trace[k - 1];
            const auto& cur = rep.energy_trace[k];
            if (cur.level == prev.level) {
                EXPECT_LE(cur.energy.total, prev.energy.total + 1e-12 * std::abs(prev.energy.total));
            }
        }
        for (std::size_t k = 1; k < rep.level_final_energy.size(); ++k)
            EXPECT_LE(rep.level_final_energy[k], rep.level_final_energy[k - 1] * (1 + 1e-12));
        for (int n = 0; n < dom.grid().node_count(); ++n)
            if (dom.is_free_node(n)) { EXPECT_GE(rep.u[n], cfg.eps_min); }
        EXPECT_TRUE(dom.is_admissible(rep.omega));
    }
}
