#include <gtest/gtest.h>

#include <limits>

#include "support.hpp"

using namespace robinfb;
using namespace testsupport;

TEST(Dirichlet, AffineExamples) {
    const Domain dom = unit_square(8);
    const Grid& g = dom.grid();
    EXPECT_NEAR(dirichlet_energy(sample_nodes(g, [](Vec2 x) { return x.x; }), dom), 1.0, 1e-14);
    EXPECT_NEAR(dirichlet_energy(sample_nodes(g, [](Vec2 x) { return x.x + 2.0 * x.y; }), dom), 5.0, 1e-13);
    EXPECT_EQ(dirichlet_energy(ScalarField(g, 3.0), dom), 0.0);
}

TEST(Dirichlet, NanIsInvalidField) {
    const Domain dom = unit_square(4);
    ScalarField u(dom.grid(), 1.0);
    u[7] = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(dirichlet_energy(u, dom), InvalidField);
}

TEST(Dirichlet, CheckerboardHasPositiveEnergy) {
    const Domain dom = unit_square(4);
    const Grid& g = dom.grid();
    ScalarField u(g);
    for (int n = 0; n < g.node_count(); ++n) u[n] = (g.node_i(n) + g.node_j(n)) % 2;
    EXPECT_GT(dirichlet_energy(u, dom), 0.0);
}

TEST(Surface, Examples) {
    Grid g(2, 2, 1.0);
    const Domain dom(g, full_mask(g));
    const auto mesh = extract_interface(select_cells(g, [](Vec2 x) { return x.x < 1.0; }), dom);
    EXPECT_DOUBLE_EQ(surface_integral(ScalarField(g, 1.0), mesh), 2.0);
    EXPECT_DOUBLE_EQ(surface_integral(ScalarField(g, 0.0), mesh), 0.0);
    EXPECT_DOUBLE_EQ(surface_integral(ScalarField(g, 3.0), mesh), 9.0 * 2.0);
}

TEST(Total, SlabClosedFormValues) {
    // 1-D check: u linear from c at x2 = 0 to 1 at |x2| = a; J(c) = 2 (1 - c)^2 / a + beta c^2.
    const double a = 0.5, beta = 1.0;
    const double c = golden_min([&](double c) { return 2.0 * (1 - c) * (1 - c) / a + beta * c * c; }, 0.0, 1.0);
    const auto s = slab_solution(beta, a);
    EXPECT_NEAR(c, s.c, 1e-7);
    EXPECT_NEAR(s.dirichlet, 0.16, 1e-15);
    EXPECT_NEAR(s.surface, 0.64, 1e-15);
    EXPECT_NEAR(s.total, 0.8, 1e-15);

    const Domain dom = slab_domain(a, 1.0 / 32);
    const ScalarField u = sample_nodes(dom.grid(), [&](Vec2 x) { return s(x.y); });
    const CellSet upper = select_cells(dom.grid(), [](Vec2 x) { return x.y > 0; });
    const auto e = total_energy(u, upper, beta, dom);
    EXPECT_NEAR(e.dirichlet, 0.16, 1e-13);
    EXPECT_NEAR(e.surface, 0.64, 1e-13);
    EXPECT_NEAR(e.total, 0.8, 1e-13);
}

TEST(Total, BetaZeroAndFlatInterface) {
    std::mt19937_64 rng(3);
    const Domain dom = unit_square(8);
    const ScalarField u = random_field(dom.grid(), rng, 0.0, 1.0);
    const CellSet lower = select_cells(dom.grid(), [](Vec2 x) { return x.y < 0.5; });
    const auto e0 = total_energy(u, lower, 0.0, dom);
    EXPECT_EQ(e0.total, e0.dirichlet);
    for (double beta : {0.5, 2.0}) {
        const auto e = total_energy(ScalarField(dom.grid(), 1.0), lower, beta, dom);
        EXPECT_DOUBLE_EQ(e.total, beta);
    }
}

TEST(Total, TextBlockKeys) {
    EnergyBreakdown e{1.0, 2.0, 0.5, 2.0, 0.1};
    EXPECT_EQ(to_text(e), "dirichlet: 1\nsurface: 2\nbeta: 0.5\ntotal: 2\nepsilon: 0.10000000000000001\n");
}

TEST(EnergyProperty, QuadraticScaling) {
    std::mt19937_64 rng(21);
    const Domain dom = framed_box(8, 8, 0.125);
    for (int trial = 0; trial < 50; ++trial) {
        const ScalarField u = random_field(dom.grid(), rng, 0.0, 2.0);
        const CellSet s = random_admissible(dom, rng);
        const double lambda = std::uniform_real_distribution<double>(0.1, 10.0)(rng);
        ScalarField lu = u;
        for (auto& x : lu.values()) x *= lambda;
        const double j1 = total_energy(u, s, 1.3, dom).total;
        const double j2 = total_energy(lu, s, 1.3, dom).total;
        EXPECT_NEAR(j2, lambda * lambda * j1, 4 * std::numeric_limits<double>::epsilon() * 8 * std::abs(j2));
    }
}

TEST(EnergyProperty, SurfaceAdditiveOverPartitions) {
    std::mt19937_64 rng(22);
    const Domain dom = unit_square(8);
    for (int trial = 0; trial < 30; ++trial) {
        const ScalarField u = random_field(dom.grid(), rng, 0.0, 2.0);
        const auto mesh = extract_interface(random_admissible(dom, rng), dom);
        InterfaceMesh a, b;
        std::bernoulli_distribution coin(0.5);
        for (const auto& f : mesh.faces) (coin(rng) ? a : b).faces.push_back(f);
        EXPECT_NEAR(surface_integral(u, a) + surface_integral(u, b), surface_integral(u, mesh), 1e-13);
    }
}

TEST(EnergyProperty, SurfaceMonotoneInU) {
    std::mt19937_64 rng(23);
    const Domain dom = unit_square(8);
    for (int trial = 0; trial < 30; ++trial) {
        const ScalarField u = random_field(dom.grid(), rng, 0.0, 1.0);
        ScalarField w = u;
        for (auto& x : w.values()) x += std::uniform_real_distribution<double>(0.0, 0.5)(rng);
        const auto mesh = extract_interface(random_admissible(dom, rng), dom);
        EXPECT_LE(surface_integral(u, mesh), surface_integral(w, mesh));
    }
}

namespace {

double bump_line_integral(double r) {
    // int_{-r}^{r} exp(1 - 1/(1 - (x/r)^2)) dx by composite Simpson.
    const int n = 20000;
    double sum = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double x = -r + 2.0 * r * k / n;
        const double s = x / r;
        const double f = std::abs(s) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - s * s)) : 0.0;
        sum += f * (k == 0 || k == n ? 1 : (k % 2 ? 4 : 2));
    }
    return sum * (2.0 * r / n) / 3.0;
}

} // namespace

TEST(Divergence, FlatInterfaceConverges) {
    double prev = 0.0;
    for (int n : {32, 64, 128}) {
        const Domain dom = unit_square(n);
        const ScalarField one(dom.grid(), 1.0);
        const CellSet lower = select_cells(dom.grid(), [](Vec2 x) { return x.y < 0.5; });
        const auto xi = bump_field({0.5, 0.5}, 0.3, {0.0, 1.0});
        const auto r = divergence_crosscheck(one, lower, xi, dom);
        EXPECT_NEAR(r.boundary_value, bump_line_integral(0.3), 1e-3);
        if (prev > 0.0) { EXPECT_GE(prev / r.abs_diff, 1.5); }
        prev = r.abs_diff;
    }
}

TEST(Divergence, ZeroFieldAndEmptySet) {
    const Domain dom = unit_square(16);
    std::mt19937_64 rng(5);
    const ScalarField u = random_field(dom.grid(), rng, 0.0, 1.0);
    VectorField zero{[](Vec2) { return Vec2{}; }, [](Vec2) { return 0.0; }};
    const auto r = divergence_crosscheck(u, random_admissible(dom, rng), zero, dom);
    EXPECT_EQ(r.boundary_value, 0.0);
    EXPECT_EQ(r.volume_value, 0.0);
    const auto xi = bump_field({0.5, 0.5}, 0.3, {0.0, 1.0});
    const auto e = divergence_crosscheck(u, CellSet(dom.grid()), xi, dom);
    EXPECT_EQ(e.boundary_value, 0.0);
    EXPECT_EQ(e.volume_value, 0.0);
}

TEST(Divergence, SupportTouchingBoundaryThrows) {
    const Domain dom = unit_square(16);
    const auto xi = bump_field({0.1, 0.5}, 0.3, {0.0, 1.0});
    EXPECT_THROW(divergence_crosscheck(ScalarField(dom.grid(), 1.0), CellSet(dom.grid()), xi, dom),
                 SupportViolation);
}
