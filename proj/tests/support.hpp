#pragma once

// Test-side generators and oracles. Oracles re-derive quantities from the
// definitions without calling the solver code under test.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "robinfb/robinfb.hpp"

namespace testsupport {

using namespace robinfb;

inline Domain unit_square(int n) {
    Grid g(n, n, 1.0 / n);
    return Domain(g, full_mask(g));
}

/// D = interior block, one frozen cell frame; E = cells with center y > y_cut.
inline Domain framed_box(int n1, int n2, double h, double y_cut = 0.0, LateralBc lateral = LateralBc::dirichlet) {
    const bool per = lateral == LateralBc::periodic;
    Grid g(per ? n1 : n1 + 2, n2 + 2, h, {per ? 0.0 : -h, -0.5 * n2 * h - h}, lateral);
    DomainMask m;
    m.in_D.assign(g.cell_count(), 0);
    m.in_E.assign(g.cell_count(), 0);
    for (int j = 0; j < g.n2(); ++j)
        for (int i = 0; i < g.n1(); ++i) {
            const int c = g.cell(i, j);
            const bool inside_x = per || (i >= 1 && i <= n1);
            m.in_D[c] = inside_x && j >= 1 && j <= n2;
            m.in_E[c] = g.cell_center(c).y > y_cut;
        }
    return Domain(g, std::move(m));
}

inline CellSet random_admissible(const Domain& dom, std::mt19937_64& rng, double p = 0.5) {
    std::bernoulli_distribution coin(p);
    CellSet s = dom.e_extension();
    for (int c = 0; c < dom.grid().cell_count(); ++c)
        if (dom.in_D(c)) s.set(c, coin(rng));
    return s;
}

inline ScalarField random_field(const Grid& g, std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    ScalarField u(g);
    for (auto& x : u.values()) x = d(rng);
    sync_periodic(g, u);
    return u;
}

/// Field equal to v on non-free nodes and random in [lo, hi] on free nodes.
inline ScalarField random_feasible(const Domain& dom, const ScalarField& v, std::mt19937_64& rng, double lo,
                                   double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    ScalarField u = v;
    for (int n = 0; n < dom.grid().node_count(); ++n)
        if (dom.is_free_node(n)) u[n] = d(rng);
    sync_periodic(dom.grid(), u);
    return u;
}

/// Dense minimizer of the discrete energy for fixed Omega without bound:
/// per D cell, half the squared differences along its four edges; per cut
/// face touching D, beta h (u_a^2 + u_b^2) / 2. Gaussian elimination.
inline ScalarField dense_state_oracle(const Domain& dom, const CellSet& omega, double beta, const ScalarField& v) {
    const Grid& g = dom.grid();
    const int nn = g.node_count();
    std::vector<int> idx(nn, -1);
    int k = 0;
    for (int n = 0; n < nn; ++n)
        if (dom.is_free_node(n)) idx[n] = k++;
    std::vector<std::vector<double>> A(k, std::vector<double>(k + 1, 0.0));
    // Quadratic term w (u_p - u_q)^2 contributes to the normal equations.
    auto edge = [&](int p, int q, double w) {
        const int a = idx[p];
        const int b = idx[q];
        if (a >= 0) {
            A[a][a] += w;
            if (b >= 0) A[a][b] -= w;
            else A[a][k] += w * v[q];
        }
        if (b >= 0) {
            A[b][b] += w;
            if (a >= 0) A[b][a] -= w;
            else A[b][k] += w * v[p];
        }
    };
    for (int c = 0; c < g.cell_count(); ++c) {
        if (!dom.in_D(c)) continue;
        const int i = g.cell_i(c);
        const int j = g.cell_j(c);
        const int n00 = g.node(i, j), n10 = g.node(i + 1, j), n01 = g.node(i, j + 1), n11 = g.node(i + 1, j + 1);
        edge(n00, n10, 0.5);
        edge(n01, n11, 0.5);
        edge(n00, n01, 0.5);
        edge(n10, n11, 0.5);
    }
    // Robin mass beta h / 2 per endpoint of every cut face.
    auto mass = [&](int p, double w) {
        if (idx[p] >= 0) A[idx[p]][idx[p]] += w;
    };
    for (int j = 0; j < g.n2(); ++j)
        for (int i = 0; i < g.n1(); ++i) {
            const int c = g.cell(i, j);
            const int right = g.cell_wrapped(i + 1, j);
            const int up = g.cell_wrapped(i, j + 1);
            if (right >= 0 && (dom.in_D(c) || dom.in_D(right)) && omega[c] != omega[right]) {
                mass(g.node(i + 1, j), 0.5 * beta * g.h());
                mass(g.node(i + 1, j + 1), 0.5 * beta * g.h());
            }
            if (up >= 0 && (dom.in_D(c) || dom.in_D(up)) && omega[c] != omega[up]) {
                mass(g.node(i, j + 1), 0.5 * beta * g.h());
                mass(g.node(i + 1, j + 1), 0.5 * beta * g.h());
            }
        }
    for (int col = 0; col < k; ++col) {
        int piv = col;
        for (int r = col + 1; r < k; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        std::swap(A[col], A[piv]);
        for (int r = 0; r < k; ++r) {
            if (r == col) continue;
            const double f = A[r][col] / A[col][col];
            for (int cc = col; cc <= k; ++cc) A[r][cc] -= f * A[col][cc];
        }
    }
    ScalarField u = v;
    for (int n = 0; n < nn; ++n)
        if (idx[n] >= 0) u[n] = A[idx[n]][k] / A[idx[n]][idx[n]];
    sync_periodic(g, u);
    return u;
}

/// Golden-section minimum of a unimodal function on [a, b].
inline double golden_min(const std::function<double(double)>& f, double a, double b, double tol = 1e-13) {
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - r * (b - a);
    double d = a + r * (b - a);
    while (b - a > tol) {
        if (f(c) < f(d)) b = d;
        else a = c;
        c = b - r * (b - a);
        d = a + r * (b - a);
    }
    return 0.5 * (a + b);
}

/// Weighted cut of `set`, recomputed from raw cell adjacency.
inline double raw_cut(const Domain& dom, const CellSet& set, const ScalarField& u, double beta) {
    const Grid& g = dom.grid();
    double total = 0.0;
    for (int j = 0; j < g.n2(); ++j)
        for (int i = 0; i < g.n1(); ++i) {
            const int c = g.cell(i, j);
            const int right = g.cell_wrapped(i + 1, j);
            const int up = g.cell_wrapped(i, j + 1);
            if (right >= 0 && (dom.in_D(c) || dom.in_D(right)) && set[c] != set[right]) {
                const double a = u[g.node(i + 1, j)], b = u[g.node(i + 1, j + 1)];
                total += beta * g.h() * 0.5 * (a * a + b * b);
            }
            if (up >= 0 && (dom.in_D(c) || dom.in_D(up)) && set[c] != set[up]) {
                const double a = u[g.node(i, j + 1)], b = u[g.node(i + 1, j + 1)];
                total += beta * g.h() * 0.5 * (a * a + b * b);
            }
        }
    return total;
}

/// Minimum of raw_cut over all admissible sets.
inline double enumerate_min_cut(const Domain& dom, const ScalarField& u, double beta) {
    std::vector<int> free;
    for (int c = 0; c < dom.grid().cell_count(); ++c)
        if (dom.in_D(c)) free.push_back(c);
    double best = INFINITY;
    CellSet s = dom.e_extension();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << free.size()); ++mask) {
        for (std::size_t b = 0; b < free.size(); ++b) s.set(free[b], (mask >> b) & 1u);
        best = std::min(best, raw_cut(dom, s, u, beta));
    }
    return best;
}

inline double max_abs_diff(const ScalarField& a, const ScalarField& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

inline SolveConfig slab_config(const Domain& dom, double beta = 1.0) {
    SolveConfig cfg;
    cfg.beta = beta;
    cfg.boundary = ScalarField(dom.grid(), 1.0);
    return cfg;
}

} // namespace testsupport
