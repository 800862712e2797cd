#pragma once

#include <cmath>
#include <string>

#include "robinfb/grid.hpp"

namespace robinfb {

/// Number of cells of size h spanning `length`; throws unless it is an integer.
inline int cells_spanning(double length, double h, const char* what) {
    const double k = length / h;
    const double r = std::round(k);
    if (r < 1.0 || std::abs(k - r) > 1e-9 * std::max(1.0, r))
        throw InvalidProblem(std::string(what) + " is not a multiple of the grid spacing");
    return static_cast<int>(r);
}

/// D = (0, width) x (-a, a), periodic in x1, one frozen row of cells above
/// (in E) and below (not in E). E = {x2 > 0}.
inline Domain slab_domain(double a, double h, double width = 1.0) {
    const int n1 = cells_spanning(width, h, "slab width");
    const int rows = cells_spanning(2.0 * a, h, "slab thickness 2a");
    Grid g(n1, rows + 2, h, {0.0, -a - h}, LateralBc::periodic);
    DomainMask m;
    m.in_D.assign(g.cell_count(), 0);
    m.in_E.assign(g.cell_count(), 0);
    for (int j = 0; j < g.n2(); ++j)
        for (int i = 0; i < n1; ++i) {
            const int c = g.cell(i, j);
            m.in_D[c] = (j >= 1 && j <= rows) ? 1 : 0;
            m.in_E[c] = g.cell_center(i, j).y > 0.0 ? 1 : 0;
        }
    return Domain(g, std::move(m));
}

/// D = (0, side) x (-side/2, side/2) with a one-cell frozen frame; E = {x2 > 0}.
inline Domain square_symmetric_domain(double side, double h) {
    const int n = cells_spanning(side, h, "square side");
    if (n % 2 != 0) throw InvalidProblem("square side must span an even number of cells");
    Grid g(n + 2, n + 2, h, {-h, -0.5 * side - h}, LateralBc::dirichlet);
    DomainMask m;
    m.in_D.assign(g.cell_count(), 0);
    m.in_E.assign(g.cell_count(), 0);
    for (int j = 0; j < g.n2(); ++j)
        for (int i = 0; i < g.n1(); ++i) {
            const int c = g.cell(i, j);
            m.in_D[c] = (i >= 1 && i <= n && j >= 1 && j <= n) ? 1 : 0;
            m.in_E[c] = g.cell_center(i, j).y > 0.0 ? 1 : 0;
        }
    return Domain(g, std::move(m));
}

/// Closed-form one-dimensional minimizer of the slab problem with v = 1:
/// u(x2) = c (1 + (beta/2)|x2|), c = 1 / (1 + beta a / 2). Energies are per
/// unit width.
struct SlabSolution {
    double beta = 1.0;
    double a = 0.5;
    double c = 0.0;      ///< u on the interface
    double slope = 0.0;  ///< |du/dx2| on either side
    double dirichlet = 0.0;
    double surface = 0.0;
    double total = 0.0;

    double operator()(double x2) const { return c * (1.0 + 0.5 * beta * std::abs(x2)); }
};

inline SlabSolution slab_solution(double beta, double a) {
    if (!(beta >= 0.0) || !(a > 0.0)) throw InvalidProblem("slab needs beta >= 0 and a > 0");
    SlabSolution s;
    s.beta = beta;
    s.a = a;
    s.c = 1.0 / (1.0 + 0.5 * beta * a);
    s.slope = 0.5 * beta * s.c;
    s.dirichlet = 2.0 * a * s.slope * s.slope;
    s.surface = s.c * s.c;
    s.total = s.dirichlet + beta * s.surface;
    return s;
}

} // namespace robinfb
