#pragma once

// Discrete geometry on cell sets: perimeter, interface extraction, sublevel
// sets, volume and the per-column Steiner rearrangement.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "robinfb/grid.hpp"

namespace robinfb {

/// Neighborhood used to measure the cut metric. `four` counts grid faces with
/// weight h (exact for axis-aligned interfaces, up to sqrt(2) too large on
/// diagonals); `eight` and `sixteen` use Cauchy-Crofton edge weights.
enum class Stencil { four, eight, sixteen };

struct InterfaceFace {
    Vec2 midpoint;
    Vec2 normal; ///< unit, pointing out of Omega
    double weight = 0.0;
    int inside_cell = -1;
    int outside_cell = -1;
    int node_a = -1;
    int node_b = -1;
    int axis = 0;
};

struct InterfaceMesh {
    std::vector<InterfaceFace> faces;
};

/// Region = every cell of D.
inline CellSet region_D(const Domain& dom) {
    CellSet r(dom.grid());
    for (int c = 0; c < dom.grid().cell_count(); ++c) r.set(c, dom.in_D(c));
    return r;
}

namespace detail {

struct CroftonDirection {
    int di;
    int dj;
    double weight;
};

inline std::vector<CroftonDirection> crofton_directions(Stencil s, double h) {
    std::vector<std::pair<int, int>> v;
    if (s == Stencil::eight) {
        v = {{1, 0}, {1, 1}, {0, 1}, {-1, 1}};
    } else {
        v = {{1, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 1}, {-1, 2}, {-1, 1}, {-2, 1}};
    }
    std::vector<double> angle(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) angle[k] = std::atan2(v[k].second, v[k].first);
    std::vector<CroftonDirection> out;
    const std::size_t m = v.size();
    for (std::size_t k = 0; k < m; ++k) {
        double next = angle[(k + 1) % m];
        double prev = angle[(k + m - 1) % m];
        if (k + 1 == m) next += std::numbers::pi;
        if (k == 0) prev -= std::numbers::pi;
        const double dphi = 0.5 * (next - prev);
        const double len = h * std::hypot(v[k].first, v[k].second);
        out.push_back({v[k].first, v[k].second, h * h * dphi / (2.0 * len)});
    }
    return out;
}

} // namespace detail

/// Cut-metric perimeter of `set` counted over faces (or stencil edges) with at
/// least one endpoint cell in `region`.
inline double perimeter(const CellSet& set, const Domain& dom, const CellSet& region,
                        Stencil stencil = Stencil::four) {
    const Grid& g = dom.grid();
    require_match(g, set, "perimeter");
    require_match(g, region, "perimeter region");
    double total = 0.0;
    if (stencil == Stencil::four) {
        for (const Face& f : dom.faces()) {
            if (set[f.lo] == set[f.hi]) continue;
            if (region[f.lo] || region[f.hi]) total += g.h();
        }
        return total;
    }
    for (const auto& d : detail::crofton_directions(stencil, g.h())) {
        for (int j = 0; j < g.n2(); ++j) {
            for (int i = 0; i < g.n1(); ++i) {
                const int p = g.cell(i, j);
                const int q = g.cell_wrapped(i + d.di, j + d.dj);
                if (q < 0 || set[p] == set[q]) continue;
                if (region[p] || region[q]) total += d.weight;
            }
        }
    }
    return total;
}

inline double perimeter(const CellSet& set, const Domain& dom, Stencil stencil = Stencil::four) {
    return perimeter(set, dom, region_D(dom), stencil);
}

/// One record per member/non-member adjacency touching D.
inline InterfaceMesh extract_interface(const CellSet& set, const Domain& dom) {
    const Grid& g = dom.grid();
    require_match(g, set, "extract_interface");
    InterfaceMesh mesh;
    for (const Face& f : dom.faces()) {
        if (set[f.lo] == set[f.hi] || !dom.face_in_D(f)) continue;
        InterfaceFace r;
        r.midpoint = f.midpoint;
        const double sign = set[f.lo] ? 1.0 : -1.0;
        r.normal = f.axis == 0 ? Vec2{sign, 0.0} : Vec2{0.0, sign};
        r.weight = g.h();
        r.inside_cell = set[f.lo] ? f.lo : f.hi;
        r.outside_cell = set[f.lo] ? f.hi : f.lo;
        r.node_a = f.node_a;
        r.node_b = f.node_b;
        r.axis = f.axis;
        mesh.faces.push_back(r);
    }
    return mesh;
}

/// Mean of the four corner values of a cell.
inline double cell_average(const ScalarField& u, const Grid& g, int c) {
    const int i = g.cell_i(c);
    const int j = g.cell_j(c);
    return 0.25 * (u[g.node(i, j)] + u[g.node(i + 1, j)] + u[g.node(i, j + 1)] +
                   u[g.node(i + 1, j + 1)]);
}

/// {u <= t}: a cell belongs iff its corner average is <= t. The same rule is
/// applied outside D, where u carries the boundary data.
inline CellSet sublevel_set(const ScalarField& u, double t, const Domain& dom) {
    const Grid& g = dom.grid();
    require_match(g, u, "sublevel_set");
    CellSet s(g);
    for (int c = 0; c < g.cell_count(); ++c) s.set(c, cell_average(u, g, c) <= t);
    return s;
}

/// Measure of the member cells inside D.
inline double volume(const CellSet& set, const Domain& dom) {
    const Grid& g = dom.grid();
    require_match(g, set, "volume");
    std::size_t k = 0;
    for (int c = 0; c < g.cell_count(); ++c)
        if (set[c] && dom.in_D(c)) ++k;
    return static_cast<double>(k) * g.h() * g.h();
}

/// Throws UnsupportedGeometry unless grid and mask are symmetric under x2 -> -x2.
inline void require_x2_symmetric(const Domain& dom) {
    const Grid& g = dom.grid();
    const double top = g.origin().y + g.n2() * g.h();
    if (std::abs(top + g.origin().y) > 1e-9 * g.h())
        throw UnsupportedGeometry("grid is not symmetric about x2 = 0");
    for (int j = 0; j < g.n2(); ++j)
        for (int i = 0; i < g.n1(); ++i)
            if (dom.in_D(g.cell(i, j)) != dom.in_D(g.cell(i, g.n2() - 1 - j)))
                throw UnsupportedGeometry("domain D is not symmetric about x2 = 0");
}

/// Node rows ordered center-out by |x2|, the +x2 row first on ties.
inline std::vector<int> center_out_rows(int n2) {
    std::vector<int> rows(n2 + 1);
    for (int j = 0; j <= n2; ++j) rows[j] = j;
    std::stable_sort(rows.begin(), rows.end(), [n2](int a, int b) {
        const int da = std::abs(2 * a - n2);
        const int db = std::abs(2 * b - n2);
        if (da != db) return da < db;
        return a > b;
    });
    return rows;
}

/// Returns 1 - phi_* where phi = 1 - u and phi_* rearranges each node column
/// symmetric-decreasingly in x2.
inline ScalarField steiner_symmetrize(const ScalarField& u, const Domain& dom) {
    const Grid& g = dom.grid();
    require_match(g, u, "steiner_symmetrize");
    require_x2_symmetric(dom);
    const auto order = center_out_rows(g.n2());
    ScalarField out = u;
    // Sorting phi descending is sorting u ascending; no arithmetic on values.
    std::vector<double> column(g.n2() + 1);
    for (int i = 0; i <= g.n1(); ++i) {
        if (g.periodic() && i == g.n1()) continue;
        for (int j = 0; j <= g.n2(); ++j) column[j] = u[g.node(i, j)];
        std::sort(column.begin(), column.end());
        for (int k = 0; k <= g.n2(); ++k) out[g.node(i, order[k])] = column[k];
    }
    sync_periodic(g, out);
    return out;
}

} // namespace robinfb
