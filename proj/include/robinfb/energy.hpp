#pragma once

// J_beta(u, Omega) = Dirichlet term + beta * surface term.
//
// Dirichlet term: each cell of D contributes half the sum of the squared node
// differences along its four edges (times h^{d-2} = 1 in 2-D). This quadrature
// is exact for affine u, has no checkerboard null space, and its
// Euler-Lagrange operator is the 5-point Laplacian.
//
// Surface term: each interface face contributes weight * (u_a^2 + u_b^2) / 2
// over its two endpoint nodes, which keeps it monotone in nodewise u.

#include <cmath>
#include <functional>
#include <sstream>
#include <string>

#include "robinfb/geometry.hpp"

namespace robinfb {

struct EnergyBreakdown {
    double dirichlet = 0.0;
    double surface = 0.0;
    double beta = 0.0;
    double total = 0.0;
    double epsilon = 0.0;

    bool operator==(const EnergyBreakdown&) const = default;
};

/// Flat key:value block.
inline std::string to_text(const EnergyBreakdown& e) {
    std::ostringstream os;
    os.precision(17);
    os << "dirichlet: " << e.dirichlet << '\n'
       << "surface: " << e.surface << '\n'
       << "beta: " << e.beta << '\n'
       << "total: " << e.total << '\n'
       << "epsilon: " << e.epsilon << '\n';
    return os.str();
}

/// |grad u|^2 on cell c under the edge quadrature (see file comment).
inline double cell_gradient_sq(const ScalarField& u, const Grid& g, int c) {
    const int i = g.cell_i(c);
    const int j = g.cell_j(c);
    const double u00 = u[g.node(i, j)];
    const double u10 = u[g.node(i + 1, j)];
    const double u01 = u[g.node(i, j + 1)];
    const double u11 = u[g.node(i + 1, j + 1)];
    const double s = (u10 - u00) * (u10 - u00) + (u11 - u01) * (u11 - u01) +
                     (u01 - u00) * (u01 - u00) + (u11 - u10) * (u11 - u10);
    return 0.5 * s / (g.h() * g.h());
}

/// Bilinear-element gradient at the cell center.
inline Vec2 cell_gradient(const ScalarField& u, const Grid& g, int c) {
    const int i = g.cell_i(c);
    const int j = g.cell_j(c);
    const double u00 = u[g.node(i, j)];
    const double u10 = u[g.node(i + 1, j)];
    const double u01 = u[g.node(i, j + 1)];
    const double u11 = u[g.node(i + 1, j + 1)];
    return {0.5 * ((u10 - u00) + (u11 - u01)) / g.h(), 0.5 * ((u01 - u00) + (u11 - u10)) / g.h()};
}

inline void require_finite_on_D(const ScalarField& u, const Domain& dom, const char* what) {
    const Grid& g = dom.grid();
    require_match(g, u, what);
    for (int n = 0; n < g.node_count(); ++n)
        if (!g.is_alias_node(n) && dom.touches_D(n) && !std::isfinite(u[n]))
            throw InvalidField(std::string(what) + ": non-finite value on a node of D");
}

inline double dirichlet_energy(const ScalarField& u, const Domain& dom) {
    require_finite_on_D(u, dom, "dirichlet_energy");
    const Grid& g = dom.grid();
    const double area = g.h() * g.h();
    double sum = 0.0;
    for (int c = 0; c < g.cell_count(); ++c)
        if (dom.in_D(c)) sum += area * cell_gradient_sq(u, g, c);
    return sum;
}

inline double face_u_sq(const ScalarField& u, int node_a, int node_b) {
    return 0.5 * (u[node_a] * u[node_a] + u[node_b] * u[node_b]);
}

inline double surface_integral(const ScalarField& u, const InterfaceMesh& mesh) {
    double sum = 0.0;
    for (const auto& f : mesh.faces) sum += f.weight * face_u_sq(u, f.node_a, f.node_b);
    return sum;
}

inline EnergyBreakdown total_energy(const ScalarField& u, const CellSet& omega, double beta,
                                    const Domain& dom, double epsilon = 0.0) {
    EnergyBreakdown e;
    e.dirichlet = dirichlet_energy(u, dom);
    e.surface = surface_integral(u, extract_interface(omega, dom));
    e.beta = beta;
    e.total = e.dirichlet + beta * e.surface;
    e.epsilon = epsilon;
    return e;
}

/// Smooth test vector field with its analytic divergence and gradient of
/// its components.
struct VectorField {
    std::function<Vec2(Vec2)> value;
    std::function<double(Vec2)> divergence;
};

/// xi(x) = psi(|x - center| / radius) * direction with the C-infinity bump
/// psi(s) = exp(1 - 1/(1 - s^2)) for s < 1, 0 otherwise (psi(0) = 1).
inline VectorField bump_field(Vec2 center, double radius, Vec2 direction) {
    VectorField f;
    f.value = [=](Vec2 x) {
        const Vec2 d = x - center;
        const double s2 = dot(d, d) / (radius * radius);
        if (s2 >= 1.0) return Vec2{};
        return std::exp(1.0 - 1.0 / (1.0 - s2)) * direction;
    };
    f.divergence = [=](Vec2 x) {
        const Vec2 d = x - center;
        const double s2 = dot(d, d) / (radius * radius);
        if (s2 >= 1.0) return 0.0;
        const double q = 1.0 - s2;
        const double psi = std::exp(1.0 - 1.0 / q);
        // d/dx psi = psi * (-1/q^2) * (2 d / r^2)
        const double factor = -psi * 2.0 / (q * q * radius * radius);
        return factor * dot(d, direction);
    };
    return f;
}

struct DivergenceCheck {
    double boundary_value = 0.0;
    double volume_value = 0.0;
    double abs_diff = 0.0;
};

/// Compares sum_faces w (xi . nu) u^2 against sum_{Omega cells in D} h^2 div(u^2 xi).
inline DivergenceCheck divergence_crosscheck(const ScalarField& u, const CellSet& omega,
                                             const VectorField& xi, const Domain& dom) {
    const Grid& g = dom.grid();
    require_finite_on_D(u, dom, "divergence_crosscheck");
    require_match(g, omega, "divergence_crosscheck");

    // xi must vanish on every cell touching the complement of D.
    for (int c = 0; c < g.cell_count(); ++c) {
        const int i = g.cell_i(c);
        const int j = g.cell_j(c);
        bool near_boundary = !dom.in_D(c);
        for (int di = -1; di <= 1 && !near_boundary; ++di)
            for (int dj = -1; dj <= 1 && !near_boundary; ++dj) {
                const int q = g.cell_wrapped(i + di, j + dj);
                if (q < 0 || !dom.in_D(q)) near_boundary = true;
            }
        if (!near_boundary) continue;
        const Vec2 corners[5] = {g.cell_center(c), g.node_point(i, j), g.node_point(i + 1, j),
                                 g.node_point(i, j + 1), g.node_point(i + 1, j + 1)};
        for (const Vec2& p : corners)
            if (norm(xi.value(p)) > 0.0)
                throw SupportViolation("vector field does not vanish near the boundary of D");
    }

    DivergenceCheck out;
    for (const auto& f : extract_interface(omega, dom).faces)
        out.boundary_value += f.weight * dot(xi.value(f.midpoint), f.normal) *
                              face_u_sq(u, f.node_a, f.node_b);

    const double area = g.h() * g.h();
    for (int c = 0; c < g.cell_count(); ++c) {
        if (!omega[c] || !dom.in_D(c)) continue;
        const Vec2 x = g.cell_center(c);
        const double uc = cell_average(u, g, c);
        // div(u^2 xi) = 2 u grad u . xi + u^2 div xi
        out.volume_value +=
            area * (2.0 * uc * dot(cell_gradient(u, g, c), xi.value(x)) + uc * uc * xi.divergence(x));
    }
    out.abs_diff = std::abs(out.boundary_value - out.volume_value);
    return out;
}

} // namespace robinfb
