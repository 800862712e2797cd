#pragma once

// u-step: for fixed Omega minimize the discrete J_beta(., Omega) over fields
// equal to v on the Dirichlet layer with u >= eps at every free node.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "robinfb/energy.hpp"

namespace robinfb {

struct StateProblem {
    CellSet omega;
    ScalarField boundary;  ///< v; only Dirichlet-layer nodes are read
    double beta = 1.0;
    double epsilon = 0.0;
    double tol_cg = 1e-10;
    int max_iter = 0;      ///< 0: 50 * sqrt(unknowns)
};

struct StateResult {
    ScalarField u;
    int iterations = 0;
    int restarts = 0;
    double residual = 0.0; ///< final projected-gradient norm / reference norm
    int active_nodes = 0;  ///< nodes held at the lower bound
};

/// Smallest boundary value m over the Dirichlet layer of nodes touching D.
inline double boundary_minimum(const ScalarField& v, const Domain& dom) {
    const Grid& g = dom.grid();
    double m = std::numeric_limits<double>::infinity();
    for (int n = 0; n < g.node_count(); ++n)
        if (!g.is_alias_node(n) && dom.touches_D(n) && !dom.is_free_node(n)) m = std::min(m, v[n]);
    return m;
}

inline double boundary_maximum(const ScalarField& v, const Domain& dom) {
    const Grid& g = dom.grid();
    double m = -std::numeric_limits<double>::infinity();
    for (int n = 0; n < g.node_count(); ++n)
        if (!g.is_alias_node(n) && dom.touches_D(n) && !dom.is_free_node(n)) m = std::max(m, v[n]);
    return m;
}

/// Sparse SPD operator of the quadratic energy restricted to free nodes:
///   E(u) = sum_edges c_e (u_p - u_q)^2 + sum_nodes m_n u_n^2.
/// The gradient is A x - b with A = 2 (L_c + M).
class StateOperator {
public:
    StateOperator(const Domain& dom, const CellSet* omega, double beta) {
        const Grid& g = dom.grid();
        const int nn = g.node_count();
        index_.assign(nn, -1);
        for (int n = 0; n < nn; ++n) {
            if (g.is_alias_node(n) || !dom.is_free_node(n)) continue;
            index_[n] = static_cast<int>(nodes_.size());
            nodes_.push_back(n);
        }
        mass_.assign(nn, 0.0);

        // Edge coefficient: 1/2 per adjacent D cell.
        for (int c = 0; c < g.cell_count(); ++c) {
            if (!dom.in_D(c)) continue;
            const int i = g.cell_i(c);
            const int j = g.cell_j(c);
            const int n00 = g.node(i, j);
            const int n10 = g.node(i + 1, j);
            const int n01 = g.node(i, j + 1);
            const int n11 = g.node(i + 1, j + 1);
            add_edge(n00, n10);
            add_edge(n01, n11);
            add_edge(n00, n01);
            add_edge(n10, n11);
        }
        if (omega != nullptr && beta > 0.0) {
            for (const auto& f : extract_interface(*omega, dom).faces) {
                mass_[f.node_a] += beta * 0.5 * f.weight;
                mass_[f.node_b] += beta * 0.5 * f.weight;
            }
        }
        merge_edges();
        diag_.assign(nodes_.size(), 0.0);
        for (std::size_t k = 0; k < nodes_.size(); ++k) {
            const int n = nodes_[k];
            double d = 2.0 * mass_[n];
            for (const auto& e : adj_[n]) d += 2.0 * e.coef;
            diag_[k] = d;
        }
    }

    std::size_t unknowns() const noexcept { return nodes_.size(); }
    int node_of(std::size_t k) const { return nodes_[k]; }
    int index_of(int n) const { return index_[n]; }
    double diagonal(std::size_t k) const { return diag_[k]; }

    /// Energy of the full field.
    double energy(const ScalarField& u) const {
        double e = 0.0;
        for (const auto& edge : edges_) {
            const double d = u[edge.p] - u[edge.q];
            e += edge.coef * d * d;
        }
        for (std::size_t n = 0; n < mass_.size(); ++n)
            if (mass_[n] != 0.0) e += mass_[n] * u[n] * u[n];
        return e;
    }

    /// Gradient of the energy at the free nodes of the full field u.
    void gradient(const ScalarField& u, std::vector<double>& out) const {
        out.resize(nodes_.size());
        for (std::size_t k = 0; k < nodes_.size(); ++k) {
            const int n = nodes_[k];
            double s = 2.0 * mass_[n] * u[n];
            for (const auto& e : adj_[n]) s += 2.0 * e.coef * (u[n] - u[e.other]);
            out[k] = s;
        }
    }

    /// A p for a direction p supported on free nodes.
    void apply(const std::vector<double>& p, std::vector<double>& out) const {
        out.resize(nodes_.size());
        for (std::size_t k = 0; k < nodes_.size(); ++k) {
            const int n = nodes_[k];
            double s = 2.0 * mass_[n] * p[k];
            for (const auto& e : adj_[n]) {
                const int q = index_[e.other];
                s += 2.0 * e.coef * (p[k] - (q >= 0 ? p[q] : 0.0));
            }
            out[k] = s;
        }
    }

    /// Norm of the gradient at u = 0 on free nodes (data scale of the problem).
    double rhs_norm(const ScalarField& boundary) const {
        ScalarField z = boundary;
        for (int n : nodes_) z[n] = 0.0;
        std::vector<double> gvec;
        gradient(z, gvec);
        double s = 0.0;
        for (double x : gvec) s += x * x;
        return std::sqrt(s);
    }

private:
    struct Edge {
        int p;
        int q;
        double coef;
    };
    struct Link {
        int other;
        double coef;
    };

    void add_edge(int p, int q) {
        if (p > q) std::swap(p, q);
        raw_.push_back({p, q, 0.5});
    }

    void merge_edges() {
        std::sort(raw_.begin(), raw_.end(),
                  [](const Edge& a, const Edge& b) { return a.p != b.p ? a.p < b.p : a.q < b.q; });
        for (const auto& e : raw_) {
            if (!edges_.empty() && edges_.back().p == e.p && edges_.back().q == e.q)
                edges_.back().coef += e.coef;
            else
                edges_.push_back(e);
        }
        raw_.clear();
        adj_.assign(mass_.size(), {});
        for (const auto& e : edges_) {
            adj_[e.p].push_back({e.q, e.coef});
            adj_[e.q].push_back({e.p, e.coef});
        }
    }

    std::vector<int> index_;
    std::vector<int> nodes_;
    std::vector<double> mass_;
    std::vector<double> diag_;
    std::vector<Edge> raw_;
    std::vector<Edge> edges_;
    std::vector<std::vector<Link>> adj_;
};

namespace detail {

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

inline int default_max_iter(std::size_t unknowns) {
    return std::max(100, static_cast<int>(50.0 * std::sqrt(static_cast<double>(unknowns))));
}

/// Bound-constrained PCG. Nodes that reach the bound during a CG step are
/// clamped (the step is truncated there, so energy keeps decreasing) and CG
/// restarts on the reduced subspace. Bound nodes whose gradient points into
/// the feasible region are released between CG cycles.
inline StateResult projected_pcg(const StateOperator& op, ScalarField u, std::optional<double> lower,
                                 double tol, int max_iter, double reference_norm) {
    const std::size_t m = op.unknowns();
    StateResult res;
    if (max_iter <= 0) max_iter = default_max_iter(m);
    const double lb = lower.value_or(-std::numeric_limits<double>::infinity());

    std::vector<std::uint8_t> active(m, 0);
    for (std::size_t k = 0; k < m; ++k) {
        double& x = u[op.node_of(k)];
        if (x <= lb) {
            x = lb;
            active[k] = 1;
        }
    }

    std::vector<double> grad, r(m), z(m), p(m), q(m);
    auto projected_norm = [&](const std::vector<double>& gv) {
        double s = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            const bool at_bound = u[op.node_of(k)] <= lb;
            const double pg = at_bound ? std::min(gv[k], 0.0) : gv[k];
            s += pg * pg;
        }
        return std::sqrt(s);
    };

    op.gradient(u, grad);
    const double initial = projected_norm(grad);
    const double ref = std::max(initial, reference_norm);
    const double target = tol * ref;
    double current = initial;

    while (true) {
        if (current <= target || ref == 0.0) break;
        if (res.iterations >= max_iter) {
            res.residual = ref > 0.0 ? current / ref : 0.0;
            throw SolverFailure("projected CG did not converge", res.residual);
        }
        // Release bound nodes that want to move up; fix the rest.
        for (std::size_t k = 0; k < m; ++k) {
            const bool at_bound = u[op.node_of(k)] <= lb;
            active[k] = (at_bound && grad[k] >= 0.0) ? 1 : 0;
        }
        for (std::size_t k = 0; k < m; ++k) {
            r[k] = active[k] ? 0.0 : -grad[k];
            z[k] = active[k] ? 0.0 : r[k] / op.diagonal(k);
            p[k] = z[k];
        }
        double rz = detail::dot(r, z);
        bool hit_bound = false;
        while (res.iterations < max_iter) {
            ++res.iterations;
            op.apply(p, q);
            for (std::size_t k = 0; k < m; ++k)
                if (active[k]) q[k] = 0.0;
            const double pq = detail::dot(p, q);
            if (!(pq > 0.0)) break;
            double alpha = rz / pq;
            double alpha_max = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < m; ++k) {
                if (p[k] < 0.0) {
                    const double x = u[op.node_of(k)];
                    alpha_max = std::min(alpha_max, (x - lb) / -p[k]);
                }
            }
            if (alpha >= alpha_max) {
                alpha = alpha_max;
                hit_bound = true;
            }
            for (std::size_t k = 0; k < m; ++k) {
                double& x = u[op.node_of(k)];
                x += alpha * p[k];
                if (hit_bound && p[k] < 0.0 && x <= lb + 1e-15 * std::max(1.0, std::abs(lb))) x = lb;
            }
            if (hit_bound) {
                ++res.restarts;
                break;
            }
            for (std::size_t k = 0; k < m; ++k) r[k] -= alpha * q[k];
            double rnorm = std::sqrt(detail::dot(r, r));
            if (rnorm <= target) break;
            for (std::size_t k = 0; k < m; ++k) z[k] = active[k] ? 0.0 : r[k] / op.diagonal(k);
            const double rz_new = detail::dot(r, z);
            const double beta = rz_new / rz;
            rz = rz_new;
            for (std::size_t k = 0; k < m; ++k) p[k] = z[k] + beta * p[k];
        }
        op.gradient(u, grad);
        current = projected_norm(grad);
    }
    res.residual = ref > 0.0 ? current / ref : 0.0;
    for (std::size_t k = 0; k < m; ++k)
        if (u[op.node_of(k)] <= lb) ++res.active_nodes;
    res.u = std::move(u);
    return res;
}

} // namespace detail

/// 5-point discrete harmonic extension of the boundary data into D.
inline ScalarField harmonic_majorant(const Domain& dom, const ScalarField& v, double tol_cg = 1e-10,
                                     int max_iter = 0) {
    const Grid& g = dom.grid();
    require_match(g, v, "harmonic_majorant");
    for (int n = 0; n < g.node_count(); ++n)
        if (!g.is_alias_node(n) && dom.touches_D(n) && !dom.is_free_node(n) && !std::isfinite(v[n]))
            throw InvalidField("harmonic_majorant: non-finite boundary value");
    StateOperator op(dom, nullptr, 0.0);
    ScalarField u = v;
    // Start from the mean boundary value.
    double mean = 0.0;
    int count = 0;
    for (int n = 0; n < g.node_count(); ++n)
        if (!g.is_alias_node(n) && dom.touches_D(n) && !dom.is_free_node(n)) {
            mean += v[n];
            ++count;
        }
    mean = count > 0 ? mean / count : 0.0;
    for (std::size_t k = 0; k < op.unknowns(); ++k) u[op.node_of(k)] = mean;
    auto res = detail::projected_pcg(op, std::move(u), std::nullopt, tol_cg, max_iter, op.rhs_norm(v));
    sync_periodic(g, res.u);
    return std::move(res.u);
}

/// Minimizes the energy of `p` over feasible fields, starting from u_init
/// (clipped to the bound and overwritten with v on the Dirichlet layer).
inline StateResult solve_state(const StateProblem& p, const Domain& dom, const ScalarField& u_init) {
    const Grid& g = dom.grid();
    require_match(g, p.omega, "solve_state");
    require_match(g, p.boundary, "solve_state");
    require_match(g, u_init, "solve_state");
    if (!(p.beta >= 0.0)) throw InvalidProblem("beta must be non-negative");
    const double m = boundary_minimum(p.boundary, dom);
    if (!(p.epsilon >= 0.0) || !(p.epsilon < m))
        throw InvalidProblem("lower bound eps must satisfy 0 <= eps < m");

    StateOperator op(dom, &p.omega, p.beta);
    ScalarField u = p.boundary;
    for (std::size_t k = 0; k < op.unknowns(); ++k) {
        const int n = op.node_of(k);
        const double x = u_init[n];
        if (!std::isfinite(x)) throw InvalidField("solve_state: non-finite initial value");
        u[n] = std::max(x, p.epsilon);
    }
    const double e0 = op.energy(u);
    auto res = detail::projected_pcg(op, std::move(u), p.epsilon, p.tol_cg, p.max_iter,
                                     op.rhs_norm(p.boundary));
    const double e1 = op.energy(res.u);
    if (e1 > e0 + 1e-12 * std::abs(e0))
        throw InvariantViolation("state step increased the energy");
    sync_periodic(g, res.u);
    return res;
}

} // namespace robinfb
