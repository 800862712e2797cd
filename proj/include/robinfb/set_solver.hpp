#pragma once

// Omega-step: for fixed u, minimize beta * sum_{cut faces} h (u_a^2 + u_b^2)/2
// over admissible cell sets, exactly, by an s-t minimum cut on the cell graph.
// Cells outside D are terminals: in E -> source side, not in E -> sink side.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "robinfb/energy.hpp"
#include "robinfb/maxflow.hpp"

namespace robinfb {

struct SetResult {
    CellSet set;
    double cut_value = 0.0; ///< beta * surface term of `set`
    bool degenerate = false; ///< beta == 0: every admissible set is optimal
};

/// Face weight of the cut problem.
inline double cut_weight(const ScalarField& u, const Face& f, double beta, double h) {
    return beta * h * face_u_sq(u, f.node_a, f.node_b);
}

inline void require_cut_input(const ScalarField& u, double beta, const Domain& dom, const char* what) {
    const Grid& g = dom.grid();
    require_match(g, u, what);
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw InvalidProblem("beta must be non-negative");
    for (const Face& f : dom.faces()) {
        if (!dom.face_in_D(f)) continue;
        for (int n : {f.node_a, f.node_b})
            if (!std::isfinite(u[n]) || u[n] < 0.0)
                throw InvalidField(std::string(what) + ": u must be finite and non-negative");
    }
}

/// Canonical minimum cut: the smallest source side among all minimizers.
inline SetResult solve_set(const ScalarField& u, double beta, const Domain& dom) {
    require_cut_input(u, beta, dom, "solve_set");
    const Grid& g = dom.grid();
    SetResult out;
    if (beta == 0.0) {
        out.set = dom.e_extension();
        out.degenerate = true;
        return out;
    }

    // Graph nodes: D cells, then source and sink.
    std::vector<int> index(g.cell_count(), -1);
    int k = 0;
    for (int c = 0; c < g.cell_count(); ++c)
        if (dom.in_D(c)) index[c] = k++;
    const int source = k;
    const int sink = k + 1;
    MaxFlow flow(k + 2);
    for (const Face& f : dom.faces()) {
        if (!dom.face_in_D(f)) continue;
        const double w = cut_weight(u, f, beta, g.h());
        const bool lo_free = dom.in_D(f.lo);
        const bool hi_free = dom.in_D(f.hi);
        if (lo_free && hi_free) {
            flow.add_edge(index[f.lo], index[f.hi], w, w);
        } else {
            const int free_cell = lo_free ? f.lo : f.hi;
            const int fixed_cell = lo_free ? f.hi : f.lo;
            if (dom.in_E(fixed_cell))
                flow.add_edge(source, index[free_cell], w, 0.0);
            else
                flow.add_edge(index[free_cell], sink, w, 0.0);
        }
    }
    const double value = flow.solve(source, sink);
    const auto side = flow.source_side();
    const double cut = flow.cut_capacity(side);
    if (std::abs(cut - value) > 1e-12 * std::max(1.0, flow.total_capacity()))
        throw InvariantViolation("min-cut value differs from max-flow value");

    out.set = dom.e_extension();
    for (int c = 0; c < g.cell_count(); ++c)
        if (index[c] >= 0) out.set.set(c, side[index[c]] != 0);
    out.cut_value = cut;
    return out;
}

/// beta * surface term restricted to faces touching D.
inline double cut_value(const CellSet& set, const ScalarField& u, double beta, const Domain& dom) {
    double total = 0.0;
    for (const Face& f : dom.faces())
        if (dom.face_in_D(f) && set[f.lo] != set[f.hi]) total += cut_weight(u, f, beta, dom.grid().h());
    return total;
}

/// Exhaustive oracle over all admissible sets. Ties: fewest members, then the
/// lexicographically smallest membership vector (cell order).
inline SetResult brute_force_set(const ScalarField& u, double beta, const Domain& dom,
                                 int max_free_cells = 20) {
    require_cut_input(u, beta, dom, "brute_force_set");
    const Grid& g = dom.grid();
    std::vector<int> free_cells;
    for (int c = 0; c < g.cell_count(); ++c)
        if (dom.in_D(c)) free_cells.push_back(c);
    const int k = static_cast<int>(free_cells.size());
    if (k > max_free_cells) throw CapacityError("too many free cells for exhaustive search");

    SetResult best;
    best.set = dom.e_extension();
    best.degenerate = beta == 0.0;
    double best_value = std::numeric_limits<double>::infinity();
    int best_count = 0;
    std::vector<std::uint8_t> best_bits;

    CellSet trial = dom.e_extension();
    std::vector<std::uint8_t> bits(k);
    const std::uint64_t total = std::uint64_t{1} << k;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        int count = 0;
        for (int b = 0; b < k; ++b) {
            bits[b] = (mask >> b) & 1u;
            count += bits[b];
            trial.set(free_cells[b], bits[b] != 0);
        }
        const double value = cut_value(trial, u, beta, dom);
        bool better = value < best_value;
        if (value == best_value) {
            if (count != best_count)
                better = count < best_count;
            else
                better = std::lexicographical_compare(bits.begin(), bits.end(), best_bits.begin(),
                                                      best_bits.end());
        }
        if (better) {
            best_value = value;
            best_count = count;
            best_bits = bits;
            best.set = trial;
        }
    }
    best.cut_value = best_value;
    return best;
}

} // namespace robinfb
