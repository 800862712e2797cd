#pragma once

// A-posteriori checks on a candidate (u, Omega). Every check returns a
// CertificateReport; a record passes iff its relative margin is >= -tol.
// Records flagged non-gating are reported but do not affect the global flag.

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "robinfb/energy.hpp"
#include "robinfb/state_solver.hpp"

namespace robinfb {

struct CertificateRecord {
    std::string check;
    std::vector<std::pair<std::string, double>> inputs;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0; ///< (rhs - lhs) / max(|lhs|, |rhs|); 0 when both vanish
    bool pass = true;
    bool gating = true;
};

enum class CheckStatus { checked, nothing_to_check, unsupported };

inline const char* to_string(CheckStatus s) {
    switch (s) {
    case CheckStatus::checked: return "checked";
    case CheckStatus::nothing_to_check: return "nothing_to_check";
    case CheckStatus::unsupported: return "unsupported";
    }
    return "?";
}

struct CertificateReport {
    std::string check;
    CheckStatus status = CheckStatus::checked;
    std::vector<CertificateRecord> records;
    std::vector<std::pair<std::string, double>> summary;
    std::vector<std::pair<std::string, double>> tolerances;
    std::string note;

    /// Gating records only; an empty check passes.
    bool pass() const {
        for (const auto& r : records)
            if (r.gating && !r.pass) return false;
        return true;
    }

    double summary_value(const std::string& key) const {
        for (const auto& [k, v] : summary)
            if (k == key) return v;
        throw InvalidProblem("certificate summary has no key " + key);
    }
};

namespace detail {

inline double relative_margin(double lhs, double rhs) {
    if (std::isinf(lhs) && lhs > 0.0) return -1.0;
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    if (scale == 0.0) return 0.0;
    return (rhs - lhs) / scale;
}

inline CertificateRecord make_record(std::string check, std::vector<std::pair<std::string, double>> inputs,
                                     double lhs, double rhs, double tol, bool gating = true) {
    CertificateRecord r;
    r.check = std::move(check);
    r.inputs = std::move(inputs);
    r.lhs = lhs;
    r.rhs = rhs;
    r.margin = relative_margin(lhs, rhs);
    r.pass = r.margin >= -tol;
    r.gating = gating;
    return r;
}

/// Minimum of u over every node on the closure of D.
inline double min_on_D(const ScalarField& u, const Domain& dom) {
    double m = std::numeric_limits<double>::infinity();
    for (int n = 0; n < dom.grid().node_count(); ++n)
        if (!dom.grid().is_alias_node(n) && dom.touches_D(n)) m = std::min(m, u[n]);
    return m;
}

} // namespace detail

/// t_k = m k / (count + 1), k = 1..count.
inline std::vector<double> uniform_thresholds(double m, int count) {
    std::vector<double> t;
    for (int k = 1; k <= count; ++k) t.push_back(m * k / (count + 1));
    return t;
}

/// For each t: sum over {u <= t} of h^2 |grad u|^2 against beta t^2 Per({u <= t}).
inline CertificateReport check_optimality_condition(const ScalarField& u, double beta,
                                                    const std::vector<double>& t_samples, const Domain& dom,
                                                    double tol = 1e-6) {
    require_finite_on_D(u, dom, "check_optimality_condition");
    const Grid& g = dom.grid();
    CertificateReport rep;
    rep.check = "optimality_condition";
    rep.tolerances = {{"tol_cert", tol}};
    int empty = 0;
    for (double t : t_samples) {
        const CellSet s = sublevel_set(u, t, dom);
        double lhs = 0.0;
        int members = 0;
        for (int c = 0; c < g.cell_count(); ++c) {
            if (!s[c] || !dom.in_D(c)) continue;
            ++members;
            lhs += g.h() * g.h() * cell_gradient_sq(u, g, c);
        }
        if (members == 0) ++empty;
        const double rhs = beta * t * t * perimeter(s, dom);
        rep.records.push_back(detail::make_record(rep.check, {{"t", t}}, lhs, rhs, tol));
    }
    rep.summary = {{"samples", static_cast<double>(t_samples.size())}, {"empty_sublevel_sets", empty}};
    return rep;
}

/// Traces f(t) = sum over {u <= t} of h^2 |grad u|. Gating records check the
/// Cauchy-Schwarz link f <= (sum h^2 |grad u|^2)^{1/2} |Omega_t|^{1/2}; the
/// non-gating records compare f with t beta^{1/2} Per^{1/2} |Omega_t|^{1/2},
/// which holds for minimizers only.
inline CertificateReport nondegeneracy_diagnostic(const ScalarField& u, double beta,
                                                  const std::vector<double>& t_grid, const Domain& dom,
                                                  double tol = 1e-8) {
    require_finite_on_D(u, dom, "nondegeneracy_diagnostic");
    const Grid& g = dom.grid();
    CertificateReport rep;
    rep.check = "nondegeneracy";
    rep.tolerances = {{"tol_quadrature", tol}};
    const double t_star = detail::min_on_D(u, dom);
    int below = 0;
    int nonempty_below = 0;
    for (double t : t_grid) {
        const CellSet s = sublevel_set(u, t, dom);
        double f = 0.0;
        double dirichlet = 0.0;
        for (int c = 0; c < g.cell_count(); ++c) {
            if (!s[c] || !dom.in_D(c)) continue;
            const double q = cell_gradient_sq(u, g, c);
            f += g.h() * g.h() * std::sqrt(q);
            dirichlet += g.h() * g.h() * q;
        }
        const double per = perimeter(s, dom);
        const double vol = volume(s, dom);
        if (t < t_star) {
            ++below;
            if (vol > 0.0) ++nonempty_below;
        }
        std::vector<std::pair<std::string, double>> in{{"t", t}, {"per", per}, {"volume", vol}};
        rep.records.push_back(
            detail::make_record("cauchy_schwarz", in, f, std::sqrt(dirichlet) * std::sqrt(vol), tol));
        rep.records.push_back(
            detail::make_record("chain", in, f, t * std::sqrt(beta * per) * std::sqrt(vol), tol, false));
    }
    rep.summary = {{"t_star", t_star},
                   {"samples_below_t_star", below},
                   {"nonempty_below_t_star", nonempty_below},
                   {"nondegenerate", t_star > 0.0 && nonempty_below == 0 ? 1.0 : 0.0}};
    return rep;
}

/// Euclidean distance from each node of D to the boundary of D; -1 for nodes
/// not touching D.
inline std::vector<double> distance_to_boundary(const Domain& dom) {
    const Grid& g = dom.grid();
    std::vector<std::pair<Vec2, Vec2>> segments;
    auto add_cell_side = [&](int i, int j, int di, int dj) {
        // side of cell (i,j) facing (di,dj)
        const Vec2 a = di > 0 ? g.node_point(i + 1, j) : dj > 0 ? g.node_point(i, j + 1) : g.node_point(i, j);
        const Vec2 b = di < 0 ? g.node_point(i, j + 1) : dj < 0 ? g.node_point(i + 1, j)
                                                                : g.node_point(i + 1, j + 1);
        segments.push_back({a, b});
    };
    for (int c = 0; c < g.cell_count(); ++c) {
        if (!dom.in_D(c)) continue;
        const int i = g.cell_i(c);
        const int j = g.cell_j(c);
        const int d[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
        for (const auto& e : d) {
            const int q = g.cell_wrapped(i + e[0], j + e[1]);
            if (q < 0 || !dom.in_D(q)) add_cell_side(i, j, e[0], e[1]);
        }
    }
    std::vector<double> dist(g.node_count(), -1.0);
    for (int n = 0; n < g.node_count(); ++n) {
        if (g.is_alias_node(n) || !dom.touches_D(n)) continue;
        const Vec2 x = g.node_point(g.node_i(n), g.node_j(n));
        double best = std::numeric_limits<double>::infinity();
        for (const auto& [a, b] : segments) {
            const Vec2 xa = g.displacement(a, x);
            const Vec2 ab = b - a;
            const double s = std::clamp(dot(xa, ab) / dot(ab, ab), 0.0, 1.0);
            best = std::min(best, norm(xa - s * ab));
        }
        dist[n] = best;
    }
    return dist;
}

/// max |u(x) - u(y)| / |x - y|^{1/3} over node pairs in {dist(x, boundary of D) > delta}:
/// every pair within 8h plus `random_pairs` uniformly drawn pairs.
inline double holder_seminorm(const ScalarField& u, double delta, const Domain& dom, std::uint64_t seed = 0,
                              int random_pairs = 10000) {
    require_finite_on_D(u, dom, "holder_seminorm");
    const Grid& g = dom.grid();
    if (!(delta > 2.0 * g.h())) throw InvalidProblem("holder_seminorm needs delta > 2h");
    const auto dist = distance_to_boundary(dom);
    std::vector<int> inner;
    std::vector<std::uint8_t> is_inner(g.node_count(), 0);
    for (int n = 0; n < g.node_count(); ++n)
        if (dist[n] > delta) {
            inner.push_back(n);
            is_inner[n] = 1;
        }
    if (inner.empty()) throw InvalidRegion("no nodes farther than delta from the boundary of D");

    auto point = [&](int n) { return g.node_point(g.node_i(n), g.node_j(n)); };
    auto ratio = [&](int p, int q) {
        const double r = norm(g.displacement(point(p), point(q)));
        if (r == 0.0) return 0.0;
        return std::abs(u[p] - u[q]) / std::cbrt(r);
    };
    double best = 0.0;
    for (int p : inner) {
        const int i = g.node_i(p);
        const int j = g.node_j(p);
        for (int dj = 0; dj <= 8; ++dj)
            for (int di = -8; di <= 8; ++di) {
                if (dj == 0 && di <= 0) continue;
                if (di * di + dj * dj > 64) continue;
                const int q = g.node_wrapped(i + di, j + dj);
                if (q < 0 || q == p || !is_inner[q]) continue;
                best = std::max(best, ratio(p, q));
            }
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, inner.size() - 1);
    for (int k = 0; k < random_pairs; ++k) best = std::max(best, ratio(inner[pick(rng)], inner[pick(rng)]));
    return best;
}

namespace detail {

/// Local frame of an interface face in node coordinates: the face runs from
/// node (i0, j0) along `tangent` for one cell; `normal` points out of Omega.
struct FaceFrame {
    int i0 = 0;
    int j0 = 0;
    int ti = 0, tj = 0; ///< tangent step
    int ni = 0, nj = 0; ///< outward normal step
};

inline FaceFrame face_frame(const Grid& g, const InterfaceFace& f) {
    FaceFrame fr;
    fr.i0 = g.node_i(f.node_a);
    fr.j0 = g.node_j(f.node_a);
    if (f.axis == 0) {
        fr.tj = 1;
        fr.ni = f.normal.x > 0.0 ? 1 : -1;
    } else {
        fr.ti = 1;
        fr.nj = f.normal.y > 0.0 ? 1 : -1;
    }
    return fr;
}

/// Cell on one side of the face line (side = +1 outward, -1 inward), `depth`
/// cells away from it (0 = adjacent), shifted `off` cells along the face.
inline int frame_cell(const Grid& g, const FaceFrame& fr, int off, int side, int depth) {
    const int i = fr.i0 + off * fr.ti;
    const int j = fr.j0 + off * fr.tj;
    const int dir = side * (fr.ni + fr.nj); // +1: toward increasing index
    const int k = dir > 0 ? depth : -1 - depth;
    return fr.ni != 0 ? g.cell_wrapped(i + k, j) : g.cell_wrapped(i, j + k);
}

inline int frame_node(const Grid& g, const FaceFrame& fr, int along, int depth) {
    return g.node_wrapped(fr.i0 + along * fr.ti + depth * fr.ni, fr.j0 + along * fr.tj + depth * fr.nj);
}

/// Derivative along the outward normal from one side by 3-node quadratic
/// extrapolation; side = +1 uses nodes outside Omega, -1 nodes inside.
inline double one_sided_normal_derivative(const ScalarField& u, const Grid& g, const FaceFrame& fr, int along,
                                          int side) {
    const double f0 = u[frame_node(g, fr, along, 0)];
    const double f1 = u[frame_node(g, fr, along, side)];
    const double f2 = u[frame_node(g, fr, along, 2 * side)];
    return side * (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * g.h());
}

/// The column at tangential offset `off` crosses from Omega to its complement
/// exactly once between normal positions -2..+2 (cells), at offset `o` in
/// {-1, 0, 1}; returns that offset or a sentinel.
inline int column_transition(const CellSet& omega, const Grid& g, const FaceFrame& fr, int off) {
    constexpr int none = 99;
    // Signed cell position p: p <= 0 are inward cells (p = 0 adjacent), p >= 1 outward.
    auto member = [&](int p, bool& ok) {
        const int c = p >= 1 ? frame_cell(g, fr, off, +1, p - 1) : frame_cell(g, fr, off, -1, -p);
        if (c < 0) {
            ok = false;
            return false;
        }
        return omega[c];
    };
    int found = none;
    for (int o = -1; o <= 1; ++o) {
        bool ok = true;
        const bool pattern = member(o - 1, ok) && member(o, ok) && !member(o + 1, ok) && !member(o + 2, ok);
        if (ok && pattern) {
            if (found != none) return none;
            found = o;
        }
    }
    return found;
}

inline bool stencil_nodes_available(const Domain& dom, const FaceFrame& fr) {
    for (int along = 0; along <= 1; ++along)
        for (int depth = -2; depth <= 2; ++depth) {
            const int n = frame_node(dom.grid(), fr, along, depth);
            if (n < 0 || !dom.touches_D(n)) return false;
        }
    return true;
}

/// Flat or monotone 3-column face neighborhood with two cells of each phase
/// in the face's own column and nodes three deep on both sides.
inline bool regular_face(const CellSet& omega, const Domain& dom, const FaceFrame& fr) {
    const Grid& g = dom.grid();
    if (column_transition(omega, g, fr, 0) != 0) return false;
    const int left = column_transition(omega, g, fr, -1);
    const int right = column_transition(omega, g, fr, 1);
    if (std::abs(left) > 1 || std::abs(right) > 1) return false;
    if (left * right > 0) return false;
    return stencil_nodes_available(dom, fr);
}

} // namespace detail

struct RobinFace {
    Vec2 midpoint;
    double du_inside = 0.0;  ///< d u / d nu from the Omega side
    double du_outside = 0.0; ///< d u / d nu from the complement side
    double u_mid = 0.0;
    double residual = 0.0;
};

struct RobinResult {
    std::vector<RobinFace> faces;
    double max_abs = 0.0;
    int skipped = 0;
    CertificateReport report;
};

/// r = du_in/dnu - du_out/dnu + beta u on every regular interface face, with nu
/// pointing out of Omega. Records compare |r| with `envelope`.
inline RobinResult robin_residual(const ScalarField& u, const CellSet& omega, double beta, const Domain& dom,
                                  double envelope) {
    require_finite_on_D(u, dom, "robin_residual");
    require_match(dom.grid(), omega, "robin_residual");
    const Grid& g = dom.grid();
    RobinResult out;
    out.report.check = "robin_residual";
    out.report.tolerances = {{"envelope", envelope}};
    const auto mesh = extract_interface(omega, dom);
    for (const auto& f : mesh.faces) {
        const auto fr = detail::face_frame(g, f);
        if (!detail::regular_face(omega, dom, fr)) {
            ++out.skipped;
            continue;
        }
        RobinFace rf;
        rf.midpoint = f.midpoint;
        for (int along = 0; along <= 1; ++along) {
            rf.du_inside += 0.5 * detail::one_sided_normal_derivative(u, g, fr, along, -1);
            rf.du_outside += 0.5 * detail::one_sided_normal_derivative(u, g, fr, along, +1);
        }
        rf.u_mid = 0.5 * (u[f.node_a] + u[f.node_b]);
        rf.residual = rf.du_inside - rf.du_outside + beta * rf.u_mid;
        out.max_abs = std::max(out.max_abs, std::abs(rf.residual));
        out.report.records.push_back(detail::make_record(
            "robin", {{"x1", f.midpoint.x}, {"x2", f.midpoint.y}}, std::abs(rf.residual), envelope, 0.0));
        out.faces.push_back(rf);
    }
    if (mesh.faces.empty() || out.faces.empty()) {
        out.report.status = CheckStatus::nothing_to_check;
        out.report.note = mesh.faces.empty() ? "interface is empty" : "no regular interface faces";
    }
    out.report.summary = {{"max_abs", out.max_abs},
                          {"regular_faces", static_cast<double>(out.faces.size())},
                          {"skipped_faces", out.skipped}};
    return out;
}

struct CurvaturePatch {
    Vec2 center;
    double slope = 0.0;     ///< eta'
    double curvature = 0.0; ///< -div(grad eta / sqrt(1 + |grad eta|^2)) with Omega = {x2 < eta}
    double f = 0.0;
    double residual = 0.0;
};

struct CurvatureResult {
    std::vector<CurvaturePatch> patches;
    double max_abs = 0.0;
    double median = 0.0; ///< median residual
    int skipped = 0;
    CertificateReport report;
};

/// Prescribed-curvature residual on windows where the interface is a graph
/// x2 = eta(x1) over 2*half_width+1 columns. eta is the height of the
/// horizontal transition face in each column; a least-squares quadratic gives
/// eta' and eta''. Where Omega lies above the graph the orientation flips.
inline CurvatureResult curvature_residual(const ScalarField& u, const CellSet& omega, double beta,
                                          const Domain& dom, double envelope, int half_width = 4) {
    require_finite_on_D(u, dom, "curvature_residual");
    require_match(dom.grid(), omega, "curvature_residual");
    if (half_width < 2) throw InvalidProblem("curvature window needs at least 5 columns");
    if (!(beta > 0.0)) throw InvalidProblem("curvature residual needs beta > 0");
    const Grid& g = dom.grid();
    const double h = g.h();
    CurvatureResult out;
    out.report.check = "curvature_residual";
    out.report.tolerances = {{"envelope", envelope}, {"half_width", half_width}};

    // Horizontal transition faces per cell column: node row j and orientation
    // (+1: Omega below, -1: Omega above).
    std::vector<std::vector<std::pair<int, int>>> crossings(g.n1());
    for (int i = 0; i < g.n1(); ++i)
        for (int j = 1; j < g.n2(); ++j) {
            const int lo = g.cell(i, j - 1);
            const int hi = g.cell(i, j);
            if (omega[lo] == omega[hi] || !(dom.in_D(lo) || dom.in_D(hi))) continue;
            crossings[i].push_back({j, omega[lo] ? 1 : -1});
        }
    auto follow = [&](int column, int row, int orient) {
        // Unique crossing of the same orientation within two rows of `row`.
        int found = -1;
        for (const auto& [j, o] : crossings[column]) {
            if (o != orient || std::abs(j - row) > 2) continue;
            if (found >= 0) return -1;
            found = j;
        }
        return found;
    };

    for (int i = 0; i < g.n1(); ++i) {
        for (const auto& [j0, orient] : crossings[i]) {
            std::vector<double> xs;
            std::vector<double> ys;
            bool ok = true;
            xs.push_back(0.0);
            ys.push_back(j0 * h);
            for (int dir : {-1, 1}) {
                int row = j0;
                for (int s = 1; s <= half_width && ok; ++s) {
                    const int col = i + dir * s;
                    if (!g.periodic() && (col < 0 || col >= g.n1())) {
                        ok = false;
                        break;
                    }
                    const int wrapped = ((col % g.n1()) + g.n1()) % g.n1();
                    row = follow(wrapped, row, orient);
                    if (row < 0) ok = false;
                    xs.push_back(dir * s * h);
                    ys.push_back(row * h);
                }
            }
            // One-sided stencils: nodes j0-2..j0+2 in both node columns of the face.
            for (int di = 0; di <= 1 && ok; ++di)
                for (int dj = -2; dj <= 2; ++dj) {
                    const int n = g.node_wrapped(i + di, j0 + dj);
                    if (n < 0 || !dom.touches_D(n)) ok = false;
                }
            if (!ok) {
                ++out.skipped;
                continue;
            }
            // Least-squares quadratic y = a + b x + c x^2 (normal equations).
            double s[5] = {0, 0, 0, 0, 0};
            double r[3] = {0, 0, 0};
            for (std::size_t k = 0; k < xs.size(); ++k) {
                double p = 1.0;
                for (int e = 0; e < 5; ++e) {
                    if (e < 3) r[e] += p * ys[k];
                    s[e] += p;
                    p *= xs[k];
                }
            }
            // Symmetric abscissae: s[1] = s[3] = 0, so b decouples.
            const double b = r[1] / s[2];
            const double det = s[0] * s[4] - s[2] * s[2];
            const double c = (s[0] * r[2] - s[2] * r[0]) / det;
            const double slope = b;
            const double curvature = orient * (-2.0 * c / std::pow(1.0 + slope * slope, 1.5));

            // Gradients on the face at node row j0, averaged over its two node columns.
            double du_in_sq = 0.0;
            double du_out_sq = 0.0;
            const int na = g.node(i, j0);
            const int nb = g.node_wrapped(i + 1, j0);
            for (int di = 0; di <= 1; ++di) {
                auto at = [&](int dj) { return u[g.node_wrapped(i + di, j0 + dj)]; };
                // Omega side lies toward -orient in x2.
                const double d_in = orient * (3.0 * at(0) - 4.0 * at(-orient) + at(-2 * orient)) / (2.0 * h);
                const double d_out = orient * (-3.0 * at(0) + 4.0 * at(orient) - at(2 * orient)) / (2.0 * h);
                du_in_sq += 0.5 * d_in * d_in;
                du_out_sq += 0.5 * d_out * d_out;
            }
            const double tangential = (u[nb] - u[na]) / h;
            const double u_mid = 0.5 * (u[na] + u[nb]);
            const double grad_jump = (tangential * tangential + du_in_sq) - (tangential * tangential + du_out_sq);
            const double normal_jump = du_in_sq - du_out_sq;
            const double f = (grad_jump - 2.0 * (1.0 + slope * slope) * normal_jump) / (beta * u_mid * u_mid);

            CurvaturePatch p;
            p.center = g.node_point(i, j0) + Vec2{0.5 * h, 0.0};
            p.slope = slope;
            p.curvature = curvature;
            p.f = f;
            p.residual = curvature - f;
            out.max_abs = std::max(out.max_abs, std::abs(p.residual));
            out.report.records.push_back(detail::make_record(
                "curvature", {{"x1", p.center.x}, {"x2", p.center.y}}, std::abs(p.residual), envelope, 0.0));
            out.patches.push_back(p);
        }
    }
    if (out.patches.empty()) {
        out.report.status = CheckStatus::nothing_to_check;
        out.report.note = "no graph-like interface windows";
    } else {
        std::vector<double> res;
        for (const auto& p : out.patches) res.push_back(p.residual);
        std::nth_element(res.begin(), res.begin() + res.size() / 2, res.end());
        out.median = res[res.size() / 2];
    }
    out.report.summary = {{"max_abs", out.max_abs},
                          {"median", out.median},
                          {"patches", static_cast<double>(out.patches.size())},
                          {"skipped", out.skipped}};
    return out;
}

struct BallConstant {
    Vec2 center;
    double radius = 0.0;
    double constant = 0.0; ///< may be +infinity
};

struct AlmostMinimalityResult {
    std::vector<BallConstant> balls;
    double summary = 0.0; ///< max finite constant (0 if none is positive)
    int infinite = 0;
    CertificateReport report;
};

/// For balls B_r centered on interface face midpoints and contained in D, the
/// smallest C with Per(Omega; B_r) <= (1 + C r^{1/3}) Per(Omega'; B_r) over the
/// competitors Omega u B_{r/2}, Omega \ B_{r/2} and a flat cut through the center.
inline AlmostMinimalityResult almost_minimality_constant(const CellSet& omega, const Domain& dom,
                                                         const std::vector<double>& r_samples,
                                                         double c_max = 1.0) {
    const Grid& g = dom.grid();
    require_match(g, omega, "almost_minimality_constant");
    AlmostMinimalityResult out;
    out.report.check = "almost_minimality";
    out.report.tolerances = {{"c_max", c_max}};
    const auto mesh = extract_interface(omega, dom);
    for (double r : r_samples) {
        for (const auto& f : mesh.faces) {
            const Vec2 x0 = f.midpoint;
            CellSet ball(g);
            CellSet half(g);
            const Vec2 lo = g.origin();
            const Vec2 hi = lo + Vec2{g.n1() * g.h(), g.n2() * g.h()};
            bool inside = x0.y - r >= lo.y && x0.y + r <= hi.y &&
                          (g.periodic() || (x0.x - r >= lo.x && x0.x + r <= hi.x));
            for (int c = 0; c < g.cell_count() && inside; ++c) {
                const double d = norm(g.displacement(x0, g.cell_center(c)));
                if (d > r) continue;
                if (!dom.in_D(c)) inside = false;
                ball.set(c, true);
                half.set(c, d <= 0.5 * r);
            }
            if (!inside) continue;
            const double per = perimeter(omega, dom, ball);
            CellSet grow = omega;
            CellSet shrink = omega;
            CellSet flat = omega;
            for (int c = 0; c < g.cell_count(); ++c) {
                if (half[c]) {
                    grow.set(c, true);
                    shrink.set(c, false);
                }
                if (ball[c]) flat.set(c, dot(g.displacement(x0, g.cell_center(c)), f.normal) < 0.0);
            }
            double worst = -std::numeric_limits<double>::infinity();
            for (const CellSet* comp : {&grow, &shrink, &flat}) {
                const double per_c = perimeter(*comp, dom, ball);
                double value;
                if (per_c == 0.0)
                    value = per > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
                else
                    value = (per / per_c - 1.0) / std::cbrt(r);
                worst = std::max(worst, value);
            }
            out.balls.push_back({x0, r, worst});
            if (std::isinf(worst))
                ++out.infinite;
            else
                out.summary = std::max(out.summary, worst);
            out.report.records.push_back(
                detail::make_record("ball", {{"x1", x0.x}, {"x2", x0.y}, {"r", r}}, worst, c_max, 0.0));
        }
    }
    if (out.balls.empty()) {
        out.report.status = CheckStatus::nothing_to_check;
        out.report.note = "no interface ball fits inside D";
    }
    out.report.summary = {{"summary", out.summary},
                          {"infinite", out.infinite},
                          {"balls", static_cast<double>(out.balls.size())}};
    return out;
}

struct SymmetrizationResult {
    double j_original = 0.0;
    double j_symmetrized = 0.0;
    bool pass = false;
    CertificateReport report;
};

/// Cells with center above x2 = 0.
inline CellSet upper_half(const Domain& dom) {
    return select_cells(dom.grid(), [](Vec2 x) { return x.y > 0.0; });
}

/// Compares J(u, Omega) with J(steiner_symmetrize(u), {x2 > 0}).
inline SymmetrizationResult symmetrization_test(const ScalarField& u, const CellSet& omega, double beta,
                                                const Domain& dom, double tol = 1e-6) {
    require_finite_on_D(u, dom, "symmetrization_test");
    require_x2_symmetric(dom);
    const Grid& g = dom.grid();
    const CellSet half = upper_half(dom);
    for (int c = 0; c < g.cell_count(); ++c)
        if (!dom.in_D(c) && dom.in_E(c) != half[c])
            throw UnsupportedGeometry("exterior set E is not the half-space {x2 > 0}");
    for (int n = 0; n < g.node_count(); ++n)
        if (!g.is_alias_node(n) && dom.touches_D(n) && (u[n] < 0.0 || u[n] > 1.0))
            throw InvalidField("symmetrization_test needs 0 <= u <= 1 on D");
    SymmetrizationResult out;
    out.j_original = total_energy(u, omega, beta, dom).total;
    out.j_symmetrized = total_energy(steiner_symmetrize(u, dom), half, beta, dom).total;
    out.report.check = "symmetrization";
    out.report.tolerances = {{"tol_cert", tol}};
    out.report.records.push_back(detail::make_record("steiner", {}, out.j_symmetrized, out.j_original, tol));
    out.report.summary = {{"j_original", out.j_original}, {"j_symmetrized", out.j_symmetrized}};
    out.pass = out.report.pass();
    return out;
}

struct CertificateOptions {
    std::vector<std::string> selection{"optimality", "nondegeneracy", "holder", "robin",
                                       "curvature", "almost_minimality", "symmetrization"};
    double tol_cert = 1e-6;
    double tol_quadrature = 1e-8;
    int t_samples = 20;
    double holder_delta = 0.1;
    std::uint64_t seed = 0;
    double residual_envelope_factor = 10.0; ///< envelope = factor * h
    int curvature_half_width = 4;
    std::vector<double> ball_radii_cells{8.0, 16.0, 32.0}; ///< radii in units of h
    double c_max = 1.0;
};

inline const std::vector<std::string>& certificate_names() {
    static const std::vector<std::string> names{"optimality", "nondegeneracy", "holder", "robin",
                                                "curvature", "almost_minimality", "symmetrization"};
    return names;
}

struct CertificateSuite {
    std::vector<CertificateReport> reports;

    bool pass() const {
        return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.pass(); });
    }
};

/// Runs the selected checks. m is the lower bound of the boundary data.
inline CertificateSuite run_certificates(const ScalarField& u, const CellSet& omega, double beta, double m,
                                         const Domain& dom, const CertificateOptions& opt) {
    const double h = dom.grid().h();
    const double envelope = opt.residual_envelope_factor * h;
    const auto ts = uniform_thresholds(m, opt.t_samples);
    CertificateSuite suite;
    for (const auto& name : opt.selection) {
        if (std::find(certificate_names().begin(), certificate_names().end(), name) == certificate_names().end())
            throw InvalidProblem("unknown certificate " + name);
        try {
            if (name == "optimality") {
                suite.reports.push_back(check_optimality_condition(u, beta, ts, dom, opt.tol_cert));
            } else if (name == "nondegeneracy") {
                suite.reports.push_back(nondegeneracy_diagnostic(u, beta, ts, dom, opt.tol_quadrature));
            } else if (name == "holder") {
                CertificateReport r;
                r.check = "holder";
                r.tolerances = {{"delta", opt.holder_delta}};
                r.summary = {{"seminorm", holder_seminorm(u, opt.holder_delta, dom, opt.seed)}};
                suite.reports.push_back(std::move(r));
            } else if (name == "robin") {
                suite.reports.push_back(robin_residual(u, omega, beta, dom, envelope).report);
            } else if (name == "curvature") {
                suite.reports.push_back(
                    curvature_residual(u, omega, beta, dom, envelope, opt.curvature_half_width).report);
            } else if (name == "almost_minimality") {
                std::vector<double> radii;
                for (double k : opt.ball_radii_cells) radii.push_back(k * h);
                suite.reports.push_back(almost_minimality_constant(omega, dom, radii, opt.c_max).report);
            } else if (name == "symmetrization") {
                suite.reports.push_back(symmetrization_test(u, omega, beta, dom, opt.tol_cert).report);
            }
        } catch (const UnsupportedGeometry& e) {
            CertificateReport r;
            r.check = name;
            r.status = CheckStatus::unsupported;
            r.note = e.what();
            suite.reports.push_back(std::move(r));
        } catch (const InvalidRegion& e) {
            CertificateReport r;
            r.check = name;
            r.status = CheckStatus::nothing_to_check;
            r.note = e.what();
            suite.reports.push_back(std::move(r));
        }
    }
    return suite;
}

} // namespace robinfb
