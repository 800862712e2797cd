#pragma once

// Regular 2-D cell grid. The set Omega lives on cells, the state u on nodes.
// Cell (i,j) spans [x0+i*h, x0+(i+1)*h] x [y0+j*h, y0+(j+1)*h]; node (i,j) sits
// at (x0+i*h, y0+j*h). Storage is row-major: index = j*width + i.

#include <cmath>
#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "robinfb/errors.hpp"

namespace robinfb {

enum class LateralBc { dirichlet, periodic };

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Vec2&) const = default;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

class Grid {
public:
    Grid(int n1, int n2, double h, Vec2 origin = {}, LateralBc lateral = LateralBc::dirichlet)
        : n1_(n1), n2_(n2), h_(h), origin_(origin), lateral_(lateral) {
        if (n1 < 2 || n2 < 2) throw InvalidProblem("grid needs at least 2 cells per axis");
        if (!(h > 0.0) || !std::isfinite(h)) throw InvalidProblem("grid spacing must be positive");
    }

    int n1() const noexcept { return n1_; }
    int n2() const noexcept { return n2_; }
    double h() const noexcept { return h_; }
    Vec2 origin() const noexcept { return origin_; }
    LateralBc lateral_bc() const noexcept { return lateral_; }
    bool periodic() const noexcept { return lateral_ == LateralBc::periodic; }

    int cell_count() const noexcept { return n1_ * n2_; }
    int node_count() const noexcept { return (n1_ + 1) * (n2_ + 1); }

    int cell(int i, int j) const noexcept { return j * n1_ + i; }
    int cell_i(int c) const noexcept { return c % n1_; }
    int cell_j(int c) const noexcept { return c / n1_; }

    /// Storage index of node (i,j). With periodic lateral boundary, column n1
    /// is an alias of column 0 and this returns the column-0 index.
    int node(int i, int j) const noexcept {
        if (periodic() && i == n1_) i = 0;
        return j * (n1_ + 1) + i;
    }
    int node_i(int n) const noexcept { return n % (n1_ + 1); }
    int node_j(int n) const noexcept { return n / (n1_ + 1); }
    bool is_alias_node(int n) const noexcept { return periodic() && node_i(n) == n1_; }

    /// Cell index after lateral wrapping, or -1 if (i,j) falls off the grid.
    int cell_wrapped(int i, int j) const noexcept {
        if (j < 0 || j >= n2_) return -1;
        if (periodic()) {
            i %= n1_;
            if (i < 0) i += n1_;
        } else if (i < 0 || i >= n1_) {
            return -1;
        }
        return cell(i, j);
    }

    /// Node index after lateral wrapping, or -1 if (i,j) falls off the grid.
    int node_wrapped(int i, int j) const noexcept {
        if (j < 0 || j > n2_) return -1;
        if (periodic()) {
            i %= n1_;
            if (i < 0) i += n1_;
        } else if (i < 0 || i > n1_) {
            return -1;
        }
        return node(i, j);
    }

    Vec2 node_point(int i, int j) const noexcept { return {origin_.x + i * h_, origin_.y + j * h_}; }
    Vec2 cell_center(int i, int j) const noexcept {
        return {origin_.x + (i + 0.5) * h_, origin_.y + (j + 0.5) * h_};
    }
    Vec2 cell_center(int c) const noexcept { return cell_center(cell_i(c), cell_j(c)); }

    /// Displacement b - a, using the minimum image across the periodic axis.
    Vec2 displacement(Vec2 a, Vec2 b) const noexcept {
        Vec2 d = b - a;
        if (periodic()) {
            const double width = n1_ * h_;
            d.x -= width * std::round(d.x / width);
        }
        return d;
    }

    bool operator==(const Grid&) const = default;

private:
    int n1_;
    int n2_;
    double h_;
    Vec2 origin_;
    LateralBc lateral_;
};

/// Node-valued field (u, v, h). Sized (n1+1)*(n2+1) regardless of lateral mode.
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(const Grid& g, double value = 0.0)
        : width_(g.n1() + 1), height_(g.n2() + 1), values_(g.node_count(), value) {}

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return values_.size(); }

    double& operator[](std::size_t n) { return values_[n]; }
    double operator[](std::size_t n) const { return values_[n]; }

    std::vector<double>& values() noexcept { return values_; }
    const std::vector<double>& values() const noexcept { return values_; }

    bool operator==(const ScalarField&) const = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> values_;
};

/// Cell indicator (Omega, sublevel sets, balls).
class CellSet {
public:
    CellSet() = default;
    explicit CellSet(const Grid& g, bool value = false)
        : width_(g.n1()), height_(g.n2()), member_(g.cell_count(), value ? 1 : 0) {}

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return member_.size(); }

    bool operator[](std::size_t c) const { return member_[c] != 0; }
    void set(std::size_t c, bool value) { member_[c] = value ? 1 : 0; }

    std::size_t count() const noexcept {
        std::size_t k = 0;
        for (auto m : member_) k += m;
        return k;
    }

    bool operator==(const CellSet&) const = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> member_;
};

inline void require_match(const Grid& g, const ScalarField& u, const char* what) {
    if (u.width() != g.n1() + 1 || u.height() != g.n2() + 1)
        throw DimensionMismatch(std::string(what) + ": field size does not match grid");
}

inline void require_match(const Grid& g, const CellSet& s, const char* what) {
    if (s.width() != g.n1() || s.height() != g.n2())
        throw DimensionMismatch(std::string(what) + ": cell set size does not match grid");
}

/// A face shared by two edge-adjacent cells. `lo` is the left/lower cell and
/// `normal` the unit vector from `lo` to `hi`.
struct Face {
    int lo = -1;
    int hi = -1;
    int node_a = -1;
    int node_b = -1;
    int axis = 0; ///< 0: normal +e1 (vertical face), 1: normal +e2 (horizontal face)
    Vec2 midpoint;
};

/// All faces between adjacent grid cells, including the wrap-around column
/// of a periodic grid. Order: vertical faces row by row, then horizontal ones.
inline std::vector<Face> grid_faces(const Grid& g) {
    std::vector<Face> faces;
    const int ni = g.periodic() ? g.n1() : g.n1() - 1;
    faces.reserve(static_cast<std::size_t>(ni * g.n2() + g.n1() * (g.n2() - 1)));
    const double h = g.h();
    for (int j = 0; j < g.n2(); ++j) {
        for (int i = 0; i < ni; ++i) {
            Face f;
            f.lo = g.cell(i, j);
            f.hi = g.cell_wrapped(i + 1, j);
            f.node_a = g.node(i + 1, j);
            f.node_b = g.node(i + 1, j + 1);
            f.axis = 0;
            f.midpoint = g.node_point(i + 1, j) + Vec2{0.0, 0.5 * h};
            faces.push_back(f);
        }
    }
    for (int j = 0; j + 1 < g.n2(); ++j) {
        for (int i = 0; i < g.n1(); ++i) {
            Face f;
            f.lo = g.cell(i, j);
            f.hi = g.cell(i, j + 1);
            f.node_a = g.node(i, j + 1);
            f.node_b = g.node(i + 1, j + 1);
            f.axis = 1;
            f.midpoint = g.node_point(i, j + 1) + Vec2{0.5 * h, 0.0};
            faces.push_back(f);
        }
    }
    return faces;
}

/// Which cells belong to D, and the set E (defined on every cell; only its
/// trace outside D constrains admissible sets, its trace inside D seeds the
/// initial Omega).
struct DomainMask {
    std::vector<std::uint8_t> in_D;
    std::vector<std::uint8_t> in_E;
};

/// Grid + mask with derived node classification. Immutable after construction.
class Domain {
public:
    Domain(Grid grid, DomainMask mask) : grid_(grid), mask_(std::move(mask)) {
        const auto nc = static_cast<std::size_t>(grid_.cell_count());
        if (mask_.in_D.size() != nc || mask_.in_E.size() != nc)
            throw DimensionMismatch("domain mask size does not match grid");
        classify_nodes();
        check_connected();
        faces_ = grid_faces(grid_);
    }

    const Grid& grid() const noexcept { return grid_; }
    const DomainMask& mask() const noexcept { return mask_; }
    const std::vector<Face>& faces() const noexcept { return faces_; }

    bool in_D(int c) const { return mask_.in_D[c] != 0; }
    bool in_E(int c) const { return mask_.in_E[c] != 0; }

    /// Node is an unknown of the state problem: every cell touching it is in D.
    bool is_free_node(int n) const { return free_node_[n] != 0; }
    /// Node lies on the closure of some D cell.
    bool touches_D(int n) const { return touches_D_[n] != 0; }

    /// Face is part of the energy: at least one adjacent cell is in D.
    bool face_in_D(const Face& f) const { return in_D(f.lo) || in_D(f.hi); }

    int free_cell_count() const {
        int k = 0;
        for (auto d : mask_.in_D) k += d;
        return k;
    }

    /// The admissible set equal to E on every cell.
    CellSet e_extension() const {
        CellSet s(grid_);
        for (int c = 0; c < grid_.cell_count(); ++c) s.set(c, in_E(c));
        return s;
    }

    bool is_admissible(const CellSet& s) const {
        require_match(grid_, s, "is_admissible");
        for (int c = 0; c < grid_.cell_count(); ++c)
            if (!in_D(c) && s[c] != in_E(c)) return false;
        return true;
    }

    bool operator==(const Domain& o) const {
        return grid_ == o.grid_ && mask_.in_D == o.mask_.in_D && mask_.in_E == o.mask_.in_E;
    }

private:
    void classify_nodes() {
        const int nn = grid_.node_count();
        free_node_.assign(nn, 0);
        touches_D_.assign(nn, 0);
        for (int j = 0; j <= grid_.n2(); ++j) {
            for (int i = 0; i <= grid_.n1(); ++i) {
                const int n = grid_.node(i, j);
                if (grid_.is_alias_node(j * (grid_.n1() + 1) + i)) continue;
                int in = 0;
                int present = 0;
                for (int di = -1; di <= 0; ++di) {
                    for (int dj = -1; dj <= 0; ++dj) {
                        const int c = grid_.cell_wrapped(i + di, j + dj);
                        if (c < 0) continue;
                        ++present;
                        in += in_D(c) ? 1 : 0;
                    }
                }
                free_node_[n] = (present == 4 && in == 4) ? 1 : 0;
                touches_D_[n] = in > 0 ? 1 : 0;
            }
        }
    }

    void check_connected() const {
        const int nc = grid_.cell_count();
        int start = -1;
        int total = 0;
        for (int c = 0; c < nc; ++c) {
            if (in_D(c)) {
                ++total;
                if (start < 0) start = c;
            }
        }
        if (total == 0) throw InvalidProblem("domain D is empty");
        std::vector<std::uint8_t> seen(nc, 0);
        std::deque<int> queue{start};
        seen[start] = 1;
        int reached = 0;
        while (!queue.empty()) {
            const int c = queue.front();
            queue.pop_front();
            ++reached;
            const int i = grid_.cell_i(c);
            const int j = grid_.cell_j(c);
            const int nbrs[4] = {grid_.cell_wrapped(i - 1, j), grid_.cell_wrapped(i + 1, j),
                                 grid_.cell_wrapped(i, j - 1), grid_.cell_wrapped(i, j + 1)};
            for (int q : nbrs) {
                if (q >= 0 && in_D(q) && !seen[q]) {
                    seen[q] = 1;
                    queue.push_back(q);
                }
            }
        }
        if (reached != total) throw InvalidProblem("domain D is not edge-connected");
    }

    Grid grid_;
    DomainMask mask_;
    std::vector<std::uint8_t> free_node_;
    std::vector<std::uint8_t> touches_D_;
    std::vector<Face> faces_;
};

/// Mask with every cell in D.
inline DomainMask full_mask(const Grid& g) {
    DomainMask m;
    m.in_D.assign(g.cell_count(), 1);
    m.in_E.assign(g.cell_count(), 0);
    return m;
}

/// Copy column 0 onto the alias column n1 of a periodic grid.
inline void sync_periodic(const Grid& g, ScalarField& u) {
    if (!g.periodic()) return;
    for (int j = 0; j <= g.n2(); ++j) u[j * (g.n1() + 1) + g.n1()] = u[g.node(0, j)];
}

/// Sample a function of position at every node.
template <class F>
ScalarField sample_nodes(const Grid& g, F&& f) {
    ScalarField u(g);
    for (int j = 0; j <= g.n2(); ++j)
        for (int i = 0; i <= g.n1(); ++i) u[j * (g.n1() + 1) + i] = f(g.node_point(i, j));
    sync_periodic(g, u);
    return u;
}

/// Cells whose center satisfies a predicate.
template <class P>
CellSet select_cells(const Grid& g, P&& pred) {
    CellSet s(g);
    for (int c = 0; c < g.cell_count(); ++c) s.set(c, pred(g.cell_center(c)));
    return s;
}

} // namespace robinfb
