#pragma once

// Highest-label push-relabel max-flow with the gap heuristic and periodic
// global relabeling. Capacities are doubles; a push either saturates an arc
// (its residual becomes exactly 0) or empties the excess of its tail.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <vector>

#include "robinfb/errors.hpp"

namespace robinfb {

class MaxFlow {
public:
    explicit MaxFlow(int nodes) : n_(nodes), adj_(nodes) {}

    int node_count() const noexcept { return n_; }

    /// Arc u->v with capacity cap_uv, and its reverse with capacity cap_vu.
    void add_edge(int u, int v, double cap_uv, double cap_vu = 0.0) {
        if (u == v) return;
        if (cap_uv < 0.0 || cap_vu < 0.0) throw InvalidProblem("negative arc capacity");
        adj_[u].push_back({v, static_cast<int>(adj_[v].size()), cap_uv, cap_uv});
        adj_[v].push_back({u, static_cast<int>(adj_[u].size()) - 1, cap_vu, cap_vu});
        max_cap_ = std::max({max_cap_, cap_uv, cap_vu});
        total_cap_ += cap_uv + cap_vu;
    }

    double total_capacity() const noexcept { return total_cap_; }

    /// Runs to a maximum flow (excess returned to the source) and returns its value.
    double solve(int s, int t) {
        s_ = s;
        t_ = t;
        label_.assign(n_, 0);
        excess_.assign(n_, 0.0);
        current_.assign(n_, 0);
        buckets_.assign(2 * n_ + 1, {});
        count_.assign(2 * n_ + 1, 0);

        for (auto& a : adj_[s]) {
            if (a.cap > 0.0) {
                const double d = a.cap;
                a.cap = 0.0;
                adj_[a.to][a.rev].cap += d;
                excess_[a.to] += d;
                excess_[s] -= d;
            }
        }
        global_relabel();

        long relabels_since_global = 0;
        while (highest_ >= 0) {
            if (buckets_[highest_].empty()) {
                --highest_;
                continue;
            }
            const int v = buckets_[highest_].back();
            buckets_[highest_].pop_back();
            if (label_[v] != highest_ || excess_[v] <= 0.0) continue;
            relabels_since_global += discharge(v);
            if (relabels_since_global > n_) {
                global_relabel();
                relabels_since_global = 0;
            }
        }

        // Conservation: only the terminals may hold excess.
        for (int v = 0; v < n_; ++v)
            if (v != s_ && v != t_ && std::abs(excess_[v]) > 1e-12 * std::max(1.0, total_cap_))
                throw InvariantViolation("max-flow left excess at an inner node");
        return excess_[t_];
    }

    /// Nodes reachable from the source in the residual graph: the unique
    /// minimal source side among all minimum cuts.
    std::vector<std::uint8_t> source_side() const {
        const double thr = 1e-14 * max_cap_;
        std::vector<std::uint8_t> side(n_, 0);
        std::deque<int> queue{s_};
        side[s_] = 1;
        while (!queue.empty()) {
            const int v = queue.front();
            queue.pop_front();
            for (const auto& a : adj_[v]) {
                if (a.cap > thr && !side[a.to]) {
                    side[a.to] = 1;
                    queue.push_back(a.to);
                }
            }
        }
        return side;
    }

    /// Sum of original capacities of arcs leaving `side`.
    double cut_capacity(const std::vector<std::uint8_t>& side) const {
        double c = 0.0;
        for (int v = 0; v < n_; ++v) {
            if (!side[v]) continue;
            for (const auto& a : adj_[v])
                if (!side[a.to]) c += a.original;
        }
        return c;
    }

private:
    struct Arc {
        int to;
        int rev;
        double cap;
        double original;
    };

    void activate(int v) {
        if (v == s_ || v == t_) return;
        const int l = label_[v];
        buckets_[l].push_back(v);
        highest_ = std::max(highest_, l);
    }

    void set_label(int v, int l) {
        --count_[label_[v]];
        label_[v] = l;
        ++count_[l];
    }

    // Returns the number of relabels performed.
    long discharge(int v) {
        long relabels = 0;
        while (excess_[v] > 0.0) {
            auto& arcs = adj_[v];
            if (current_[v] == static_cast<int>(arcs.size())) {
                const int old = label_[v];
                int lowest = 2 * n_;
                for (const auto& a : arcs)
                    if (a.cap > 0.0) lowest = std::min(lowest, label_[a.to] + 1);
                set_label(v, std::min(lowest, 2 * n_));
                current_[v] = 0;
                ++relabels;
                if (count_[old] == 0 && old < n_) gap(old);
                if (label_[v] >= 2 * n_) break;
                continue;
            }
            Arc& a = arcs[current_[v]];
            if (a.cap > 0.0 && label_[v] == label_[a.to] + 1) {
                const bool saturate = a.cap <= excess_[v];
                const double d = saturate ? a.cap : excess_[v];
                const bool was_idle = excess_[a.to] <= 0.0;
                if (saturate) {
                    a.cap = 0.0;
                    excess_[v] -= d;
                } else {
                    a.cap -= d;
                    excess_[v] = 0.0;
                }
                adj_[a.to][a.rev].cap += d;
                excess_[a.to] += d;
                if (was_idle && excess_[a.to] > 0.0) activate(a.to);
            } else {
                ++current_[v];
            }
        }
        if (excess_[v] > 0.0 && label_[v] < 2 * n_) activate(v);
        return relabels;
    }

    void gap(int k) {
        for (int v = 0; v < n_; ++v) {
            if (v == s_ || label_[v] <= k || label_[v] >= n_) continue;
            set_label(v, n_ + 1);
            current_[v] = 0;
            if (excess_[v] > 0.0) activate(v);
        }
    }

    // Exact residual distances: to the sink where reachable, else n + distance
    // to the source.
    void global_relabel() {
        const int unreached = 2 * n_;
        std::vector<int> dist(n_, unreached);
        auto bfs = [&](int root, int base) {
            std::deque<int> queue{root};
            dist[root] = base;
            while (!queue.empty()) {
                const int w = queue.front();
                queue.pop_front();
                for (const auto& a : adj_[w]) {
                    // a: w -> x; its reverse x -> w has residual adj_[x][a.rev].cap
                    if (dist[a.to] != unreached || a.to == s_ || a.to == t_) continue;
                    if (adj_[a.to][a.rev].cap > 0.0) {
                        dist[a.to] = dist[w] + 1;
                        queue.push_back(a.to);
                    }
                }
            }
        };
        bfs(t_, 0);
        bfs(s_, n_);
        std::fill(count_.begin(), count_.end(), 0);
        for (auto& b : buckets_) b.clear();
        highest_ = -1;
        for (int v = 0; v < n_; ++v) {
            label_[v] = std::min(dist[v], unreached);
            ++count_[label_[v]];
            current_[v] = 0;
        }
        for (int v = 0; v < n_; ++v)
            if (excess_[v] > 0.0 && label_[v] < unreached) activate(v);
    }

    int n_;
    int s_ = 0;
    int t_ = 0;
    std::vector<std::vector<Arc>> adj_;
    std::vector<int> label_;
    std::vector<double> excess_;
    std::vector<int> current_;
    std::vector<std::vector<int>> buckets_;
    std::vector<int> count_;
    int highest_ = -1;
    double max_cap_ = 0.0;
    double total_cap_ = 0.0;
};

} // namespace robinfb
