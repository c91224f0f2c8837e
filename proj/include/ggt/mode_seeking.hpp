#ifndef GGT_MODE_SEEKING_HPP
#define GGT_MODE_SEEKING_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

#include "ggt/config.hpp"
#include "ggt/geometric_hypergraph.hpp"

namespace ggt {

struct ModeSeekingParams {
    double mu = 0.25;
    double omega1 = 10.0;
    double omega2 = 15.0;
    double tol = 1e-8;
    int max_updates_per_vertex = 200;
    double support_threshold = 1e-6;

    static ModeSeekingParams from(const TrackerConfig& c) {
        return {c.box_bound(), c.omega1, c.omega2, c.convergence_tol, c.max_updates_per_vertex, c.support_threshold};
    }
};

/// A structural correspondence mode: the support of a converged probability vector.
struct Mode {
    std::vector<VertexId> vertex_ids;  // sorted
    double omega = 0.0;
    VertexId start_vertex = -1;
    double objective = 0.0;
    int iterations = 0;
};

/// omega1 * sum gamma_v x_v + omega2 * sum xi_e prod_{v in e} x_v
inline double objective(std::span<const double> x, const Hypergraph& graph, double omega1, double omega2) {
    double linear = 0.0;
    for (std::size_t v = 0; v < x.size(); ++v) linear += graph.vertex(static_cast<VertexId>(v)).gamma * x[v];
    double higher = 0.0;
    for (const auto& e : graph.hyperedges()) {
        double prod = e.xi;
        for (VertexId v : e.vertices()) prod *= x[static_cast<std::size_t>(v)];
        higher += prod;
    }
    return omega1 * linear + omega2 * higher;
}

/// Per-vertex view of the hyperedges: for every edge containing v, the other
/// endpoints and the weighted confidence omega2 * xi. Order-2 edges leave `b`
/// at -1 (an implicit factor of 1).
class IncidenceTable {
public:
    struct Entry {
        VertexId a = -1;
        VertexId b = -1;
        double weight = 0.0;
    };

    IncidenceTable(const Hypergraph& graph, double omega2) : rows_(graph.vertex_count()) {
        for (const auto& e : graph.hyperedges()) {
            if (e.order < 2) continue;
            const auto vs = e.vertices();
            const double w = omega2 * e.xi;
            for (std::size_t s = 0; s < vs.size(); ++s) {
                Entry entry{-1, -1, w};
                for (std::size_t t = 0; t < vs.size(); ++t) {
                    if (t == s) continue;
                    (entry.a < 0 ? entry.a : entry.b) = vs[t];
                }
                rows_[static_cast<std::size_t>(vs[s])].push_back(entry);
            }
        }
    }

    const std::vector<Entry>& row(VertexId v) const { return rows_[static_cast<std::size_t>(v)]; }

private:
    std::vector<std::vector<Entry>> rows_;
};

/// Coordinate-pair ascent state over a fixed hypergraph. Keeps the gradient
/// in sync with x so each pair update touches only the edges at i and j.
class ModeAscent {
public:
    struct Step {
        double t = 0.0;     // new value of x_i
        double gain = 0.0;  // objective increase
    };

    ModeAscent(const Hypergraph& graph, const IncidenceTable& table, std::vector<double> x, double mu, double omega1,
               double omega2)
        : graph_(&graph), table_(&table), x_(std::move(x)), mu_(mu), omega1_(omega1), omega2_(omega2) {
        if (x_.size() != graph.vertex_count()) throw std::invalid_argument("ModeAscent: x has wrong size");
        recompute_gradient();
    }

    const std::vector<double>& x() const { return x_; }
    const std::vector<double>& gradient() const { return grad_; }
    double objective() const { return ggt::objective(x_, *graph_, omega1_, omega2_); }

    void recompute_gradient() {
        grad_.assign(x_.size(), 0.0);
        for (std::size_t v = 0; v < x_.size(); ++v) {
            double g = omega1_ * graph_->vertex(static_cast<VertexId>(v)).gamma;
            for (const auto& e : table_->row(static_cast<VertexId>(v))) g += e.weight * value(e.a) * value(e.b);
            grad_[v] = g;
        }
    }

    /// Exact maximizer of the objective along x_i + x_j = const.
    Step best_step(VertexId i, VertexId j) const {
        const double xi = x_[idx(i)];
        const double xj = x_[idx(j)];
        const double c = xi + xj;
        // Edges containing both i and j contribute shared * x_i * x_j.
        const VertexId probe = table_->row(i).size() <= table_->row(j).size() ? i : j;
        const VertexId other = probe == i ? j : i;
        double shared = 0.0;
        for (const auto& e : table_->row(probe)) {
            if (e.a == other) shared += e.weight * value(e.b);
            else if (e.b == other) shared += e.weight * value(e.a);
        }
        const double a = grad_[idx(i)] - shared * xj;
        const double b = grad_[idx(j)] - shared * xi;
        auto restricted = [&](double t) { return a * t + b * (c - t) + shared * t * (c - t); };

        const double lo = std::max(0.0, c - mu_);
        const double hi = std::min(c, mu_);
        const double base = restricted(xi);
        Step best{xi, 0.0};
        auto consider = [&](double t) {
            t = std::clamp(t, lo, hi);
            const double gain = restricted(t) - base;
            if (gain > best.gain) best = {t, gain};
        };
        consider(lo);
        consider(hi);
        if (shared > 0.0) consider((a - b + shared * c) / (2.0 * shared));
        return best;
    }

    void apply(VertexId i, VertexId j, double t) {
        const double xi_old = x_[idx(i)];
        const double xj_old = x_[idx(j)];
        const double c = xi_old + xj_old;
        const double xi_new = t;
        const double xj_new = std::max(0.0, c - t);
        const double di = xi_new - xi_old;
        const double dj = xj_new - xj_old;
        // Edges through i only, and edges through both (visited once, from i).
        for (const auto& e : table_->row(i)) {
            if (e.a == j || e.b == j) {
                const VertexId u = e.a == j ? e.b : e.a;
                const double xu = value(u);
                grad_[idx(i)] += e.weight * dj * xu;
                grad_[idx(j)] += e.weight * di * xu;
                if (u >= 0) grad_[idx(u)] += e.weight * (xi_new * xj_new - xi_old * xj_old);
            } else {
                grad_[idx(e.a)] += e.weight * di * value(e.b);
                if (e.b >= 0) grad_[idx(e.b)] += e.weight * di * value(e.a);
            }
        }
        for (const auto& e : table_->row(j)) {
            if (e.a == i || e.b == i) continue;
            grad_[idx(e.a)] += e.weight * dj * value(e.b);
            if (e.b >= 0) grad_[idx(e.b)] += e.weight * dj * value(e.a);
        }
        x_[idx(i)] = xi_new;
        x_[idx(j)] = xj_new;
    }

private:
    static std::size_t idx(VertexId v) { return static_cast<std::size_t>(v); }
    double value(VertexId v) const { return v < 0 ? 1.0 : x_[idx(v)]; }

    const Hypergraph* graph_;
    const IncidenceTable* table_;
    std::vector<double> x_;
    std::vector<double> grad_;
    double mu_;
    double omega1_;
    double omega2_;
};

/// One pair update from scratch; x' maximizes the objective on the segment
/// x_i + x_j = x_i + x_j (old), 0 <= x <= mu.
inline std::vector<double> pairwise_update(std::span<const double> x, VertexId i, VertexId j, const Hypergraph& graph,
                                           double mu, double omega1, double omega2) {
    if (i == j) throw std::invalid_argument("pairwise_update: i == j");
    const IncidenceTable table(graph, omega2);
    ModeAscent ascent(graph, table, std::vector<double>(x.begin(), x.end()), mu, omega1, omega2);
    const auto step = ascent.best_step(i, j);
    ascent.apply(i, j, step.t);
    return ascent.x();
}

/// Size of the largest set of mutually non-conflicting vertices (a maximum
/// bipartite matching between target and candidate parts).
inline std::size_t max_conflict_free_vertices(const VertexSet& vs) {
    std::map<PartId, std::size_t> tindex;
    std::map<PartId, std::size_t> cindex;
    for (const auto& v : vs.vertices) {
        tindex.try_emplace(v.target_part_id, tindex.size());
        cindex.try_emplace(v.candidate_part_id, cindex.size());
    }
    std::vector<std::vector<std::size_t>> adj(tindex.size());
    for (const auto& v : vs.vertices) adj[tindex[v.target_part_id]].push_back(cindex[v.candidate_part_id]);
    constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> match(cindex.size(), none);
    std::vector<char> seen;
    auto augment = [&](auto&& self, std::size_t t) -> bool {
        for (std::size_t c : adj[t]) {
            if (seen[c]) continue;
            seen[c] = 1;
            if (match[c] == none || self(self, match[c])) {
                match[c] = t;
                return true;
            }
        }
        return false;
    };
    std::size_t size = 0;
    for (std::size_t t = 0; t < adj.size(); ++t) {
        seen.assign(cindex.size(), 0);
        if (augment(augment, t)) ++size;
    }
    return size;
}

inline int min_mode_size(double mu) { return static_cast<int>(std::ceil(1.0 / mu - 1e-9)); }

namespace detail {

inline std::optional<std::vector<double>> initial_point(const Hypergraph& graph, VertexId start, double mu) {
    const std::size_t n = graph.vertex_count();
    std::vector<double> x(n, 0.0);
    x[static_cast<std::size_t>(start)] = mu;
    const double rest = 1.0 - mu;
    if (rest <= 0.0) return x;

    std::vector<char> is_neighbor(n, 0);
    for (std::int32_t ei : graph.incident(start))
        for (VertexId u : graph.hyperedges()[static_cast<std::size_t>(ei)].vertices())
            if (u != start) is_neighbor[static_cast<std::size_t>(u)] = 1;
    std::vector<std::size_t> pool;
    for (std::size_t v = 0; v < n; ++v)
        if (is_neighbor[v]) pool.push_back(v);
    if (static_cast<double>(pool.size()) * mu < rest - 1e-12) {
        pool.clear();
        for (std::size_t v = 0; v < n; ++v)
            if (static_cast<VertexId>(v) != start) pool.push_back(v);
        if (static_cast<double>(pool.size()) * mu < rest - 1e-12) return std::nullopt;
    }
    const double share = rest / static_cast<double>(pool.size());
    for (std::size_t v : pool) x[v] = share;
    return x;
}

}  // namespace detail

/// Called with x and the objective before the first update and after each one.
using AscentObserver = std::function<void(std::span<const double>, double)>;

namespace detail {

inline std::optional<Mode> seek_mode_from(const Hypergraph& graph, const IncidenceTable& table, VertexId start,
                                          const ModeSeekingParams& params, const AscentObserver& observer) {
    const std::size_t n = graph.vertex_count();
    auto x0 = initial_point(graph, start, params.mu);
    if (!x0) return std::nullopt;

    ModeAscent ascent(graph, table, std::move(*x0), params.mu, params.omega1, params.omega2);
    if (observer) observer(ascent.x(), ascent.objective());
    const long budget = static_cast<long>(params.max_updates_per_vertex) * static_cast<long>(n);
    constexpr double slack = 1e-15;
    int iterations = 0;
    for (long it = 0; it < budget; ++it) {
        const auto& x = ascent.x();
        const auto& g = ascent.gradient();
        VertexId up = -1;
        for (std::size_t v = 0; v < n; ++v)
            if (x[v] < params.mu - slack && (up < 0 || g[v] > g[static_cast<std::size_t>(up)]))
                up = static_cast<VertexId>(v);
        if (up < 0) break;
        VertexId down = -1;
        for (std::size_t v = 0; v < n; ++v)
            if (x[v] > 0.0 && static_cast<VertexId>(v) != up &&
                (down < 0 || g[v] < g[static_cast<std::size_t>(down)]))
                down = static_cast<VertexId>(v);
        if (down < 0) break;
        if (g[static_cast<std::size_t>(up)] - g[static_cast<std::size_t>(down)] <= 0.0) break;

        const auto step = ascent.best_step(up, down);
        if (step.gain <= 0.0) break;
        const double xj_before = x[static_cast<std::size_t>(down)];
        const double xi_before = x[static_cast<std::size_t>(up)];
        ascent.apply(up, down, step.t);
        ++iterations;
        if (observer) observer(ascent.x(), ascent.objective());
        // A step that empties the donor or fills the receiver changes the active
        // set, so a tiny gain there is not a convergence signal.
        const bool hit_bound = ascent.x()[static_cast<std::size_t>(down)] == 0.0 ||
                               ascent.x()[static_cast<std::size_t>(up)] >= params.mu - slack;
        const bool moved = ascent.x()[static_cast<std::size_t>(up)] != xi_before ||
                           ascent.x()[static_cast<std::size_t>(down)] != xj_before;
        if (!moved) break;
        if (step.gain < params.tol && !hit_bound) break;
        if (iterations % 1024 == 0) ascent.recompute_gradient();
    }

    Mode mode;
    mode.start_vertex = start;
    mode.iterations = iterations;
    for (std::size_t v = 0; v < n; ++v)
        if (ascent.x()[v] > params.support_threshold) mode.vertex_ids.push_back(static_cast<VertexId>(v));
    mode.omega = mode_confidence(mode.vertex_ids, graph, params.omega1, params.omega2);
    mode.objective = ascent.objective();
    return mode;
}

}  // namespace detail

/// Pairwise coordinate ascent from one starting vertex. Each update moves mass
/// from the lowest-gradient supported vertex to the highest-gradient vertex
/// below the cap. Returns nullopt when no feasible mode exists.
inline std::optional<Mode> seek_mode(const Hypergraph& graph, VertexId start, const ModeSeekingParams& params,
                                     const AscentObserver& observer = {}) {
    const std::size_t n = graph.vertex_count();
    if (n == 0 || start < 0 || static_cast<std::size_t>(start) >= n) return std::nullopt;
    if (max_conflict_free_vertices(graph.vertices()) < static_cast<std::size_t>(graph.order() + 1)) return std::nullopt;
    const IncidenceTable table(graph, params.omega2);
    return detail::seek_mode_from(graph, table, start, params, observer);
}

/// Runs seek_mode from every vertex, drops repeated supports (keeping the
/// earliest start) and sorts by omega descending, then start vertex.
inline std::vector<Mode> seek_all_modes(const Hypergraph& graph, const ModeSeekingParams& params) {
    std::vector<Mode> modes;
    if (graph.vertex_count() == 0) return modes;
    if (max_conflict_free_vertices(graph.vertices()) < static_cast<std::size_t>(graph.order() + 1)) return modes;
    const IncidenceTable table(graph, params.omega2);
    std::map<std::vector<VertexId>, std::size_t> seen;
    for (std::size_t v = 0; v < graph.vertex_count(); ++v) {
        auto mode = detail::seek_mode_from(graph, table, static_cast<VertexId>(v), params, {});
        if (!mode || mode->vertex_ids.empty()) continue;
        if (seen.try_emplace(mode->vertex_ids, modes.size()).second) modes.push_back(std::move(*mode));
    }
    std::stable_sort(modes.begin(), modes.end(), [](const Mode& a, const Mode& b) {
        if (a.omega != b.omega) return a.omega > b.omega;
        return a.start_vertex < b.start_vertex;
    });
    return modes;
}

struct OracleResult {
    std::vector<VertexId> support;
    double objective = -std::numeric_limits<double>::infinity();
};

/// Exhaustive search over supports carrying uniform mass mu (sizes m with
/// m * mu == 1). Limited to 14 vertices.
inline OracleResult brute_force_oracle(const Hypergraph& graph, int min_size, int max_size, double mu, double omega1,
                                       double omega2) {
    const int n = static_cast<int>(graph.vertex_count());
    if (n > 14) throw std::invalid_argument("brute_force_oracle: at most 14 vertices");
    OracleResult best;
    std::vector<double> x(static_cast<std::size_t>(n), 0.0);
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        const int m = __builtin_popcount(mask);
        if (m < min_size || m > max_size || std::abs(m * mu - 1.0) > 1e-9) continue;
        for (int v = 0; v < n; ++v) x[static_cast<std::size_t>(v)] = (mask >> v) & 1u ? mu : 0.0;
        const double f = objective(x, graph, omega1, omega2);
        if (f > best.objective) {
            best.objective = f;
            best.support.clear();
            for (int v = 0; v < n; ++v)
                if ((mask >> v) & 1u) best.support.push_back(v);
        }
    }
    return best;
}

inline nlohmann::json modes_to_json(std::span<const Mode> modes) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& m : modes)
        out.push_back({{"start", m.start_vertex},
                       {"vertices", m.vertex_ids},
                       {"omega", m.omega},
                       {"objective", m.objective},
                       {"iterations", m.iterations}});
    return out;
}

}  // namespace ggt

#endif  // GGT_MODE_SEEKING_HPP
