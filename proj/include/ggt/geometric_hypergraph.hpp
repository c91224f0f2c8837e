#ifndef GGT_GEOMETRIC_HYPERGRAPH_HPP
#define GGT_GEOMETRIC_HYPERGRAPH_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "ggt/config.hpp"
#include "ggt/correspondence.hpp"

namespace ggt {

struct Hyperedge {
    std::array<VertexId, 3> ids{};  // strictly increasing in the first `order` slots
    int order = 0;
    double xi = 0.0;
    VertexId source = -1;  // vertex whose budget paid for this edge

    std::span<const VertexId> vertices() const { return {ids.data(), static_cast<std::size_t>(order)}; }
};

/// Approximate geometric hypergraph over a reduced vertex set.
class Hypergraph {
public:
    Hypergraph() = default;
    Hypergraph(VertexSet vertices, int k) : vertices_(std::move(vertices)), k_(k) {
        incidence_.resize(vertices_.size());
    }

    int order() const { return k_; }
    const VertexSet& vertices() const { return vertices_; }
    const Vertex& vertex(VertexId id) const { return vertices_[id]; }
    std::size_t vertex_count() const { return vertices_.size(); }
    const std::vector<Hyperedge>& hyperedges() const { return edges_; }
    /// Indexes into hyperedges() of every edge containing `v`.
    const std::vector<std::int32_t>& incident(VertexId v) const { return incidence_[static_cast<std::size_t>(v)]; }

    bool contains(std::span<const VertexId> sorted_ids) const { return keys_.contains(key_of(sorted_ids)); }

    /// Adds an edge; ids are sorted here. Returns false for a duplicate.
    /// Throws on conflicting or out-of-range vertices.
    bool add_hyperedge(std::span<const VertexId> ids, double xi, VertexId source = -1) {
        if (ids.empty() || ids.size() > 3) throw std::invalid_argument("hyperedge order must be 1..3");
        Hyperedge e;
        e.order = static_cast<int>(ids.size());
        std::copy(ids.begin(), ids.end(), e.ids.begin());
        std::sort(e.ids.begin(), e.ids.begin() + e.order);
        for (int a = 0; a < e.order; ++a) {
            if (e.ids[a] < 0 || static_cast<std::size_t>(e.ids[a]) >= vertices_.size())
                throw std::out_of_range("hyperedge vertex out of range");
            for (int b = a + 1; b < e.order; ++b) {
                if (e.ids[a] == e.ids[b]) throw std::invalid_argument("hyperedge repeats a vertex");
                if (vertices_[e.ids[a]].conflicts_with(vertices_[e.ids[b]]))
                    throw std::invalid_argument("hyperedge joins conflicting vertices");
            }
        }
        if (!keys_.insert(key_of(e.vertices())).second) return false;
        e.xi = xi;
        e.source = source;
        const auto index = static_cast<std::int32_t>(edges_.size());
        for (VertexId v : e.vertices()) incidence_[static_cast<std::size_t>(v)].push_back(index);
        edges_.push_back(e);
        return true;
    }

private:
    static std::uint64_t key_of(std::span<const VertexId> sorted) {
        std::uint64_t key = 0;
        for (VertexId v : sorted) key = key * 0x200000ULL + static_cast<std::uint64_t>(v) + 1;
        return key;
    }

    VertexSet vertices_;
    int k_ = 1;
    std::vector<Hyperedge> edges_;
    std::vector<std::vector<std::int32_t>> incidence_;
    std::unordered_set<std::uint64_t> keys_;
};

// ---- geometric confidence --------------------------------------------------

/// Order-2 measure: compares the displacement p1->p2 with q1->q2.
inline double pairwise_geometric_confidence(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2, double sigma_psi2) {
    return std::exp(-norm((p2 - p1) - (q2 - q1)) / sigma_psi2);
}

inline double pairwise_geometric_confidence(const Vertex& a, const Vertex& b, double sigma_psi2) {
    return pairwise_geometric_confidence(a.target_center, b.target_center, a.candidate_center,
                                         b.candidate_center, sigma_psi2);
}

/// Interior angles of triangle (a,b,c) at a, b and c respectively.
inline std::array<double, 3> interior_angles(Vec2 a, Vec2 b, Vec2 c) {
    auto angle_at = [](Vec2 apex, Vec2 u, Vec2 v) {
        const Vec2 du = u - apex;
        const Vec2 dv = v - apex;
        return std::atan2(std::abs(du.x * dv.y - du.y * dv.x), du.x * dv.x + du.y * dv.y);
    };
    return {angle_at(a, b, c), angle_at(b, c, a), angle_at(c, a, b)};
}

inline bool is_degenerate_triangle(Vec2 a, Vec2 b, Vec2 c, double min_angle = 1e-6) {
    if (a == b || b == c || a == c) return true;
    const auto angles = interior_angles(a, b, c);
    return *std::min_element(angles.begin(), angles.end()) < min_angle;
}

/// Order-3 measure: compares the sines of corresponding interior angles.
/// Invariant to similarity transforms of either triangle.
inline double triangle_geometric_confidence(std::array<Vec2, 3> p, std::array<Vec2, 3> q, double sigma_psi2) {
    if (is_degenerate_triangle(p[0], p[1], p[2]) || is_degenerate_triangle(q[0], q[1], q[2]))
        throw std::domain_error("triangle_geometric_confidence: degenerate triangle");
    const auto ap = interior_angles(p[0], p[1], p[2]);
    const auto aq = interior_angles(q[0], q[1], q[2]);
    double s = 0.0;
    for (int i = 0; i < 3; ++i) s += std::abs(std::sin(ap[i]) - std::sin(aq[i]));
    return std::exp(-s / sigma_psi2);
}

inline double triangle_geometric_confidence(const Vertex& a, const Vertex& b, const Vertex& c, double sigma_psi2) {
    return triangle_geometric_confidence({a.target_center, b.target_center, c.target_center},
                                         {a.candidate_center, b.candidate_center, c.candidate_center}, sigma_psi2);
}

// ---- confidence-aware hyperedge sampling -----------------------------------

struct SamplingParams {
    int k = 3;
    int n_nu = 100;
    double sigma_psi2 = 1.0;
    int rejection_factor = 20;
    double degenerate_angle = 1e-6;

    static SamplingParams from(const TrackerConfig& c) {
        return {c.k, c.n_nu, c.sigma_psi2, c.rejection_factor, c.degenerate_angle};
    }
};

/// Hyperedge budget of a vertex: round-half-up of gamma_hat * n_nu.
inline int hyperedge_budget(double gamma_hat, int n_nu) {
    return static_cast<int>(std::floor(gamma_hat * n_nu + 0.5));
}

template <class Rng>
Hypergraph sample_hyperedges(VertexSet vertices, const SamplingParams& params, Rng& rng) {
    if (params.k < 1 || params.k > 3) throw std::invalid_argument("sample_hyperedges: k must be 1..3");
    Hypergraph graph(std::move(vertices), params.k);
    const auto n = static_cast<VertexId>(graph.vertex_count());
    if (params.k == 1 || n < params.k) return graph;

    const int companions = params.k - 1;
    std::uniform_int_distribution<VertexId> pick(0, n - 2);
    for (VertexId v = 0; v < n; ++v) {
        const int budget = hyperedge_budget(graph.vertex(v).gamma_hat, params.n_nu);
        const long max_draws = static_cast<long>(params.rejection_factor) * budget;
        int made = 0;
        for (long draw = 0; draw < max_draws && made < budget; ++draw) {
            std::array<VertexId, 3> ids{v, -1, -1};
            bool ok = true;
            for (int c = 1; c <= companions && ok; ++c) {
                VertexId u = pick(rng);
                if (u >= v) ++u;
                for (int prev = 0; prev < c && ok; ++prev)
                    ok = ids[prev] != u && !graph.vertex(ids[prev]).conflicts_with(graph.vertex(u));
                ids[c] = u;
            }
            if (!ok) continue;
            std::array<VertexId, 3> sorted = ids;
            std::sort(sorted.begin(), sorted.begin() + params.k);
            const std::span<const VertexId> key(sorted.data(), static_cast<std::size_t>(params.k));
            if (graph.contains(key)) continue;

            double xi = 0.0;
            if (params.k == 2) {
                xi = pairwise_geometric_confidence(graph.vertex(sorted[0]), graph.vertex(sorted[1]), params.sigma_psi2);
            } else {
                const Vertex& a = graph.vertex(sorted[0]);
                const Vertex& b = graph.vertex(sorted[1]);
                const Vertex& c = graph.vertex(sorted[2]);
                if (is_degenerate_triangle(a.target_center, b.target_center, c.target_center, params.degenerate_angle) ||
                    is_degenerate_triangle(a.candidate_center, b.candidate_center, c.candidate_center,
                                           params.degenerate_angle))
                    continue;
                xi = triangle_geometric_confidence(a, b, c, params.sigma_psi2);
            }
            graph.add_hyperedge(key, xi, v);
            ++made;
        }
    }
    return graph;
}

/// Omega(D) = omega1 * sum of gamma over D + omega2 * sum of xi over edges inside D.
inline double mode_confidence(std::span<const VertexId> mode, const Hypergraph& graph, double omega1, double omega2) {
    std::vector<char> inside(graph.vertex_count(), 0);
    for (VertexId v : mode) inside[static_cast<std::size_t>(v)] = 1;
    double association = 0.0;
    double geometric = 0.0;
    for (VertexId v : mode) {
        association += graph.vertex(v).gamma;
        for (std::int32_t ei : graph.incident(v)) {
            const Hyperedge& e = graph.hyperedges()[static_cast<std::size_t>(ei)];
            if (e.ids[0] != v) continue;  // count each edge once, from its smallest vertex
            bool interior = true;
            for (VertexId u : e.vertices()) interior = interior && inside[static_cast<std::size_t>(u)];
            if (interior) geometric += e.xi;
        }
    }
    return omega1 * association + omega2 * geometric;
}

inline nlohmann::json graph_to_json(const Hypergraph& graph) {
    nlohmann::json vertices = nlohmann::json::array();
    for (const auto& v : graph.vertices().vertices)
        vertices.push_back({{"id", v.id},
                            {"p", v.target_part_id},
                            {"q", v.candidate_part_id},
                            {"gamma", v.gamma},
                            {"gamma_hat", v.gamma_hat}});
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : graph.hyperedges()) {
        nlohmann::json ids = nlohmann::json::array();
        for (VertexId v : e.vertices()) ids.push_back(v);
        edges.push_back({{"v", ids}, {"xi", e.xi}});
    }
    return {{"k", graph.order()}, {"vertices", vertices}, {"hyperedges", edges}};
}

}  // namespace ggt

#endif  // GGT_GEOMETRIC_HYPERGRAPH_HPP
