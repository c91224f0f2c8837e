#ifndef GGT_CORRESPONDENCE_HPP
#define GGT_CORRESPONDENCE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "ggt/part_model.hpp"

namespace ggt {

using VertexId = std::int32_t;

/// Correspondence hypothesis p~q between a target part and a candidate part.
struct Vertex {
    VertexId id = 0;
    PartId target_part_id = 0;
    PartId candidate_part_id = 0;
    Vec2 target_center;
    Vec2 candidate_center;
    double gamma = 0.0;      // association confidence
    double gamma_hat = 0.0;  // gamma / max gamma over the set

    bool conflicts_with(const Vertex& o) const {
        return target_part_id == o.target_part_id || candidate_part_id == o.candidate_part_id;
    }
};

/// Vertices indexed by position (`vertices[i].id == i`).
struct VertexSet {
    std::vector<Vertex> vertices;
    std::map<PartId, std::vector<VertexId>> by_target;
    std::map<PartId, std::vector<VertexId>> by_candidate;

    std::size_t size() const { return vertices.size(); }
    bool empty() const { return vertices.empty(); }
    const Vertex& operator[](VertexId id) const { return vertices[static_cast<std::size_t>(id)]; }

    /// Renumbers ids, recomputes gamma_hat and rebuilds both indexes.
    void finalize() {
        by_target.clear();
        by_candidate.clear();
        double max_gamma = 0.0;
        for (const auto& v : vertices) max_gamma = std::max(max_gamma, v.gamma);
        for (std::size_t i = 0; i < vertices.size(); ++i) {
            auto& v = vertices[i];
            v.id = static_cast<VertexId>(i);
            v.gamma_hat = max_gamma > 0.0 ? v.gamma / max_gamma : 0.0;
            by_target[v.target_part_id].push_back(v.id);
            by_candidate[v.candidate_part_id].push_back(v.id);
        }
    }
};

/// Half chi-squared distance between two histograms of equal length.
inline double chi2_distance(std::span<const double> h1, std::span<const double> h2) {
    if (h1.size() != h2.size()) throw std::invalid_argument("chi2_distance: histogram length mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < h1.size(); ++i) {
        const double diff = h1[i] - h2[i];
        d += diff * diff / (h1[i] + h2[i] + 1e-12);
    }
    return 0.5 * d;
}

inline double association_confidence(double chi2, double sigma_nu2) { return std::exp(-chi2 / sigma_nu2); }

inline double association_confidence(const Part& p, const Part& q, double sigma_nu2) {
    return association_confidence(chi2_distance(p.feature, q.feature), sigma_nu2);
}

/// Gating radius 3*sqrt(W*H/rho).
inline double distance_threshold(const SearchArea& search, std::size_t rho) {
    return 3.0 * std::sqrt(search.area() / static_cast<double>(std::max<std::size_t>(rho, 1)));
}

struct PartPair {
    std::size_t target_index = 0;     // into the target span
    std::size_t candidate_index = 0;  // into the candidate span
    double distance = 0.0;
    double gamma = 0.0;
};

/// All (p,q) with center distance <= tau_d.
inline std::vector<PartPair> distance_gate(std::span<const Part> targets, std::span<const Part> candidates,
                                           const SearchArea& search, std::size_t rho) {
    std::vector<PartPair> pairs;
    if (rho == 0) return pairs;
    const double tau = distance_threshold(search, rho);
    for (std::size_t i = 0; i < targets.size(); ++i)
        for (std::size_t j = 0; j < candidates.size(); ++j) {
            const double d = distance(targets[i].center, candidates[j].center);
            if (d <= tau) pairs.push_back({i, j, d, 0.0});
        }
    return pairs;
}

inline void score_pairs(std::span<PartPair> pairs, std::span<const Part> targets,
                        std::span<const Part> candidates, double sigma_nu2) {
    for (auto& pr : pairs)
        pr.gamma = association_confidence(targets[pr.target_index], candidates[pr.candidate_index], sigma_nu2);
}

/// Keeps, per target part, the `varsigma` highest-gamma pairs with gamma >= eps_a.
/// Ties prefer the smaller candidate id. Vertices come out grouped by target
/// part id, best first within a group.
inline VertexSet reduce_vertices(std::span<const PartPair> pairs, std::span<const Part> targets,
                                 std::span<const Part> candidates, double eps_a, int varsigma) {
    std::map<PartId, std::vector<const PartPair*>> grouped;
    for (const auto& pr : pairs)
        if (pr.gamma >= eps_a) grouped[targets[pr.target_index].id].push_back(&pr);

    VertexSet out;
    for (auto& [target_id, group] : grouped) {
        std::sort(group.begin(), group.end(), [&](const PartPair* a, const PartPair* b) {
            if (a->gamma != b->gamma) return a->gamma > b->gamma;
            return candidates[a->candidate_index].id < candidates[b->candidate_index].id;
        });
        // Duplicate (p,q) pairs can only arise from duplicated input; keep the first.
        std::vector<PartId> taken;
        for (const PartPair* pr : group) {
            if (static_cast<int>(taken.size()) >= varsigma) break;
            const Part& p = targets[pr->target_index];
            const Part& q = candidates[pr->candidate_index];
            if (std::find(taken.begin(), taken.end(), q.id) != taken.end()) continue;
            taken.push_back(q.id);
            Vertex v;
            v.target_part_id = p.id;
            v.candidate_part_id = q.id;
            v.target_center = p.center;
            v.candidate_center = q.center;
            v.gamma = pr->gamma;
            out.vertices.push_back(v);
        }
    }
    out.finalize();
    return out;
}

}  // namespace ggt

#endif  // GGT_CORRESPONDENCE_HPP
