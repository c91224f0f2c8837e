#ifndef GGT_MODE_PARSING_HPP
#define GGT_MODE_PARSING_HPP

#include <algorithm>
#include <set>
#include <vector>

#include "ggt/mode_seeking.hpp"

namespace ggt {

/// A target part that survived conflict removal, with the candidate it maps to
/// and the confidence of its mode as voting weight.
struct ReliablePart {
    PartId target_part_id = 0;
    PartId matched_candidate_id = 0;
    double weight = 0.0;
    Vec2 target_center;     // previous-frame position of the target part
    Vec2 candidate_center;  // current-frame position of the matched candidate
};

struct ParsedModes {
    std::vector<Mode> modes;  // pairwise vertex-disjoint, in acceptance order
    std::vector<ReliablePart> reliable;
};

/// Greedy conflict removal over modes in descending omega. Each vertex belongs
/// to the highest-omega mode containing it; lower modes lose it. A trimmed mode
/// left with fewer than two vertices is dropped and its vertices go unused.
inline ParsedModes parse_modes(std::vector<Mode> modes, const Hypergraph& graph, double omega1, double omega2) {
    std::stable_sort(modes.begin(), modes.end(), [](const Mode& a, const Mode& b) {
        if (a.omega != b.omega) return a.omega > b.omega;
        return a.start_vertex < b.start_vertex;
    });

    ParsedModes out;
    std::set<VertexId> claimed;
    for (auto& mode : modes) {
        if (mode.vertex_ids.empty()) continue;
        std::vector<VertexId> rest;
        for (VertexId v : mode.vertex_ids)
            if (claimed.insert(v).second) rest.push_back(v);
        if (rest.size() == mode.vertex_ids.size()) {
            out.modes.push_back(std::move(mode));
        } else if (rest.size() >= 2) {
            mode.vertex_ids = std::move(rest);
            mode.omega = mode_confidence(mode.vertex_ids, graph, omega1, omega2);
            out.modes.push_back(std::move(mode));
        }
    }

    // Within a mode the strongest correspondence of a part wins; across modes
    // the earlier (stronger) mode wins.
    std::set<PartId> used_targets;
    std::set<PartId> used_candidates;
    for (const auto& mode : out.modes) {
        std::vector<VertexId> order = mode.vertex_ids;
        std::stable_sort(order.begin(), order.end(),
                         [&](VertexId a, VertexId b) { return graph.vertex(a).gamma > graph.vertex(b).gamma; });
        for (VertexId id : order) {
            const Vertex& v = graph.vertex(id);
            if (used_targets.contains(v.target_part_id) || used_candidates.contains(v.candidate_part_id)) continue;
            used_targets.insert(v.target_part_id);
            used_candidates.insert(v.candidate_part_id);
            out.reliable.push_back({v.target_part_id, v.candidate_part_id, mode.omega, v.target_center,
                                    v.candidate_center});
        }
    }
    return out;
}

}  // namespace ggt

#endif  // GGT_MODE_PARSING_HPP
