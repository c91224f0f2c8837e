#ifndef GGT_MODEL_UPDATE_HPP
#define GGT_MODEL_UPDATE_HPP

#include <algorithm>
#include <map>
#include <set>
#include <span>
#include <vector>

#include "ggt/config.hpp"
#include "ggt/mode_parsing.hpp"
#include "ggt/part_model.hpp"

namespace ggt {

inline double mean_diameter(std::span<const Part> parts) {
    if (parts.empty()) return 0.0;
    double s = 0.0;
    for (const auto& p : parts) s += p.diameter();
    return s / static_cast<double>(parts.size());
}

/// Exponential moving average of two histograms, renormalized to unit mass.
inline std::vector<double> blend_features(std::span<const double> old_feat, std::span<const double> new_feat,
                                          double alpha) {
    std::vector<double> out(old_feat.size(), 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = alpha * old_feat[i] + (1.0 - alpha) * new_feat[i];
        total += out[i];
    }
    if (total > 0.0)
        for (double& v : out) v /= total;
    return out;
}

struct UpdateInputs {
    std::span<const ReliablePart> reliable;
    std::set<PartId> mode_candidates;  // candidate ids used by any accepted mode
    std::span<const Part> candidates;  // current foreground candidate parts
    Box new_box;
    std::int64_t frame_index = 0;
};

/// Refreshes matched parts, ages and expires unmatched ones, and admits new
/// candidate parts inside the box that keep P spatially sparse.
inline std::vector<TargetPart> update_target_set(const std::vector<TargetPart>& parts, const UpdateInputs& in,
                                                 const TrackerConfig& config) {
    std::map<PartId, const Part*> candidate_by_id;
    for (const auto& q : in.candidates) candidate_by_id[q.id] = &q;
    std::map<PartId, const ReliablePart*> match;
    for (const auto& r : in.reliable) match[r.target_part_id] = &r;

    std::vector<TargetPart> out;
    PartId next_id = 0;
    for (const auto& tp : parts) {
        next_id = std::max(next_id, tp.part.id + 1);
        TargetPart upd = tp;
        auto it = match.find(tp.part.id);
        const Part* q = nullptr;
        if (it != match.end()) {
            auto c = candidate_by_id.find(it->second->matched_candidate_id);
            if (c != candidate_by_id.end()) q = c->second;
        }
        if (q) {
            upd.last_center = q->center;
            upd.part.center = q->center;
            upd.part.area = q->area;
            upd.part.fg_prob = q->fg_prob;
            upd.part.feature = blend_features(tp.part.feature, q->feature, config.feature_ema);
            upd.last_seen_frame = in.frame_index;
            upd.miss_count = 0;
        } else {
            upd.miss_count += 1;
            if (upd.miss_count >= config.miss_limit) continue;
        }
        out.push_back(std::move(upd));
    }

    const double radius = 2.0 * mean_diameter(in.candidates);
    std::set<PartId> matched_candidates;
    for (const auto& r : in.reliable) matched_candidates.insert(r.matched_candidate_id);
    std::vector<const Part*> fresh;
    for (const auto& q : in.candidates)
        if (in.new_box.contains(q.center) && !in.mode_candidates.contains(q.id) && !matched_candidates.contains(q.id))
            fresh.push_back(&q);
    std::sort(fresh.begin(), fresh.end(), [](const Part* a, const Part* b) { return a->id < b->id; });
    for (const Part* q : fresh) {
        const bool sparse = std::all_of(out.begin(), out.end(), [&](const TargetPart& tp) {
            return distance(tp.last_center, q->center) > radius;
        });
        if (!sparse) continue;
        TargetPart tp;
        tp.part = *q;
        tp.part.id = next_id++;
        tp.last_center = q->center;
        tp.last_seen_frame = in.frame_index;
        tp.miss_count = 0;
        out.push_back(std::move(tp));
    }
    return out;
}

}  // namespace ggt

#endif  // GGT_MODEL_UPDATE_HPP
