#ifndef GGT_TRACKER_HPP
#define GGT_TRACKER_HPP

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ggt/config.hpp"
#include "ggt/correspondence.hpp"
#include "ggt/geometric_hypergraph.hpp"
#include "ggt/mode_parsing.hpp"
#include "ggt/mode_seeking.hpp"
#include "ggt/model_update.hpp"
#include "ggt/part_model.hpp"
#include "ggt/state_estimation.hpp"

namespace ggt {

struct FrameResult {
    std::int64_t frame = 0;
    Box box;
    double score = 0.0;
    std::size_t n_reliable = 0;
    bool lost = false;
};

/// Optional per-frame debug output; either callback may be empty.
struct DebugSink {
    std::function<void(std::int64_t, const Hypergraph&)> on_graph;
    std::function<void(std::int64_t, std::span<const Mode>)> on_modes;
};

class Tracker {
public:
    Tracker(TrackerConfig config, Canvas canvas) : config_(std::move(config)), canvas_(canvas), rng_(config_.rng_seed) {
        config_.validate();
    }

    /// Initializes P from the parts whose centers lie in the initial box.
    FrameResult start(const Frame& frame, const Box& init_box) {
        box_ = init_box;
        parts_.clear();
        for (const auto& p : frame.parts) {
            if (!init_box.contains(p.center)) continue;
            TargetPart tp;
            tp.part = p;
            tp.last_center = p.center;
            tp.last_seen_frame = frame.index;
            parts_.push_back(std::move(tp));
        }
        return {frame.index, box_, 0.0, 0, false};
    }

    FrameResult step(const Frame& frame, const DebugSink* debug = nullptr) {
        const SearchArea search = search_area_of(box_, canvas_, config_.search_scale);
        std::vector<Part> candidates;
        std::size_t rho = 0;
        for (const auto& p : frame.parts) {
            if (!search.contains(p.center)) continue;
            ++rho;
            if (p.foreground() >= config_.fg_threshold) candidates.push_back(p);
        }
        FrameResult lost{frame.index, box_, 0.0, 0, true};
        if (rho == 0 || candidates.empty() || parts_.empty()) return lost;

        std::vector<Part> targets;
        targets.reserve(parts_.size());
        for (const auto& tp : parts_) targets.push_back(tp.part);

        auto pairs = distance_gate(targets, candidates, search, rho);
        score_pairs(pairs, targets, candidates, config_.sigma_nu2);
        VertexSet vertices = reduce_vertices(pairs, targets, candidates, config_.eps_a, config_.varsigma);
        const Hypergraph graph = sample_hyperedges(std::move(vertices), SamplingParams::from(config_), rng_);
        if (debug && debug->on_graph) debug->on_graph(frame.index, graph);

        const auto seek = ModeSeekingParams::from(config_);
        std::vector<Mode> modes = seek_all_modes(graph, seek);
        if (debug && debug->on_modes) debug->on_modes(frame.index, modes);
        ParsedModes parsed = parse_modes(std::move(modes), graph, config_.omega1, config_.omega2);
        if (parsed.reliable.empty()) return lost;

        std::map<PartId, const Part*> by_id;
        for (const auto& q : candidates) by_id[q.id] = &q;
        std::vector<Region> reliable_regions;
        for (const auto& r : parsed.reliable) reliable_regions.push_back({r.candidate_center, by_id.at(r.matched_candidate_id)->area});
        std::vector<Region> candidate_regions;
        for (const auto& [qid, _] : graph.vertices().by_candidate)
            candidate_regions.push_back({by_id.at(qid)->center, by_id.at(qid)->area});
        const ConfidenceMap map = build_confidence_map(search, reliable_regions, candidate_regions, config_.lambda);

        const Vec2 rough = rough_center(parsed.reliable, box_.center());
        const double delta = mean_diameter(candidates);
        const TargetState state =
            refine_state(map, rough, box_.w, box_.h, delta, config_.perturbation_samples, rng_);

        UpdateInputs update;
        update.reliable = parsed.reliable;
        for (const auto& m : parsed.modes)
            for (VertexId v : m.vertex_ids) update.mode_candidates.insert(graph.vertex(v).candidate_part_id);
        update.candidates = candidates;
        update.new_box = state.box;
        update.frame_index = frame.index;
        parts_ = update_target_set(parts_, update, config_);
        box_ = state.box;
        return {frame.index, box_, state.score, parsed.reliable.size(), false};
    }

    const Box& box() const { return box_; }
    const std::vector<TargetPart>& target_parts() const { return parts_; }
    const TrackerConfig& config() const { return config_; }

private:
    TrackerConfig config_;
    Canvas canvas_;
    std::mt19937_64 rng_;
    Box box_;
    std::vector<TargetPart> parts_;
};

inline std::vector<FrameResult> track_sequence(const Sequence& seq, const TrackerConfig& config,
                                               const DebugSink* debug = nullptr) {
    std::vector<FrameResult> out;
    if (seq.frames.empty()) return out;
    Tracker tracker(config, seq.canvas);
    out.push_back(tracker.start(seq.frames.front(), seq.init_box));
    for (std::size_t i = 1; i < seq.frames.size(); ++i) out.push_back(tracker.step(seq.frames[i], debug));
    return out;
}

// ---- results CSV -------------------------------------------------------------

inline constexpr const char* kResultsHeader = "frame,cx,cy,w,h,score,n_reliable";

inline void write_results(std::span<const FrameResult> results, std::ostream& out) {
    out << kResultsHeader << '\n';
    char buf[256];
    for (const auto& r : results) {
        std::snprintf(buf, sizeof buf, "%lld,%.6f,%.6f,%.6f,%.6f,%.6f,%zu\n", static_cast<long long>(r.frame), r.box.cx,
                      r.box.cy, r.box.w, r.box.h, r.score, r.n_reliable);
        out << buf;
    }
}

inline std::vector<FrameResult> read_results(std::istream& in) {
    std::vector<FrameResult> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line_no == 1) {
            if (line != kResultsHeader) throw ParseError(line_no, "unexpected results header");
            continue;
        }
        std::istringstream ss(line);
        FrameResult r;
        char c1, c2, c3, c4, c5, c6;
        long long frame = 0;
        if (!(ss >> frame >> c1 >> r.box.cx >> c2 >> r.box.cy >> c3 >> r.box.w >> c4 >> r.box.h >> c5 >> r.score >> c6 >>
              r.n_reliable) ||
            c1 != ',' || c2 != ',' || c3 != ',' || c4 != ',' || c5 != ',' || c6 != ',')
            throw ParseError(line_no, "malformed results row");
        r.frame = frame;
        out.push_back(r);
    }
    if (line_no == 0) throw ParseError(0, "empty results file");
    return out;
}

}  // namespace ggt

#endif  // GGT_TRACKER_HPP
