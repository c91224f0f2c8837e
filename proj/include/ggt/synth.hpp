#ifndef GGT_SYNTH_HPP
#define GGT_SYNTH_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

#include "ggt/correspondence.hpp"
#include "ggt/part_model.hpp"

namespace ggt {

/// Generator settings for a synthetic part sequence: a lattice of foreground
/// parts that translates, scales and jitters over a static background.
struct SynthSpec {
    Canvas canvas{400.0, 400.0};
    int frames = 60;
    int fg_parts = 30;
    int bg_parts = 90;
    Vec2 start_center{140.0, 200.0};
    double target_w = 60.0;
    double target_h = 60.0;
    Vec2 translation{2.0, 0.0};  // pixels per frame
    double scale_start = 1.0;
    double scale_end = 1.5;
    double jitter = 1.5;         // per-frame positional noise of fg parts
    int occlusion_start = -1;    // inclusive frame span; negative disables
    int occlusion_end = -1;
    double occlusion_fraction = 0.0;
    int feature_dim = 16;
    double feature_noise = 0.3;  // mass of the fixed per-part deviation from the prototype
    double frame_noise = 0.05;   // mass of the fresh per-frame deviation
    double clutter_fraction = 0.2;  // bg parts that pass the foreground threshold
    std::uint64_t seed = 1;

    void validate() const {
        if (frames < 1) throw std::invalid_argument("synth: frames must be >= 1");
        if (fg_parts < 1 || bg_parts < 0) throw std::invalid_argument("synth: bad part counts");
        if (feature_dim < 2 || feature_dim % 2) throw std::invalid_argument("synth: feature_dim must be even and >= 2");
        if (!(target_w > 0 && target_h > 0)) throw std::invalid_argument("synth: target size must be positive");
        if (!(canvas.width > 0 && canvas.height > 0)) throw std::invalid_argument("synth: canvas must be positive");
        if (!(occlusion_fraction >= 0.0 && occlusion_fraction <= 1.0))
            throw std::invalid_argument("synth: occlusion_fraction must lie in [0,1]");
        if (!(clutter_fraction >= 0.0 && clutter_fraction <= 1.0))
            throw std::invalid_argument("synth: clutter_fraction must lie in [0,1]");
        for (int t : {0, frames - 1}) {
            const double s = scale_at(t);
            const Vec2 c = center_at(t);
            const double hw = 0.5 * s * target_w + 3.0 * jitter;
            const double hh = 0.5 * s * target_h + 3.0 * jitter;
            if (!(s > 0.0) || c.x - hw < 0.0 || c.y - hh < 0.0 || c.x + hw > canvas.width || c.y + hh > canvas.height)
                throw std::invalid_argument("synth: target leaves the canvas at frame " + std::to_string(t));
        }
    }

    double scale_at(int t) const {
        if (frames <= 1) return scale_start;
        return scale_start + (scale_end - scale_start) * static_cast<double>(t) / static_cast<double>(frames - 1);
    }
    Vec2 center_at(int t) const { return start_center + static_cast<double>(t) * translation; }
    bool occluded_at(int t) const { return occlusion_start >= 0 && t >= occlusion_start && t <= occlusion_end; }
};

inline void to_json(nlohmann::json& j, const SynthSpec& s) {
    j = {{"canvas", {s.canvas.width, s.canvas.height}},
         {"frames", s.frames},
         {"fg_parts", s.fg_parts},
         {"bg_parts", s.bg_parts},
         {"start_center", {s.start_center.x, s.start_center.y}},
         {"target_size", {s.target_w, s.target_h}},
         {"translation", {s.translation.x, s.translation.y}},
         {"scale_ramp", {s.scale_start, s.scale_end}},
         {"jitter", s.jitter},
         {"occlusion", {{"frames", {s.occlusion_start, s.occlusion_end}}, {"fraction", s.occlusion_fraction}}},
         {"feature_dim", s.feature_dim},
         {"feature_noise", s.feature_noise},
         {"frame_noise", s.frame_noise},
         {"clutter_fraction", s.clutter_fraction},
         {"seed", s.seed}};
}

inline void from_json(const nlohmann::json& j, SynthSpec& s) {
    auto pair = [&](const char* key, double& a, double& b) {
        if (auto it = j.find(key); it != j.end()) {
            a = it->at(0).get<double>();
            b = it->at(1).get<double>();
        }
    };
    auto get = [&](const char* key, auto& field) {
        if (auto it = j.find(key); it != j.end()) it->get_to(field);
    };
    pair("canvas", s.canvas.width, s.canvas.height);
    get("frames", s.frames);
    get("fg_parts", s.fg_parts);
    get("bg_parts", s.bg_parts);
    pair("start_center", s.start_center.x, s.start_center.y);
    pair("target_size", s.target_w, s.target_h);
    pair("translation", s.translation.x, s.translation.y);
    pair("scale_ramp", s.scale_start, s.scale_end);
    get("jitter", s.jitter);
    if (auto it = j.find("occlusion"); it != j.end()) {
        s.occlusion_start = it->at("frames").at(0).get<int>();
        s.occlusion_end = it->at("frames").at(1).get<int>();
        s.occlusion_fraction = it->at("fraction").get<double>();
    }
    get("feature_dim", s.feature_dim);
    get("feature_noise", s.feature_noise);
    get("frame_noise", s.frame_noise);
    get("clutter_fraction", s.clutter_fraction);
    get("seed", s.seed);
}

/// Two-level prototype: heavy on one half of the bins, light on the other.
/// The two prototypes sit at chi2 distance 4/9.
inline std::vector<double> feature_prototype(int dim, bool foreground) {
    std::vector<double> h(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) {
        const bool first_half = i < dim / 2;
        h[static_cast<std::size_t>(i)] = (first_half == foreground) ? 1.0 : 0.2;
    }
    const double total = std::accumulate(h.begin(), h.end(), 0.0);
    for (double& v : h) v /= total;
    return h;
}

namespace detail {

template <class Rng>
std::vector<double> noisy_feature(std::span<const double> base, double amplitude, Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> h(base.begin(), base.end());
    for (double& v : h) v += amplitude * u(rng) / static_cast<double>(h.size());
    const double total = std::accumulate(h.begin(), h.end(), 0.0);
    for (double& v : h) v /= total;
    return h;
}

}  // namespace detail

inline Sequence synthesize(const SynthSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    // Foreground layout: near-regular lattice tiling the target extent.
    const int cols = std::max(1, static_cast<int>(std::ceil(std::sqrt(spec.fg_parts * spec.target_w / spec.target_h))));
    const int rows = (spec.fg_parts + cols - 1) / cols;
    const double cw = spec.target_w / cols;
    const double ch = spec.target_h / rows;
    const double tile_area = spec.target_w * spec.target_h / spec.fg_parts;
    struct FgPart {
        Vec2 offset;
        double area;
        std::vector<double> feature;
    };
    const auto fg_proto = feature_prototype(spec.feature_dim, true);
    const auto bg_proto = feature_prototype(spec.feature_dim, false);
    std::vector<FgPart> fg(static_cast<std::size_t>(spec.fg_parts));
    for (int i = 0; i < spec.fg_parts; ++i) {
        const int r = i / cols;
        const int c = i % cols;
        auto& p = fg[static_cast<std::size_t>(i)];
        p.offset = {(c + 0.5) * cw - 0.5 * spec.target_w + 0.25 * cw * (2.0 * unit(rng) - 1.0),
                    (r + 0.5) * ch - 0.5 * spec.target_h + 0.25 * ch * (2.0 * unit(rng) - 1.0)};
        p.area = tile_area * (0.8 + 0.4 * unit(rng));
        p.feature = detail::noisy_feature(fg_proto, spec.feature_noise, rng);
    }

    struct BgPart {
        Vec2 center;
        double area;
        bool clutter;
        std::vector<double> feature;
    };
    std::vector<BgPart> bg(static_cast<std::size_t>(spec.bg_parts));
    for (auto& p : bg) {
        p.center = {unit(rng) * spec.canvas.width, unit(rng) * spec.canvas.height};
        p.area = tile_area * (0.8 + 0.4 * unit(rng));
        p.clutter = unit(rng) < spec.clutter_fraction;
        p.feature = detail::noisy_feature(bg_proto, spec.feature_noise, rng);
    }

    std::vector<std::size_t> occluded_order(fg.size());
    std::iota(occluded_order.begin(), occluded_order.end(), 0);
    std::shuffle(occluded_order.begin(), occluded_order.end(), rng);
    const auto n_occluded = static_cast<std::size_t>(std::floor(spec.occlusion_fraction * spec.fg_parts + 1e-9));
    std::vector<char> hidden(fg.size(), 0);
    for (std::size_t i = 0; i < n_occluded; ++i) hidden[occluded_order[i]] = 1;

    Sequence seq;
    seq.feature_dim = spec.feature_dim;
    seq.canvas = spec.canvas;
    for (int t = 0; t < spec.frames; ++t) {
        const double s = spec.scale_at(t);
        const Vec2 c = spec.center_at(t);
        std::vector<Part> parts;
        double min_x = 1e300, min_y = 1e300, max_x = -1e300, max_y = -1e300, diam = 0.0;
        for (std::size_t i = 0; i < fg.size(); ++i) {
            Part p;
            p.center = c + s * fg[i].offset + spec.jitter * Vec2{gauss(rng), gauss(rng)};
            p.area = s * s * fg[i].area;
            p.fg_prob = 0.6 + 0.4 * unit(rng);
            p.feature = detail::noisy_feature(fg[i].feature, spec.frame_noise, rng);
            min_x = std::min(min_x, p.center.x);
            max_x = std::max(max_x, p.center.x);
            min_y = std::min(min_y, p.center.y);
            max_y = std::max(max_y, p.center.y);
            diam += p.diameter();
            if (!(spec.occluded_at(t) && hidden[i])) parts.push_back(std::move(p));
        }
        diam /= static_cast<double>(fg.size());
        const Box gt{0.5 * (min_x + max_x), 0.5 * (min_y + max_y), max_x - min_x + diam, max_y - min_y + diam};
        for (const auto& b : bg) {
            if (gt.contains(b.center)) continue;  // covered by the target
            Part p;
            p.center = b.center;
            p.area = b.area;
            p.fg_prob = b.clutter ? 0.5 + 0.4 * unit(rng) : 0.4 * unit(rng);
            p.feature = detail::noisy_feature(b.feature, spec.frame_noise, rng);
            parts.push_back(std::move(p));
        }
        std::vector<PartId> ids(parts.size());
        std::iota(ids.begin(), ids.end(), PartId{0});
        std::shuffle(ids.begin(), ids.end(), rng);
        for (std::size_t i = 0; i < parts.size(); ++i) parts[i].id = ids[i];
        std::sort(parts.begin(), parts.end(), [](const Part& a, const Part& b) { return a.id < b.id; });

        Frame frame;
        frame.index = t;
        frame.parts = std::move(parts);
        frame.gt_box = gt;
        if (t == 0) seq.init_box = gt;
        seq.frames.push_back(std::move(frame));
    }
    validate_sequence(seq);
    return seq;
}

inline SynthSpec load_synth_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open synth spec " + path.string());
    return nlohmann::json::parse(in).get<SynthSpec>();
}

}  // namespace ggt

#endif  // GGT_SYNTH_HPP
