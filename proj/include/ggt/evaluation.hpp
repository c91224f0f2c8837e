#ifndef GGT_EVALUATION_HPP
#define GGT_EVALUATION_HPP

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ggt/part_model.hpp"
#include "ggt/tracker.hpp"

namespace ggt {

inline constexpr int kPrecisionMaxPx = 50;
inline constexpr int kSuccessSteps = 20;  // thresholds 0, 0.05, ..., 1
inline constexpr double kPrecisionThresholdPx = 20.0;

struct FrameMetrics {
    std::int64_t frame = 0;
    double iou = 0.0;
    double center_error = 0.0;
};

struct Curve {
    std::vector<double> thresholds;
    std::vector<double> values;
};

struct Metrics {
    double precision_at_20 = 0.0;
    double success_auc = 0.0;
    double mean_iou = 0.0;
    double mean_center_error = 0.0;
    std::vector<FrameMetrics> per_frame;
    Curve precision;  // fraction of frames with center error <= threshold (px)
    Curve success;    // fraction of frames with IoU >= threshold
};

inline double fraction_at_most(const std::vector<FrameMetrics>& frames, double threshold) {
    std::size_t hit = 0;
    for (const auto& f : frames) hit += f.center_error <= threshold;
    return frames.empty() ? 0.0 : static_cast<double>(hit) / static_cast<double>(frames.size());
}

inline double fraction_iou_at_least(const std::vector<FrameMetrics>& frames, double threshold) {
    std::size_t hit = 0;
    for (const auto& f : frames) hit += f.iou >= threshold;
    return frames.empty() ? 0.0 : static_cast<double>(hit) / static_cast<double>(frames.size());
}

inline Metrics evaluate(std::span<const FrameResult> results, const Sequence& seq) {
    if (results.size() != seq.frames.size())
        throw std::invalid_argument("evaluate: " + std::to_string(results.size()) + " result rows for " +
                                    std::to_string(seq.frames.size()) + " frames");
    Metrics m;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const Frame& f = seq.frames[i];
        if (results[i].frame != f.index) throw std::invalid_argument("evaluate: frame index mismatch at row " + std::to_string(i));
        if (!f.gt_box) throw std::invalid_argument("evaluate: frame " + std::to_string(f.index) + " has no ground truth");
        m.per_frame.push_back({f.index, iou(results[i].box, *f.gt_box), center_error(results[i].box, *f.gt_box)});
    }
    for (const auto& f : m.per_frame) {
        m.mean_iou += f.iou;
        m.mean_center_error += f.center_error;
    }
    if (!m.per_frame.empty()) {
        m.mean_iou /= static_cast<double>(m.per_frame.size());
        m.mean_center_error /= static_cast<double>(m.per_frame.size());
    }
    for (int px = 0; px <= kPrecisionMaxPx; ++px) {
        m.precision.thresholds.push_back(px);
        m.precision.values.push_back(fraction_at_most(m.per_frame, px));
    }
    double area = 0.0;
    for (int i = 0; i <= kSuccessSteps; ++i) {
        const double thr = static_cast<double>(i) / kSuccessSteps;
        const double v = fraction_iou_at_least(m.per_frame, thr);
        m.success.thresholds.push_back(thr);
        m.success.values.push_back(v);
        area += v;
    }
    m.success_auc = area / (kSuccessSteps + 1);
    m.precision_at_20 = fraction_at_most(m.per_frame, kPrecisionThresholdPx);
    return m;
}

inline nlohmann::json metrics_to_json(const Metrics& m) {
    nlohmann::json frames = nlohmann::json::array();
    for (const auto& f : m.per_frame)
        frames.push_back({{"frame", f.frame}, {"iou", f.iou}, {"center_error", f.center_error}});
    return {{"version", 1},
            {"precision_at_20", m.precision_at_20},
            {"success_auc", m.success_auc},
            {"mean_iou", m.mean_iou},
            {"mean_center_error", m.mean_center_error},
            {"per_frame", frames}};
}

inline constexpr const char* kCurvesHeader = "curve,threshold,value";

/// Per-threshold rows for plotting: "precision,<px>,<frac>" and "success,<iou>,<frac>".
inline void write_curves(const Metrics& m, std::ostream& out) {
    out << kCurvesHeader << '\n';
    char buf[128];
    auto emit = [&](const char* name, const Curve& c) {
        for (std::size_t i = 0; i < c.thresholds.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%s,%.2f,%.6f\n", name, c.thresholds[i], c.values[i]);
            out << buf;
        }
    };
    emit("precision", m.precision);
    emit("success", m.success);
}

struct CurveSet {
    Curve precision;
    Curve success;
};

inline CurveSet read_curves(std::istream& in) {
    CurveSet set;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line_no == 1) {
            if (line != kCurvesHeader) throw ParseError(line_no, "unexpected curves header");
            continue;
        }
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos) throw ParseError(line_no, "malformed curves row");
        const std::string name = line.substr(0, c1);
        Curve* target = name == "precision" ? &set.precision : name == "success" ? &set.success : nullptr;
        if (!target) throw ParseError(line_no, "unknown curve '" + name + "'");
        try {
            target->thresholds.push_back(std::stod(line.substr(c1 + 1, c2 - c1 - 1)));
            target->values.push_back(std::stod(line.substr(c2 + 1)));
        } catch (const std::exception&) {
            throw ParseError(line_no, "malformed number");
        }
    }
    return set;
}

}  // namespace ggt

#endif  // GGT_EVALUATION_HPP
