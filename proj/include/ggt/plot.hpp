#ifndef GGT_PLOT_HPP
#define GGT_PLOT_HPP

#include <array>
#include <cstdio>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ggt/evaluation.hpp"

namespace ggt {

struct LabeledCurves {
    std::string label;
    CurveSet curves;
};

namespace detail {

inline std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

inline std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

}  // namespace detail

/// Precision and success plots side by side in one self-contained SVG.
inline std::string render_plots_svg(std::span<const LabeledCurves> runs) {
    if (runs.empty()) throw std::invalid_argument("plot: no metrics given");
    static constexpr std::array<const char*, 8> palette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                           "#9467bd", "#8c564b", "#e377c2", "#17becf"};
    constexpr double panel_w = 360, panel_h = 260, margin = 50, gap = 40;
    const double legend_h = 18.0 * static_cast<double>(runs.size()) + 10;
    const double width = 2 * (panel_w + margin) + gap;
    const double height = panel_h + 2 * margin + legend_h;

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::fmt("%.0f", width) + "\" height=\"" +
           detail::fmt("%.0f", height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    auto panel = [&](double x0, const char* title, const char* xlabel, double xmax, const Curve CurveSet::*which) {
        const double y0 = margin;
        svg += "<text x=\"" + detail::fmt("%.1f", x0 + panel_w / 2) + "\" y=\"" + detail::fmt("%.1f", y0 - 15) +
               "\" text-anchor=\"middle\" font-size=\"14\">" + title + "</text>\n";
        svg += "<rect x=\"" + detail::fmt("%.1f", x0) + "\" y=\"" + detail::fmt("%.1f", y0) + "\" width=\"" +
               detail::fmt("%.1f", panel_w) + "\" height=\"" + detail::fmt("%.1f", panel_h) +
               "\" fill=\"none\" stroke=\"black\"/>\n";
        for (int t = 0; t <= 5; ++t) {
            const double fx = t / 5.0;
            const double px = x0 + fx * panel_w;
            const double py = y0 + panel_h - fx * panel_h;
            svg += "<text x=\"" + detail::fmt("%.1f", px) + "\" y=\"" + detail::fmt("%.1f", y0 + panel_h + 15) +
                   "\" text-anchor=\"middle\">" + detail::fmt(xmax > 1.0 ? "%.0f" : "%.1f", fx * xmax) + "</text>\n";
            svg += "<text x=\"" + detail::fmt("%.1f", x0 - 5) + "\" y=\"" + detail::fmt("%.1f", py + 4) +
                   "\" text-anchor=\"end\">" + detail::fmt("%.1f", fx) + "</text>\n";
        }
        svg += "<text x=\"" + detail::fmt("%.1f", x0 + panel_w / 2) + "\" y=\"" +
               detail::fmt("%.1f", y0 + panel_h + 32) + "\" text-anchor=\"middle\">" + xlabel + "</text>\n";
        for (std::size_t r = 0; r < runs.size(); ++r) {
            const Curve& c = runs[r].curves.*which;
            std::string pts;
            for (std::size_t i = 0; i < c.thresholds.size(); ++i) {
                const double px = x0 + std::min(c.thresholds[i] / xmax, 1.0) * panel_w;
                const double py = y0 + panel_h - c.values[i] * panel_h;
                pts += detail::fmt("%.2f", px) + "," + detail::fmt("%.2f", py) + " ";
            }
            svg += "<polyline fill=\"none\" stroke-width=\"2\" stroke=\"" + std::string(palette[r % palette.size()]) +
                   "\" points=\"" + pts + "\"/>\n";
        }
    };
    panel(margin, "Precision plot", "Location error threshold (px)", kPrecisionMaxPx, &CurveSet::precision);
    panel(2 * margin + panel_w + gap, "Success plot", "Overlap threshold", 1.0, &CurveSet::success);

    double ly = margin + panel_h + 50;
    for (std::size_t r = 0; r < runs.size(); ++r, ly += 18) {
        const std::string color = palette[r % palette.size()];
        svg += "<line x1=\"" + detail::fmt("%.1f", margin) + "\" y1=\"" + detail::fmt("%.1f", ly) + "\" x2=\"" +
               detail::fmt("%.1f", margin + 25) + "\" y2=\"" + detail::fmt("%.1f", ly) + "\" stroke=\"" + color +
               "\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"" + detail::fmt("%.1f", margin + 32) + "\" y=\"" + detail::fmt("%.1f", ly + 4) + "\">" +
               detail::escape_xml(runs[r].label) + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace ggt

#endif  // GGT_PLOT_HPP
