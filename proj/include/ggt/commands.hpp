#ifndef GGT_COMMANDS_HPP
#define GGT_COMMANDS_HPP

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ggt/config.hpp"
#include "ggt/evaluation.hpp"
#include "ggt/plot.hpp"
#include "ggt/sequence_io.hpp"
#include "ggt/synth.hpp"
#include "ggt/tracker.hpp"

// File-level entry points behind the `ggt` subcommands.

namespace ggt::commands {

namespace fs = std::filesystem;

inline std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

/// Side files next to the results: <out>.graph.jsonl and <out>.modes.jsonl.
inline fs::path debug_path(const fs::path& out, const char* what) {
    fs::path p = out;
    p += std::string(".") + what + ".jsonl";
    return p;
}

inline void track(const fs::path& seq_path, const std::optional<fs::path>& config_path, const fs::path& out_path,
                  bool dump_graph = false, bool dump_modes = false) {
    const Sequence seq = read_sequence(seq_path);
    const TrackerConfig config = config_path ? load_config(*config_path) : TrackerConfig{};
    config.validate();

    std::ofstream graph_out;
    std::ofstream modes_out;
    DebugSink sink;
    if (dump_graph) {
        graph_out = open_output(debug_path(out_path, "graph"));
        sink.on_graph = [&](std::int64_t frame, const Hypergraph& g) {
            nlohmann::json j = graph_to_json(g);
            j["frame"] = frame;
            graph_out << j.dump() << '\n';
        };
    }
    if (dump_modes) {
        modes_out = open_output(debug_path(out_path, "modes"));
        sink.on_modes = [&](std::int64_t frame, std::span<const Mode> modes) {
            modes_out << nlohmann::json{{"frame", frame}, {"modes", modes_to_json(modes)}}.dump() << '\n';
        };
    }
    const auto results = track_sequence(seq, config, &sink);
    auto out = open_output(out_path);
    write_results(results, out);
}

inline void synth(const fs::path& spec_path, const fs::path& out_path) {
    write_sequence(synthesize(load_synth_spec(spec_path)), out_path);
}

/// The curves CSV goes next to the JSON with a .csv extension.
inline fs::path curves_path(const fs::path& metrics_json) {
    fs::path p = metrics_json;
    p.replace_extension(".csv");
    if (p == metrics_json) p += ".csv";
    return p;
}

inline Metrics eval(const fs::path& results_path, const fs::path& seq_path, const fs::path& out_path) {
    std::ifstream in(results_path);
    if (!in) throw std::runtime_error("cannot open results " + results_path.string());
    const auto results = read_results(in);
    const Sequence seq = read_sequence(seq_path);
    const Metrics m = evaluate(results, seq);
    {
        auto out = open_output(out_path);
        out << metrics_to_json(m).dump(2) << '\n';
    }
    auto csv = open_output(curves_path(out_path));
    write_curves(m, csv);
    return m;
}

inline void plot(const std::vector<fs::path>& inputs, const fs::path& out_path) {
    if (inputs.empty()) throw std::invalid_argument("plot: at least one metrics CSV is required");
    std::vector<LabeledCurves> runs;
    for (const auto& p : inputs) {
        std::ifstream in(p);
        if (!in) throw std::runtime_error("cannot open " + p.string());
        runs.push_back({p.filename().string(), read_curves(in)});
    }
    auto out = open_output(out_path);
    out << render_plots_svg(runs);
}

}  // namespace ggt::commands

#endif  // GGT_COMMANDS_HPP
