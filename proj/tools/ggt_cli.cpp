#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ggt/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Geometric hypergraph part-based tracker"};
    app.require_subcommand(1);

    std::string seq, config, out, spec, results;
    bool dump_graph = false, dump_modes = false;
    std::vector<std::string> metrics;

    auto* track = app.add_subcommand("track", "Track the target through a part-sequence file");
    track->add_option("--seq", seq, "Part-sequence file (JSONL)")->required();
    track->add_option("--config", config, "Tracker config (JSON); defaults when omitted");
    track->add_option("--out", out, "Results CSV")->required();
    track->add_flag("--dump-graph", dump_graph, "Write per-frame hypergraphs to <out>.graph.jsonl");
    track->add_flag("--dump-modes", dump_modes, "Write per-frame modes to <out>.modes.jsonl");

    auto* synth = app.add_subcommand("synth", "Generate a synthetic part sequence");
    synth->add_option("--spec", spec, "Generator spec (JSON)")->required();
    synth->add_option("--out", out, "Output sequence file")->required();

    auto* eval = app.add_subcommand("eval", "Score a results CSV against ground truth");
    eval->add_option("--results", results, "Results CSV")->required();
    eval->add_option("--seq", seq, "Part-sequence file with gt boxes")->required();
    eval->add_option("--out", out, "Metrics JSON (curves go to the same stem with .csv)")->required();

    auto* plot = app.add_subcommand("plot", "Render precision and success plots as SVG");
    plot->add_option("--out", out, "Output SVG")->required();
    plot->add_option("metrics", metrics, "Curve CSVs written by eval")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*track) {
            ggt::commands::track(seq, config.empty() ? std::nullopt : std::optional<std::filesystem::path>(config), out,
                                 dump_graph, dump_modes);
        } else if (*synth) {
            ggt::commands::synth(spec, out);
        } else if (*eval) {
            const auto m = ggt::commands::eval(results, seq, out);
            std::cout << "precision@20=" << m.precision_at_20 << " success_auc=" << m.success_auc << '\n';
        } else if (*plot) {
            std::vector<std::filesystem::path> paths(metrics.begin(), metrics.end());
            ggt::commands::plot(paths, out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
