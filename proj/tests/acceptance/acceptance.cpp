// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "ggt/ggt.hpp"
#include "test_support.hpp"

using namespace ggt;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
    std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// ---- optimizer --------------------------------------------------------------

void optimizer_correctness() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(20240601);
    ModeSeekingParams params;
    params.mu = 0.25;

    long updates = 0;
    int bad_sum = 0, bad_bound = 0, bad_monotone = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const int n = std::uniform_int_distribution<int>(5, 12)(rng);
        const Hypergraph g = ggt::testing::random_hypergraph(rng, n, 4 * n);
        for (VertexId start = 0; start < static_cast<VertexId>(g.vertex_count()); ++start) {
            double prev = -1e300;
            seek_mode(g, start, params, [&](std::span<const double> x, double f) {
                ++updates;
                if (std::abs(std::accumulate(x.begin(), x.end(), 0.0) - 1.0) > 1e-12) ++bad_sum;
                for (double v : x)
                    if (v < -1e-12 || v > params.mu + 1e-12) ++bad_bound;
                if (f < prev - 1e-12) ++bad_monotone;
                prev = f;
            });
        }
    }

    int planted_ok = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const auto inst = ggt::testing::planted_clique(rng, 12, 4, 12);
        const auto oracle = brute_force_oracle(inst.graph, 4, 4, params.mu, params.omega1, params.omega2);
        const auto modes = seek_all_modes(inst.graph, params);
        bool ok = oracle.support == inst.clique && !modes.empty() && modes.front().vertex_ids == oracle.support;
        for (VertexId v : inst.clique) {
            const auto m = seek_mode(inst.graph, v, params);
            ok = ok && m && m->vertex_ids == oracle.support;
        }
        planted_ok += ok;
    }
    const double dt = seconds_since(t0);
    const bool ok = bad_sum == 0 && bad_bound == 0 && bad_monotone == 0 && planted_ok == 20 && dt < 10.0;
    report(ok, "optimizer-correctness",
           fmt("%ld states checked, sum violations %d, bound violations %d, objective decreases %d; "
               "planted cliques recovered %d/20; %.2f s",
               updates, bad_sum, bad_bound, bad_monotone, planted_ok, dt));
}

// ---- scale invariance --------------------------------------------------------

void scale_invariance() {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> pos(0.0, 100.0);
    std::uniform_real_distribution<double> noise(-2.0, 2.0);
    std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
    double worst = 0.0;
    int pair_decreases = 0, triangles = 0;
    while (triangles < 1000) {
        std::array<Vec2, 3> p, q;
        for (int i = 0; i < 3; ++i) {
            p[i] = {pos(rng), pos(rng)};
            q[i] = p[i] + Vec2{noise(rng), noise(rng)};
        }
        if (is_degenerate_triangle(p[0], p[1], p[2]) || is_degenerate_triangle(q[0], q[1], q[2])) continue;
        ++triangles;
        const double base = triangle_geometric_confidence(p, q, 1.0);
        const Vec2 origin{pos(rng), pos(rng)};
        for (double c : {0.5, 2.0, 5.0}) {
            std::array<Vec2, 3> qs;
            for (int i = 0; i < 3; ++i) qs[i] = origin + c * (q[i] - origin);
            worst = std::max(worst, std::abs(triangle_geometric_confidence(p, qs, 1.0) - base));
        }
        const double th = angle(rng);
        const Vec2 shift{pos(rng), pos(rng)};
        std::array<Vec2, 3> qr;
        for (int i = 0; i < 3; ++i)
            qr[i] = Vec2{std::cos(th) * q[i].x - std::sin(th) * q[i].y, std::sin(th) * q[i].x + std::cos(th) * q[i].y} + shift;
        worst = std::max(worst, std::abs(triangle_geometric_confidence(p, qr, 1.0) - base));

        const double pair = pairwise_geometric_confidence(p[0], p[1], q[0], q[1], 1.0);
        const double pair2 = pairwise_geometric_confidence(p[0], p[1], 2.0 * q[0], 2.0 * q[1], 1.0);
        pair_decreases += pair2 < pair;
    }
    const double frac = pair_decreases / 1000.0;
    report(worst <= 1e-9 && frac >= 0.99, "scale-invariance",
           fmt("max |delta Xi(k=3)| = %.3g over 1000 triangles x {0.5,2,5, rigid}; Xi(k=2) decreased in %.1f%% at c=2",
               worst, 100.0 * frac));
}

// ---- sampling bounds ---------------------------------------------------------

void sampling_bounds() {
    std::mt19937_64 rng(99);
    bool ok = true;
    std::string detail;
    for (int n : {20, 100}) {
        for (int k : {2, 3}) {
            std::uniform_real_distribution<double> pos(0.0, 100.0);
            std::uniform_real_distribution<double> u(0.0, 1.0);
            const int dim = 8;
            auto hist = [&] {
                std::vector<double> h(dim);
                double s = 0;
                for (double& v : h) s += (v = 1.0 + 0.5 * u(rng));
                for (double& v : h) v /= s;
                return h;
            };
            std::vector<Part> P, Q;
            for (int i = 0; i < n; ++i) P.push_back(ggt::testing::make_part(i, {pos(rng), pos(rng)}, 20, hist()));
            for (int i = 0; i < n; ++i) Q.push_back(ggt::testing::make_part(i, {pos(rng), pos(rng)}, 20, hist()));
            SearchArea area;
            area.width = 100;
            area.height = 100;
            auto pairs = distance_gate(P, Q, area, static_cast<std::size_t>(n));
            score_pairs(pairs, P, Q, 1.0);
            TrackerConfig config;
            config.k = k;
            VertexSet vs = reduce_vertices(pairs, P, Q, config.eps_a, config.varsigma);
            const std::size_t nv = vs.size();
            const Hypergraph g = sample_hyperedges(std::move(vs), SamplingParams::from(config), rng);

            bool case_ok = nv <= static_cast<std::size_t>(n * config.varsigma);
            std::map<VertexId, int> per_vertex;
            std::set<std::vector<VertexId>> seen;
            for (const auto& e : g.hyperedges()) {
                ++per_vertex[e.source];
                const auto ids = e.vertices();
                case_ok = case_ok && e.order == k && seen.insert({ids.begin(), ids.end()}).second;
                for (std::size_t a = 0; a < ids.size(); ++a)
                    for (std::size_t b = a + 1; b < ids.size(); ++b)
                        case_ok = case_ok && !g.vertex(ids[a]).conflicts_with(g.vertex(ids[b]));
            }
            long budget_total = 0;
            for (VertexId v = 0; v < static_cast<VertexId>(g.vertex_count()); ++v) {
                const int budget = hyperedge_budget(g.vertex(v).gamma_hat, config.n_nu);
                budget_total += budget;
                case_ok = case_ok && per_vertex[v] <= budget;
            }
            case_ok = case_ok && static_cast<long>(g.hyperedges().size()) <= budget_total;
            ok = ok && case_ok;
            detail += fmt("n=%d k=%d: |V*|=%zu<=%d, |E|=%zu<=%ld; ", n, k, nv, n * config.varsigma, g.hyperedges().size(),
                          budget_total);
        }
    }
    report(ok, "sampling-bounds", detail + "all hyperedges conflict-free and unique");
}

// ---- Algorithm 1 -------------------------------------------------------------

void mode_parsing_property() {
    std::mt19937_64 rng(5150);
    const int n = 24;
    const Hypergraph g(ggt::testing::disjoint_vertices(std::vector<double>(n, 0.5)), 3);
    int ok_count = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Mode> modes;
        const int m = std::uniform_int_distribution<int>(2, 15)(rng);
        for (int i = 0; i < m; ++i) {
            std::set<VertexId> ids;
            const int size = std::uniform_int_distribution<int>(1, 8)(rng);
            while (static_cast<int>(ids.size()) < size) ids.insert(std::uniform_int_distribution<VertexId>(0, n - 1)(rng));
            Mode mode;
            mode.vertex_ids.assign(ids.begin(), ids.end());
            mode.omega = std::uniform_real_distribution<double>(0.0, 100.0)(rng);
            mode.start_vertex = i;
            modes.push_back(std::move(mode));
        }
        const auto out = parse_modes(modes, g, 10, 15);
        bool ok = true;
        std::set<VertexId> used;
        for (const auto& mode : out.modes)
            for (VertexId v : mode.vertex_ids) ok = ok && used.insert(v).second;
        for (VertexId v : used) {
            const Mode* best = nullptr;
            for (const auto& mode : modes)
                if (std::binary_search(mode.vertex_ids.begin(), mode.vertex_ids.end(), v) && (!best || mode.omega > best->omega))
                    best = &mode;
            const auto holder = std::find_if(out.modes.begin(), out.modes.end(), [&](const Mode& mode) {
                return std::binary_search(mode.vertex_ids.begin(), mode.vertex_ids.end(), v);
            });
            ok = ok && best && holder != out.modes.end() && holder->start_vertex == best->start_vertex;
        }
        std::set<PartId> targets;
        for (const auto& r : out.reliable) ok = ok && targets.insert(r.target_part_id).second;
        ok_count += ok;
    }
    report(ok_count == 100, "algorithm-1", fmt("%d/100 random collections disjoint with every contested vertex in its highest-omega mode", ok_count));
}

// ---- tracking ----------------------------------------------------------------

struct RunStats {
    double auc = 0.0;
    double mean_iou = 0.0;
    double center_error = 0.0;
    double seconds = 0.0;
    std::vector<double> iou;
};

RunStats run_tracker(const SynthSpec& spec, int k) {
    const Sequence seq = synthesize(spec);
    TrackerConfig config;
    config.k = k;
    config.rng_seed = spec.seed;
    const auto t0 = Clock::now();
    const auto results = track_sequence(seq, config);
    RunStats s;
    s.seconds = seconds_since(t0);
    const Metrics m = evaluate(results, seq);
    s.auc = m.success_auc;
    s.mean_iou = m.mean_iou;
    s.center_error = m.mean_center_error;
    for (const auto& f : m.per_frame) s.iou.push_back(f.iou);
    return s;
}

void tracking_and_ablation() {
    std::array<std::vector<RunStats>, 4> runs;
    for (int k : {3, 2, 1})
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            SynthSpec spec;
            spec.seed = seed;
            runs[static_cast<std::size_t>(k)].push_back(run_tracker(spec, k));
        }

    const auto& k3 = runs[3];
    bool ok = true;
    double iou_sum = 0.0, ce_sum = 0.0, slowest = 0.0;
    std::string per_seed;
    for (std::size_t i = 0; i < k3.size(); ++i) {
        ok = ok && k3[i].mean_iou >= 0.5 && k3[i].center_error <= 10.0 && k3[i].seconds < 60.0;
        iou_sum += k3[i].mean_iou;
        ce_sum += k3[i].center_error;
        slowest = std::max(slowest, k3[i].seconds);
        per_seed += fmt("%s%.3f/%.2f", i ? " " : "", k3[i].mean_iou, k3[i].center_error);
    }
    report(ok, "synthetic-tracking",
           fmt("k=3 mean IoU %.3f, mean center error %.2f px over 5 seeds (per seed IoU/err: %s); slowest run %.1f s",
               iou_sum / 5, ce_sum / 5, per_seed.c_str(), slowest));

    std::array<double, 4> auc{};
    for (int k : {1, 2, 3}) {
        for (const auto& r : runs[static_cast<std::size_t>(k)]) auc[static_cast<std::size_t>(k)] += r.auc;
        auc[static_cast<std::size_t>(k)] /= 5.0;
    }
    const bool trend = auc[3] >= auc[2] && auc[2] >= auc[1] && auc[3] - auc[1] >= 0.03;
    report(trend, "k-order-ablation",
           fmt("mean success AUC k=1 %.3f, k=2 %.3f, k=3 %.3f (k3-k1 = %.3f)", auc[1], auc[2], auc[3], auc[3] - auc[1]));
}

void occlusion_recovery() {
    bool ok = true;
    std::string detail;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        SynthSpec spec;
        spec.seed = seed;
        spec.occlusion_start = 20;
        spec.occlusion_end = 30;
        spec.occlusion_fraction = 0.5;
        const RunStats r = run_tracker(spec, 3);
        int first = -1;
        for (int t = 31; t <= 35; ++t)
            if (r.iou[static_cast<std::size_t>(t)] >= 0.5) {
                first = t;
                break;
            }
        ok = ok && first >= 0;
        detail += fmt("seed %llu: IoU>=0.5 at frame %d (min IoU during occlusion %.2f); ",
                      static_cast<unsigned long long>(seed), first,
                      *std::min_element(r.iou.begin() + 20, r.iou.begin() + 31));
    }
    report(ok, "occlusion-robustness", detail);
}

// ---- determinism -------------------------------------------------------------

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void determinism() {
    const fs::path dir = fs::temp_directory_path() / "ggt_acceptance_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);
    {
        std::ofstream(dir / "spec.json") << R"({"frames": 12, "seed": 4})";
        std::ofstream(dir / "config.json") << R"({"rng_seed": 21})";
    }
    const std::string d = dir.string() + "/";
    auto cli = [&](const std::string& args) {
        return std::system((std::string("\"") + GGT_CLI_PATH + "\" " + args + " > /dev/null 2>&1").c_str());
    };
    bool ran = true;
    for (const std::string r : {"1", "2"}) {
        ran = ran && cli("synth --spec " + d + "spec.json --out " + d + "seq" + r + ".jsonl") == 0;
        ran = ran && cli("track --seq " + d + "seq1.jsonl --config " + d + "config.json --out " + d + "res" + r +
                         ".csv --dump-graph --dump-modes") == 0;
        ran = ran && cli("eval --results " + d + "res1.csv --seq " + d + "seq1.jsonl --out " + d + "m" + r + ".json") == 0;
        ran = ran && cli("plot --out " + d + "plot" + r + ".svg " + d + "m1.csv") == 0;
    }
    int identical = 0, compared = 0;
    for (const std::string stem : {"seq#.jsonl", "res#.csv", "res#.csv.graph.jsonl", "res#.csv.modes.jsonl", "m#.json",
                                   "m#.csv", "plot#.svg"}) {
        std::string a = stem, b = stem;
        a.replace(a.find('#'), 1, "1");
        b.replace(b.find('#'), 1, "2");
        const std::string ca = slurp(dir / a);
        ++compared;
        identical += !ca.empty() && ca == slurp(dir / b);
    }
    report(ran && identical == compared, "determinism",
           fmt("synth, track (with graph and mode dumps), eval and plot run twice: %d/%d outputs byte-identical", identical,
               compared));
}

}  // namespace

int main() {
    optimizer_correctness();
    scale_invariance();
    sampling_bounds();
    mode_parsing_property();
    tracking_and_ablation();
    occlusion_recovery();
    determinism();
    std::printf("%d criteria failed\n", failures);
    return failures;
}
