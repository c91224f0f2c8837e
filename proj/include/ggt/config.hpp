#ifndef GGT_CONFIG_HPP
#define GGT_CONFIG_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace ggt {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Every tunable scalar of the tracker. JSON keys match the field names.
struct TrackerConfig {
    int k = 3;                       // hypergraph order, 1..3
    double omega1 = 10.0;            // weight of association confidence
    double omega2 = 15.0;            // weight of geometric confidence
    double sigma_nu2 = 1.0;
    double sigma_psi2 = 1.0;
    double eps_a = 0.3;              // appearance threshold
    int varsigma = 5;                // vertices kept per target part
    int n_nu = 100;                  // max sampled hyperedges per vertex
    std::array<double, 3> lambda = {3.25, 1.0, -1.0};
    double mu = 0.0;                 // box bound; <= 0 means 1/(k+1)
    std::uint64_t rng_seed = 0;
    double convergence_tol = 1e-8;
    int max_updates_per_vertex = 200;
    double support_threshold = 1e-6;
    int perturbation_samples = 200;
    double feature_ema = 0.9;
    int miss_limit = 5;
    double search_scale = 3.0;
    double fg_threshold = 0.5;
    int rejection_factor = 20;       // hyperedge draws per budget unit before giving up
    double degenerate_angle = 1e-6;  // radians

    double box_bound() const { return mu > 0.0 ? mu : 1.0 / (k + 1); }

    void validate() const {
        if (k < 1 || k > 3) throw ConfigError("k must be 1, 2 or 3");
        const double m = box_bound();
        if (!(m > 0.0 && m <= 1.0)) throw ConfigError("mu must lie in (0,1]");
        if (1.0 / m < k + 1 - 1e-9) throw ConfigError("mu violates 1/mu >= k+1");
        if (!(sigma_nu2 > 0.0) || !(sigma_psi2 > 0.0)) throw ConfigError("sigma^2 must be positive");
        if (varsigma < 1) throw ConfigError("varsigma must be >= 1");
        if (n_nu < 0) throw ConfigError("n_nu must be >= 0");
        if (!(convergence_tol > 0.0)) throw ConfigError("convergence_tol must be positive");
        if (max_updates_per_vertex < 1) throw ConfigError("max_updates_per_vertex must be >= 1");
        if (perturbation_samples < 0) throw ConfigError("perturbation_samples must be >= 0");
        if (!(feature_ema >= 0.0 && feature_ema <= 1.0)) throw ConfigError("feature_ema must lie in [0,1]");
        if (miss_limit < 1) throw ConfigError("miss_limit must be >= 1");
        if (!(search_scale > 0.0)) throw ConfigError("search_scale must be positive");
        if (rejection_factor < 1) throw ConfigError("rejection_factor must be >= 1");
    }
};

inline void to_json(nlohmann::json& j, const TrackerConfig& c) {
    j = nlohmann::json{{"k", c.k},
                       {"omega1", c.omega1},
                       {"omega2", c.omega2},
                       {"sigma_nu2", c.sigma_nu2},
                       {"sigma_psi2", c.sigma_psi2},
                       {"eps_a", c.eps_a},
                       {"varsigma", c.varsigma},
                       {"n_nu", c.n_nu},
                       {"lambda", c.lambda},
                       {"mu", c.box_bound()},
                       {"rng_seed", c.rng_seed},
                       {"convergence_tol", c.convergence_tol},
                       {"max_updates_per_vertex", c.max_updates_per_vertex},
                       {"support_threshold", c.support_threshold},
                       {"perturbation_samples", c.perturbation_samples},
                       {"feature_ema", c.feature_ema},
                       {"miss_limit", c.miss_limit},
                       {"search_scale", c.search_scale},
                       {"fg_threshold", c.fg_threshold},
                       {"rejection_factor", c.rejection_factor},
                       {"degenerate_angle", c.degenerate_angle}};
}

// Missing keys keep their defaults; unknown keys are rejected.
inline void from_json(const nlohmann::json& j, TrackerConfig& c) {
    static const nlohmann::json known = nlohmann::json(TrackerConfig{});
    for (const auto& [key, _] : j.items())
        if (!known.contains(key)) throw ConfigError("unknown config key '" + key + "'");
    auto get = [&](const char* key, auto& field) {
        if (auto it = j.find(key); it != j.end()) it->get_to(field);
    };
    get("k", c.k);
    get("omega1", c.omega1);
    get("omega2", c.omega2);
    get("sigma_nu2", c.sigma_nu2);
    get("sigma_psi2", c.sigma_psi2);
    get("eps_a", c.eps_a);
    get("varsigma", c.varsigma);
    get("n_nu", c.n_nu);
    get("lambda", c.lambda);
    get("mu", c.mu);
    get("rng_seed", c.rng_seed);
    get("convergence_tol", c.convergence_tol);
    get("max_updates_per_vertex", c.max_updates_per_vertex);
    get("support_threshold", c.support_threshold);
    get("perturbation_samples", c.perturbation_samples);
    get("feature_ema", c.feature_ema);
    get("miss_limit", c.miss_limit);
    get("search_scale", c.search_scale);
    get("fg_threshold", c.fg_threshold);
    get("rejection_factor", c.rejection_factor);
    get("degenerate_angle", c.degenerate_angle);
}

inline TrackerConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    TrackerConfig c;
    try {
        c = nlohmann::json::parse(in).get<TrackerConfig>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    c.validate();
    return c;
}

}  // namespace ggt

#endif  // GGT_CONFIG_HPP
